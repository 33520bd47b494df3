use std::collections::{BTreeMap, BTreeSet};

use super::gl::is_fiber;
use super::{GLBundle, LinError};
use crate::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use crate::superalg::{integer, rational, Assignment, MultiWeight, SuperPolynomial, Variable};

/// Identification of the fiber coordinates of one chart of a GL-bundle with
/// potentials: base coordinates for the non-top fibers, fresh coordinates
/// of weight `k` for the top ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChartMatching {
    /// Fiber coordinate → its potential.
    pub potential: BTreeMap<Variable, Variable>,
    /// Fiber coordinates of first weight `k − 1`.
    pub top: Vec<Variable>,
}

impl ChartMatching {
    /// `f ↦ w(ν(f)) · ν(f)` for every fiber coordinate `f`.
    pub fn holonomic(&self) -> Assignment {
        self.potential
            .iter()
            .map(|(f, p)| (f.clone(), SuperPolynomial::var(p).scale(&integer(p.weight().total() as i64))))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricStructure {
    pub degree: u64,
    pub charts: Vec<ChartMatching>,
}

fn not_symmetric(reason: impl Into<String>) -> LinError {
    LinError::NotSymmetric {
        reason: reason.into(),
        residual: String::new(),
    }
}

fn potential_name(top: &Variable, taken: &BTreeSet<String>) -> String {
    match top.name().strip_prefix('d') {
        Some(stem) if !stem.is_empty() && !taken.contains(stem) => stem.to_string(),
        _ => CoordinateSystem::fresh_name(taken, "h", top.name()),
    }
}

fn match_chart(chart: &CoordinateSystem, k: u64) -> Result<ChartMatching, LinError> {
    let mut potential = BTreeMap::new();
    let mut top = Vec::new();
    let mut taken = chart.names();
    let base: Vec<&Variable> = chart.variables().iter().filter(|v| !is_fiber(v)).collect();
    for w in 1..k {
        let b: Vec<&Variable> = base.iter().copied().filter(|v| v.weight().component(0) as u64 == w).collect();
        let f: Vec<&Variable> = chart
            .variables()
            .iter()
            .filter(|v| is_fiber(v) && v.weight().component(0) as u64 == w - 1)
            .collect();
        if b.len() != f.len() {
            return Err(not_symmetric(format!(
                "chart {}: {} base coordinates of weight {w} but {} fiber coordinates of weight ({}, 1)",
                chart.name(),
                b.len(),
                f.len(),
                w - 1
            )));
        }
        for (fv, bv) in f.into_iter().zip(b) {
            if fv.parity() != bv.parity() {
                return Err(not_symmetric(format!("parity of {fv} and {bv} differ")));
            }
            potential.insert(fv.clone(), bv.clone());
        }
    }
    let mut rank = base.iter().map(|v| v.rank() + 1).max().unwrap_or(0);
    for fv in chart.variables().iter().filter(|v| is_fiber(v) && v.weight().component(0) as u64 == k - 1) {
        let name = potential_name(fv, &taken);
        taken.insert(name.clone());
        let z = Variable::ranked(rank, name, MultiWeight::single(k as u32), fv.parity());
        rank += 1;
        potential.insert(fv.clone(), z);
        top.push(fv.clone());
    }
    if let Some(b) = base.iter().find(|v| v.weight().component(0) as u64 >= k) {
        return Err(not_symmetric(format!("base coordinate {b} has weight at least {k}")));
    }
    Ok(ChartMatching { potential, top })
}

/// The fiber part `f ↦ Σ_j f_j g_j` of a transition: coefficients `g_j`.
fn coefficients(img: &SuperPolynomial, fibers: &[&Variable]) -> Vec<SuperPolynomial> {
    fibers.iter().map(|f| img.partial(f)).collect()
}

fn check_transition(
    g: &GLBundle,
    t: &TransitionMap,
    src: &ChartMatching,
    tgt: &ChartMatching,
) -> Result<(), LinError> {
    let source = g.chart(t.source);
    let fibers: Vec<&Variable> = source.variables().iter().filter(|v| is_fiber(v)).collect();
    for (fv, pot) in &tgt.potential {
        let img = &t.forward[fv];
        if !tgt.top.contains(fv) {
            let expected = crate::bundle::differential(&t.forward[pot], &invert(&src.potential));
            let residual = img - &expected;
            if !residual.is_zero() {
                return Err(LinError::NotSymmetric {
                    reason: format!("{fv} is not the vertical lift of {pot}"),
                    residual: residual.to_string(),
                });
            }
        }
        let gs = coefficients(img, &fibers);
        for (i, fi) in fibers.iter().enumerate() {
            for (j, fj) in fibers.iter().enumerate().skip(i + 1) {
                let sign = if fi.is_odd() && fj.is_odd() { -1 } else { 1 };
                let residual = &gs[j].partial(&src.potential[*fi]) - &gs[i].partial(&src.potential[*fj]).scale_int(sign);
                if !residual.is_zero() {
                    return Err(LinError::NotSymmetric {
                        reason: format!("the {fv} law is not exact in ({fi}, {fj})"),
                        residual: residual.to_string(),
                    });
                }
            }
        }
    }
    Ok(())
}

fn invert(potential: &BTreeMap<Variable, Variable>) -> BTreeMap<Variable, Variable> {
    potential.iter().map(|(f, p)| (p.clone(), f.clone())).collect()
}

/// Decides whether a GL-bundle is the linearisation of a graded bundle,
/// returning the matching of fiber coordinates with potentials.
pub fn check_symmetric(g: &GLBundle) -> Result<SymmetricStructure, LinError> {
    let k = g.degree();
    if k == 0 {
        return Err(LinError::DegreeZero);
    }
    let charts: Vec<ChartMatching> = g
        .bundle()
        .charts()
        .iter()
        .map(|c| match_chart(c, k))
        .collect::<Result<_, _>>()?;
    for t in g.bundle().transitions() {
        check_transition(g, t, &charts[t.source], &charts[t.target])?;
    }
    Ok(SymmetricStructure { degree: k, charts })
}

pub fn is_symmetric(g: &GLBundle) -> bool {
    check_symmetric(g).is_ok()
}

fn reconstruct_map(
    map: &Assignment,
    from: &ChartMatching,
    to: &ChartMatching,
    k: u64,
) -> Assignment {
    let holo = from.holonomic();
    let mut out = Assignment::new();
    for (v, img) in map {
        if !is_fiber(v) {
            out.insert(v.clone(), img.clone());
        } else if to.top.contains(v) {
            let z = &to.potential[v];
            out.insert(z.clone(), img.substitute_unchecked(&holo).scale(&rational(1, k as i64)));
        }
    }
    out
}

/// The graded bundle `F` with `D(F) ≅ G`, for a symmetric `G`.
pub fn reconstruct(g: &GLBundle) -> Result<GradedBundle, LinError> {
    let s = check_symmetric(g)?;
    let charts: Vec<CoordinateSystem> = g
        .bundle()
        .charts()
        .iter()
        .zip(&s.charts)
        .map(|(c, m)| {
            let mut vars: Vec<Variable> = c.variables().iter().filter(|v| !is_fiber(v)).cloned().collect();
            vars.extend(m.top.iter().map(|t| m.potential[t].clone()));
            CoordinateSystem::from_variables(c.name(), 1, vars)
        })
        .collect::<Result<_, _>>()?;
    let transitions = g
        .bundle()
        .transitions()
        .iter()
        .map(|t| {
            let (src, tgt) = (&s.charts[t.source], &s.charts[t.target]);
            TransitionMap::new(
                t.source,
                t.target,
                reconstruct_map(&t.forward, src, tgt, s.degree),
                t.inverse.as_ref().map(|inv| reconstruct_map(inv, tgt, src, s.degree)),
            )
        })
        .collect();
    Ok(GradedBundle::from_parts(1, charts, transitions)?)
}
