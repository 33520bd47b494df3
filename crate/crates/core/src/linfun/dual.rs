use std::collections::BTreeMap;

use super::gl::is_fiber;
use super::linearise::{linearise, linearise_chart};
use super::{GLBundle, LinError};
use crate::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use crate::report::Check;
use crate::superalg::{integer, Assignment, MultiWeight, SuperPolynomial, Variable};

/// Chart of the dual of a GL-bundle: the base coordinates together with one
/// momentum per fiber coordinate.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DualChart {
    pub chart: CoordinateSystem,
    /// Fiber coordinate → dual momentum.
    pub duals: BTreeMap<Variable, Variable>,
}

/// Momentum of a fiber coordinate of first weight `a` gets weight `(k−1−a, 1)`.
pub fn dual_chart(chart: &CoordinateSystem, k: u64) -> DualChart {
    let mut taken = chart.names();
    let mut vars: Vec<Variable> = chart.variables().iter().filter(|v| !is_fiber(v)).cloned().collect();
    let mut duals = BTreeMap::new();
    let mut rank = chart.next_rank();
    for f in chart.variables().iter().filter(|v| is_fiber(v)) {
        let name = CoordinateSystem::fresh_name(&taken, "p_", f.name());
        taken.insert(name.clone());
        let a = f.weight().component(0);
        let p = Variable::ranked(rank, name, MultiWeight::new(vec![k as u32 - 1 - a, 1]), f.parity());
        rank += 1;
        duals.insert(f.clone(), p.clone());
        vars.push(p);
    }
    let chart = CoordinateSystem::from_variables(chart.name(), 2, vars).expect("momentum names are fresh");
    DualChart { chart, duals }
}

/// Momenta of the target chart from the fiber inverse `f_j = Σ_i f'_i N_i^j`:
/// `p'_i = ∂^R_{f'_i} Σ_j p_j N(f_j)`, rewritten in source base coordinates.
fn dual_map(
    base_map: &Assignment,
    fiber_inverse: &Assignment,
    from: &DualChart,
    to: &DualChart,
) -> Assignment {
    let mut generating = SuperPolynomial::zero();
    for (f, p) in &from.duals {
        generating += &(&SuperPolynomial::var(p) * &fiber_inverse[f]);
    }
    let mut base = Assignment::new();
    let mut out = Assignment::new();
    for (v, img) in base_map {
        if !is_fiber(v) {
            base.insert(v.clone(), img.clone());
            out.insert(v.clone(), img.clone());
        }
    }
    for (f, p) in &to.duals {
        out.insert(p.clone(), generating.partial_right(f).substitute_unchecked(&base));
    }
    out
}

/// The dual `G*` of a GL-bundle, built from the declared inverse transitions.
pub fn dual_of_gl(g: &GLBundle) -> Result<GLBundle, LinError> {
    let k = g.degree();
    if k == 0 {
        return Err(LinError::DegreeZero);
    }
    let charts: Vec<DualChart> = g.bundle().charts().iter().map(|c| dual_chart(c, k)).collect();
    let mut transitions = Vec::new();
    for t in g.bundle().transitions() {
        let inverse = t.inverse.as_ref().ok_or_else(|| LinError::MissingInverse {
            transition: format!("{}->{}", g.chart(t.source).name(), g.chart(t.target).name()),
        })?;
        let (s, d) = (&charts[t.source], &charts[t.target]);
        transitions.push(TransitionMap::new(
            t.source,
            t.target,
            dual_map(&t.forward, inverse, s, d),
            Some(dual_map(inverse, &t.forward, d, s)),
        ));
    }
    let bundle = GradedBundle::from_parts(2, charts.into_iter().map(|c| c.chart).collect(), transitions)?;
    GLBundle::new(bundle)?.with_degree(k)
}

/// The linear dual `D*(F)`.
pub fn linear_dual(bundle: &GradedBundle) -> Result<GLBundle, LinError> {
    dual_of_gl(&linearise(bundle)?)
}

/// The canonical pairing `Σ_u w(u) · p_{u̇} · u` on `D*(F) ×_{F_{k−1}} F` in
/// one chart; it has bi-weight `(k, 1)`.
pub fn pairing(chart: &CoordinateSystem) -> Result<SuperPolynomial, LinError> {
    let lin = linearise_chart(chart)?;
    let dual = dual_chart(&lin.chart, lin.degree);
    let mut out = SuperPolynomial::zero();
    for (u, du) in &lin.dots {
        let p = &dual.duals[du];
        let w = integer(u.weight().total() as i64);
        out += &(&SuperPolynomial::var(p) * &SuperPolynomial::var(u)).scale(&w);
    }
    Ok(out)
}

/// One check per transition: the pairing in the target chart, pulled back
/// along the transitions of `D*(F)` and `F`, equals the pairing in the source.
pub fn pairing_invariance(bundle: &GradedBundle) -> Result<Vec<Check>, LinError> {
    let dual = linear_dual(bundle)?;
    let mut checks = Vec::new();
    for (t, dt) in bundle.transitions().iter().zip(dual.bundle().transitions()) {
        let (s, d) = (bundle.chart(t.source), bundle.chart(t.target));
        let mut subst = t.forward.clone();
        for (v, img) in &dt.forward {
            if is_fiber(v) {
                subst.insert(v.clone(), img.clone());
            }
        }
        let residual = &pairing(d)?.substitute_unchecked(&subst) - &pairing(s)?;
        checks.push(Check::zero(format!("pairing[{}->{}]", s.name(), d.name()), residual));
    }
    Ok(checks)
}

fn mironian_keep(k: u64) -> impl Fn(&Variable) -> bool {
    move |v| v.weight().component(0) as u64 + k * v.weight().component(1) as u64 <= k
}

/// The Mironian `M(F)`: `D*(F)` restricted to `w₁ + k·w₂ ≤ k`.
pub fn mironian(bundle: &GradedBundle) -> Result<GLBundle, LinError> {
    let k = bundle.degree();
    let dual = linear_dual(bundle)?;
    GLBundle::new(dual.bundle().project_where(mironian_keep(k))?)?.with_degree(k)
}

/// Momenta of the Mironian transform through weight-zero coordinates only,
/// so that they form a vector bundle over `M`.
pub fn mironian_check(mironian: &GLBundle) -> Vec<Check> {
    let b = mironian.bundle();
    let mut checks = Vec::new();
    for t in b.transitions() {
        let (s, d) = (b.chart(t.source), b.chart(t.target));
        for (v, img) in &t.forward {
            if !is_fiber(v) {
                continue;
            }
            let foreign: Vec<String> = img
                .variables()
                .into_iter()
                .filter(|u| !is_fiber(u) && !u.weight().is_zero())
                .map(|u| u.name().to_string())
                .collect();
            let id = format!("mironian[{}->{}].{}", s.name(), d.name(), v.name());
            checks.push(if foreign.is_empty() {
                Check::pass(id, "momentum law depends on the base only")
            } else {
                Check::fail(id, format!("momentum law involves {}", foreign.join(", "))).with_residual(img.clone())
            });
        }
    }
    checks
}
