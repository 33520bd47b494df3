use std::collections::BTreeMap;

use super::data::relabel_to;
use super::{AlgebroidData, ConstructionError};
use crate::algebroid::WeightedAlgebroid;
use crate::bundle::{CoordinateSystem, GradedBundle, TransitionMap};
use crate::linfun::{is_fiber, GLBundle};
use crate::superalg::{integer, rational, Assignment, Derivation, MultiWeight, SuperPolynomial, Variable};

/// A polynomial change of coordinates between two charts of weight-0
/// coordinates. The inverse is optional since most polynomial maps have none.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolynomialDiffeo {
    pub source: CoordinateSystem,
    pub target: CoordinateSystem,
    /// Target coordinate ↦ polynomial in source coordinates.
    pub forward: Assignment,
    /// Source coordinate ↦ polynomial in target coordinates.
    pub inverse: Option<Assignment>,
}

fn check_map(map: &Assignment, domain: &CoordinateSystem, codomain: &CoordinateSystem) -> Result<(), ConstructionError> {
    for v in codomain.variables() {
        if !map.contains_key(v) {
            return Err(ConstructionError::InvalidInput(format!("no image for `{v}`")));
        }
    }
    for (v, img) in map {
        if !codomain.contains(v) {
            return Err(ConstructionError::InvalidInput(format!("`{v}` is not a coordinate of {}", codomain.name())));
        }
        if let Some(u) = img.variables().into_iter().find(|u| !domain.contains(u)) {
            return Err(ConstructionError::InvalidInput(format!("image of `{v}` involves foreign `{u}`")));
        }
    }
    Ok(())
}

impl PolynomialDiffeo {
    pub fn new(
        source: CoordinateSystem,
        target: CoordinateSystem,
        forward: Assignment,
        inverse: Option<Assignment>,
    ) -> Result<Self, ConstructionError> {
        for c in [&source, &target] {
            if c.arity() != 1 || c.variables().iter().any(|v| !v.weight().is_zero() || v.is_odd()) {
                return Err(ConstructionError::InvalidInput(format!(
                    "chart {} must consist of even weight-0 coordinates",
                    c.name()
                )));
            }
        }
        check_map(&forward, &source, &target)?;
        if let Some(inv) = &inverse {
            check_map(inv, &target, &source)?;
        }
        Ok(PolynomialDiffeo {
            source,
            target,
            forward,
            inverse,
        })
    }

    pub fn identity(chart: &CoordinateSystem) -> Self {
        let target = chart.renamed(format!("{}'", chart.name()));
        let mut forward = Assignment::new();
        let mut inverse = Assignment::new();
        for (v, w) in chart.variables().iter().zip(target.variables()) {
            forward.insert(w.clone(), SuperPolynomial::var(v));
            inverse.insert(v.clone(), SuperPolynomial::var(w));
        }
        PolynomialDiffeo {
            source: chart.clone(),
            target,
            forward,
            inverse: Some(inverse),
        }
    }

    /// `inverse ∘ forward = id` and `forward ∘ inverse = id`, or `None`
    /// without a declared inverse.
    pub fn round_trip(&self) -> Option<bool> {
        let inv = self.inverse.as_ref()?;
        let there = self
            .source
            .variables()
            .iter()
            .all(|v| inv[v].substitute_unchecked(&self.forward) == SuperPolynomial::var(v));
        let back = self
            .target
            .variables()
            .iter()
            .all(|v| self.forward[v].substitute_unchecked(inv) == SuperPolynomial::var(v));
        Some(there && back)
    }
}

/// Coordinates `v, v_1, …, v_k` of a higher tangent chart; `v_r` has weight
/// `w(v) + r` in the first component.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetChart {
    pub chart: CoordinateSystem,
    /// Original coordinate ↦ `[v_0, v_1, …, v_k]` in the new chart.
    pub jets: BTreeMap<Variable, Vec<Variable>>,
}

impl JetChart {
    /// Orders coordinates by jet level, then by their order in `chart`.
    pub fn new(chart: &CoordinateSystem, k: usize) -> Self {
        let mut taken = chart.names();
        let mut names: Vec<Vec<String>> = Vec::new();
        for v in chart.variables() {
            let mut row = vec![v.name().to_string()];
            for r in 1..=k {
                let mut name = format!("{}_{r}", v.name());
                while taken.contains(&name) {
                    name.push('\'');
                }
                taken.insert(name.clone());
                row.push(name);
            }
            names.push(row);
        }
        let mut vars = Vec::new();
        for r in 0..=k {
            for (i, v) in chart.variables().iter().enumerate() {
                let mut w = v.weight().padded(chart.arity());
                w[0] += r as u32;
                let rank = vars.len() as u32;
                vars.push(Variable::ranked(rank, names[i][r].clone(), MultiWeight::new(w), v.parity()));
            }
        }
        let lifted = CoordinateSystem::from_variables(chart.name(), chart.arity(), vars).expect("jet names are fresh");
        let jets = chart
            .variables()
            .iter()
            .zip(&names)
            .map(|(v, row)| (v.clone(), row.iter().map(|n| lifted.var(n).clone()).collect()))
            .collect();
        JetChart { chart: lifted, jets }
    }

    pub fn order(&self) -> usize {
        self.jets.values().next().map_or(0, |row| row.len() - 1)
    }

    /// `D = Σ_v Σ_s (s+1) v_{s+1} ∂/∂v_s`, dropping levels above the order.
    pub fn total_derivative(&self, p: &SuperPolynomial) -> SuperPolynomial {
        let mut out = SuperPolynomial::zero();
        for row in self.jets.values() {
            for s in 0..row.len() - 1 {
                let d = p.partial(&row[s]);
                if !d.is_zero() {
                    out += &(&SuperPolynomial::var(&row[s + 1]) * &d).scale(&integer(s as i64 + 1));
                }
            }
        }
        out
    }

    /// `[p, D p, D²p/2!, …, D^k p/k!]`.
    pub fn prolong(&self, p: &SuperPolynomial) -> Vec<SuperPolynomial> {
        let mut out = vec![p.clone()];
        for r in 1..=self.order() {
            let next = self.total_derivative(&out[r - 1]).scale(&rational(1, r as i64));
            out.push(next);
        }
        out
    }
}

fn prolong_map(map: &Assignment, from: &JetChart, to: &JetChart) -> Assignment {
    let mut out = Assignment::new();
    for (v, img) in map {
        let img = relabel_to(img, &from.chart);
        for (r, p) in from.prolong(&img).into_iter().enumerate() {
            out.insert(to.jets[v][r].clone(), p);
        }
    }
    out
}

/// `T^k M` over the two charts of `φ`, with the weight-`r` coordinates
/// transforming by the `r`-th prolongation of `φ`.
pub fn higher_tangent(phi: &PolynomialDiffeo, k: usize) -> Result<GradedBundle, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidInput("higher tangent order must be at least 1".into()));
    }
    let (s, t) = (JetChart::new(&phi.source, k), JetChart::new(&phi.target, k));
    let forward = prolong_map(&phi.forward, &s, &t);
    let inverse = phi.inverse.as_ref().map(|inv| prolong_map(inv, &t, &s));
    Ok(GradedBundle::from_parts(
        1,
        vec![s.chart, t.chart],
        vec![TransitionMap::new(0, 1, forward, inverse)],
    )?)
}

/// The complete lift of an odd field to `ΠT^{k−1}E`, on the jet chart of
/// order `k − 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedField {
    pub jets: JetChart,
    pub q: Derivation,
}

/// `Q^c(v_r) = D^r Q(v) / r!` on the jet chart of `chart` of order `k − 1`.
pub fn complete_lift(q: &Derivation, chart: &CoordinateSystem, k: usize) -> Result<LiftedField, ConstructionError> {
    if k == 0 {
        return Err(ConstructionError::InvalidInput("lift order must be at least 1".into()));
    }
    if let Some(v) = q.variables().into_iter().find(|v| !chart.contains(v)) {
        return Err(ConstructionError::InvalidInput(format!("`{v}` is not a coordinate of {}", chart.name())));
    }
    let jets = JetChart::new(chart, k - 1);
    let mut lifted = Derivation::new(q.parity(), q.weight_shift().clone());
    for (v, row) in &jets.jets {
        let image = relabel_to(&q.coefficient(v), &jets.chart);
        for (r, p) in jets.prolong(&image).into_iter().enumerate() {
            lifted.set(&row[r], p);
        }
    }
    Ok(LiftedField { jets, q: lifted })
}

/// `T^{k−1}E` with the complete lift of the field of `E`.
pub fn lifted_algebroid(e: &AlgebroidData, k: usize) -> Result<WeightedAlgebroid, ConstructionError> {
    let lift = complete_lift(&e.q(), &e.odd_chart(), k)?;
    let even: Vec<Variable> = lift
        .jets
        .chart
        .variables()
        .iter()
        .map(|v| if is_fiber(v) { v.with_parity(v.parity().flip()) } else { v.clone() })
        .collect();
    let chart = CoordinateSystem::from_variables(lift.jets.chart.name(), 2, even)?;
    let carrier = GLBundle::new(GradedBundle::from_chart(chart))?.with_degree(k as u64)?;
    Ok(WeightedAlgebroid::new(carrier, lift.q)?)
}

/// Residuals of the identification `D(T²M) ≅ T(TM)` chart by chart: the
/// coordinates `x, x_1` are kept and the dotted copies of `x_1, x_2` are sent
/// to the tangent copies of `x, x_1`. One entry per transition component of
/// `D(T²M)`, labelled `transition[U->V].coordinate`.
pub fn second_tangent_identification(
    phi: &PolynomialDiffeo,
) -> Result<Vec<(String, SuperPolynomial)>, ConstructionError> {
    let d = crate::linfun::linearise(&higher_tangent(phi, 2)?)?;
    let tt = crate::bundle::tangent_bundle(&higher_tangent(phi, 1)?)?;
    let mut maps = Vec::new();
    for (i, base) in [&phi.source, &phi.target].into_iter().enumerate() {
        let (j2, j1) = (JetChart::new(base, 2), JetChart::new(base, 1));
        let lin = crate::linfun::linearise_chart(&j2.chart)?;
        let tan = crate::bundle::tangent_chart(&j1.chart)?;
        let mut map = BTreeMap::new();
        for (v, row2) in &j2.jets {
            let row1 = &j1.jets[v];
            for r in 0..2 {
                map.insert(row2[r].clone(), row1[r].clone());
                map.insert(lin.dots[&row2[r + 1]].clone(), tan.dots[&row1[r]].clone());
            }
        }
        let (dc, tc) = (d.chart(i), tt.chart(i));
        if map.len() != dc.len() || dc.len() != tc.len() {
            return Err(ConstructionError::InvalidInput(format!(
                "chart {} has {} coordinates in D(T²M) and {} in T(TM)",
                base.name(),
                dc.len(),
                tc.len()
            )));
        }
        // Charts of the bundles carry the same names as the standalone charts.
        let map: BTreeMap<Variable, Variable> = map
            .iter()
            .map(|(a, b)| (dc.var(a.name()).clone(), tc.var(b.name()).clone()))
            .collect();
        if let Some((a, b)) = map.iter().find(|(a, b)| a.weight() != b.weight()) {
            return Err(ConstructionError::InvalidInput(format!("`{a}` and `{b}` have different weights")));
        }
        maps.push(map);
    }
    let (dt, tt) = (&d.bundle().transitions()[0], &tt.transitions()[0]);
    let label = format!("transition[{}->{}]", phi.source.name(), phi.target.name());
    Ok(dt
        .forward
        .iter()
        .map(|(key, img)| {
            let image = maps[1][key].clone();
            let residual = &img.relabel(&maps[0]) - &tt.forward[&image];
            (format!("{label}.{}", key.name()), residual)
        })
        .collect())
}
