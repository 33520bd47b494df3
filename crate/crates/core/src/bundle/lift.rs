use std::collections::BTreeMap;

use super::chart::CoordinateSystem;
use super::graded::{GradedBundle, TransitionMap};
use super::BundleError;
use crate::superalg::{Assignment, MultiWeight, SuperPolynomial, Variable};

/// Chart of a first-order lift together with the coordinate → differential
/// correspondence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftedChart {
    pub chart: CoordinateSystem,
    pub dots: BTreeMap<Variable, Variable>,
}

/// `Σ_u du · ∂p/∂u` over the coordinates in `dots`.
pub fn differential(p: &SuperPolynomial, dots: &BTreeMap<Variable, Variable>) -> SuperPolynomial {
    let mut out = SuperPolynomial::zero();
    for u in p.variables() {
        if let Some(du) = dots.get(&u) {
            out += &(&SuperPolynomial::var(du) * &p.partial(&u));
        }
    }
    out
}

fn lift_chart(
    chart: &CoordinateSystem,
    arity: usize,
    lifted: &[Variable],
    weight: impl Fn(&Variable) -> MultiWeight,
) -> LiftedChart {
    let mut taken = chart.names();
    let mut vars: Vec<Variable> = chart.variables().to_vec();
    let mut dots = BTreeMap::new();
    let mut rank = chart.next_rank();
    for v in lifted {
        let name = CoordinateSystem::fresh_name(&taken, "d", v.name());
        taken.insert(name.clone());
        let dv = Variable::ranked(rank, name, weight(v), v.parity());
        rank += 1;
        dots.insert(v.clone(), dv.clone());
        vars.push(dv);
    }
    let chart = CoordinateSystem::from_variables(chart.name(), arity, vars)
        .expect("lifted names are fresh");
    LiftedChart { chart, dots }
}

/// Coordinates of the vertical bundle: dotted copies of non-base coordinates
/// with bi-weight `(w−1, 1)`.
pub fn vertical_chart(chart: &CoordinateSystem) -> Result<LiftedChart, BundleError> {
    if chart.arity() != 1 {
        return Err(BundleError::ArityMismatch {
            expected: 1,
            found: chart.arity(),
        });
    }
    Ok(lift_chart(chart, 2, &chart.non_base(), |v| {
        MultiWeight::new(vec![v.weight().component(0) - 1, 1])
    }))
}

/// Coordinates of the tangent bundle: differentials of all coordinates with
/// bi-weight `(w, 1)`.
pub fn tangent_chart(chart: &CoordinateSystem) -> Result<LiftedChart, BundleError> {
    if chart.arity() != 1 {
        return Err(BundleError::ArityMismatch {
            expected: 1,
            found: chart.arity(),
        });
    }
    Ok(lift_chart(chart, 2, chart.variables(), |v| {
        MultiWeight::new(vec![v.weight().component(0), 1])
    }))
}

fn lift_map(map: &Assignment, target: &LiftedChart, source: &LiftedChart) -> Assignment {
    let mut out = map.clone();
    for (v, dv) in &target.dots {
        if let Some(img) = map.get(v) {
            out.insert(dv.clone(), differential(img, &source.dots));
        }
    }
    out
}

fn lift_bundle(
    bundle: &GradedBundle,
    chart_lift: impl Fn(&CoordinateSystem) -> Result<LiftedChart, BundleError>,
) -> Result<GradedBundle, BundleError> {
    let lifted: Vec<LiftedChart> = bundle.charts().iter().map(chart_lift).collect::<Result<_, _>>()?;
    let transitions = bundle
        .transitions()
        .iter()
        .map(|t| {
            let (s, g) = (&lifted[t.source], &lifted[t.target]);
            TransitionMap::new(
                t.source,
                t.target,
                lift_map(&t.forward, g, s),
                t.inverse.as_ref().map(|inv| lift_map(inv, s, g)),
            )
        })
        .collect();
    GradedBundle::from_parts(2, lifted.into_iter().map(|l| l.chart).collect(), transitions)
}

/// The vertical bundle `VF` as a double graded bundle.
pub fn vertical_bundle(bundle: &GradedBundle) -> Result<GradedBundle, BundleError> {
    lift_bundle(bundle, vertical_chart)
}

/// The tangent bundle `TF` with the bi-grading of the tangent lift.
pub fn tangent_bundle(bundle: &GradedBundle) -> Result<GradedBundle, BundleError> {
    lift_bundle(bundle, tangent_chart)
}
