use std::collections::{BTreeMap, BTreeSet};

use super::{GLBundle, GradedMorphism, LinError};
use crate::bundle::{differential, vertical_bundle, vertical_chart, CoordinateSystem, GradedBundle};
use crate::superalg::{integer, Assignment, SuperPolynomial, Variable};

/// Chart of `D(F)` built from a chart of `F`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearisedChart {
    pub chart: CoordinateSystem,
    /// Coordinate of `F` → its dotted copy in `D(F)`.
    pub dots: BTreeMap<Variable, Variable>,
    /// Top-weight coordinates of `F`, absent from `D(F)`.
    pub top: BTreeSet<Variable>,
    pub degree: u64,
}

pub fn linearise_chart(chart: &CoordinateSystem) -> Result<LinearisedChart, LinError> {
    let degree = chart.degree();
    if degree == 0 {
        return Err(LinError::DegreeZero);
    }
    let lifted = vertical_chart(chart)?;
    let keep = |v: &Variable| v.weight().component(0) as u64 <= degree - 1;
    let top = chart
        .variables()
        .iter()
        .filter(|v| !keep(v))
        .cloned()
        .collect();
    Ok(LinearisedChart {
        chart: lifted.chart.filtered(keep),
        dots: lifted.dots,
        top,
        degree,
    })
}

/// The linearisation `D(F)`: the vertical bundle cut down to first weight
/// at most `k − 1`.
pub fn linearise(bundle: &GradedBundle) -> Result<GLBundle, LinError> {
    let k = bundle.degree();
    if k == 0 {
        return Err(LinError::DegreeZero);
    }
    let vf = vertical_bundle(bundle)?;
    GLBundle::new(vf.project_component(0, (k - 1) as u32)?)?.with_degree(k)
}

/// `D(φ)` for a chart-level morphism between graded bundles.
pub fn linearise_morphism(phi: &GradedMorphism) -> Result<GradedMorphism, LinError> {
    let faults = phi.weight_violations();
    if !faults.is_empty() {
        return Err(LinError::WeightViolation(faults.join("; ")));
    }
    let src = linearise_chart(phi.source())?;
    let tgt = linearise_chart(phi.target())?;
    let mut components = Assignment::new();
    for v in tgt.chart.variables() {
        let img = if let Some((u, _)) = tgt.dots.iter().find(|(_, dv)| *dv == v) {
            differential(phi.component(u), &src.dots)
        } else {
            phi.component(v).clone()
        };
        components.insert(v.clone(), img.kill(&src.top));
    }
    GradedMorphism::new(src.chart, tgt.chart, components)
}

/// The holonomic embedding `ι: F → D(F)` in one chart: a coordinate of
/// weight `w < k` is kept and its dotted copy is sent to `w · u`.
pub fn holonomic_embedding(chart: &CoordinateSystem) -> Result<GradedMorphism, LinError> {
    let lin = linearise_chart(chart)?;
    let mut components = Assignment::new();
    for v in lin.chart.variables() {
        let img = match lin.dots.iter().find(|(_, dv)| *dv == v) {
            Some((u, _)) => SuperPolynomial::var(u).scale(&integer(u.weight().total() as i64)),
            None => SuperPolynomial::var(v),
        };
        components.insert(v.clone(), img);
    }
    GradedMorphism::new(chart.clone(), lin.chart, components)
}

/// Residuals of `D(φ) ∘ ι_F − ι_F̄ ∘ φ`, one per coordinate of `D(F̄)`.
pub fn embedding_compatibility(phi: &GradedMorphism) -> Result<Vec<(Variable, SuperPolynomial)>, LinError> {
    let d_phi = linearise_morphism(phi)?;
    let iota_src = holonomic_embedding(phi.source())?;
    let iota_tgt = holonomic_embedding(phi.target())?;
    let left = iota_src.then(&d_phi)?;
    let right = phi.then(&iota_tgt)?;
    Ok(left
        .components()
        .iter()
        .map(|(v, l)| (v.clone(), l - right.component(v)))
        .collect())
}
