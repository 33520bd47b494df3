use super::ConstructionError;
use crate::algebroid::{schouten_pairs, WeightedAlgebroid};
use crate::bundle::{tangent_bundle, tangent_chart, CoordinateSystem, GradedBundle};
use crate::linfun::{dual_chart, dual_of_gl, parity_reverse, GLBundle};
use crate::superalg::{Derivation, MultiWeight, Parity, SuperPolynomial, Variable, WeightShift};

fn odd_field() -> Derivation {
    Derivation::new(Parity::Odd, WeightShift::new(vec![0, 1]))
}

/// `TF` with the de Rham field `Q = Σ dv ∂_v` on `ΠTF`.
pub fn tangent_algebroid(f: &GradedBundle) -> Result<WeightedAlgebroid, ConstructionError> {
    let carrier = GLBundle::new(tangent_bundle(f)?)?.with_degree(f.degree() + 1)?;
    let pd = parity_reverse(&carrier)?.chart(0).clone();
    let mut q = odd_field();
    for (v, dv) in tangent_chart(f.chart(0))?.dots {
        q.set(pd.var(v.name()), SuperPolynomial::var(pd.var(dv.name())));
    }
    Ok(WeightedAlgebroid::new(carrier, q)?)
}

/// `T*F` as a GL-bundle: the dual of `TF`.
pub fn cotangent_carrier(f: &GradedBundle) -> Result<GLBundle, ConstructionError> {
    let tf = GLBundle::new(tangent_bundle(f)?)?.with_degree(f.degree() + 1)?;
    Ok(dual_of_gl(&tf)?)
}

/// Chart of `ΠT*F` on which the bivector of [`cotangent_algebroid`] lives.
pub fn cotangent_chart(f: &GradedBundle) -> Result<CoordinateSystem, ConstructionError> {
    Ok(parity_reverse(&cotangent_carrier(f)?)?.chart(0).clone())
}

/// `T*F` with `Q = −[𝒫, ·]` for a bivector `𝒫` on `ΠT*F` of bi-weight
/// `(k−1, 2)`, where `k − 1` is the degree of `F`.
pub fn cotangent_algebroid(f: &GradedBundle, bivector: &SuperPolynomial) -> Result<WeightedAlgebroid, ConstructionError> {
    let carrier = cotangent_carrier(f)?;
    let k = carrier.degree() as u32;
    let pd = parity_reverse(&carrier)?.chart(0).clone();
    if let Some(v) = bivector.variables().into_iter().find(|v| !pd.contains(v)) {
        return Err(ConstructionError::InvalidInput(format!("`{v}` is not a coordinate of ΠT*F")));
    }
    if !bivector.weight_of().is(&MultiWeight::new(vec![k - 1, 2])) {
        return Err(ConstructionError::InvalidInput(format!(
            "bivector {bivector} is not of bi-weight ({}, 2)",
            k - 1
        )));
    }
    let lifted = tangent_chart(f.chart(0))?;
    let momenta = dual_chart(&lifted.chart, k as u64).duals;
    let pairs: Vec<(Variable, Variable)> = lifted
        .dots
        .iter()
        .map(|(x, dx)| (pd.var(x.name()).clone(), pd.var(momenta[dx].name()).clone()))
        .collect();
    let mut q = odd_field();
    for v in pd.variables() {
        q.set(v, -schouten_pairs(&pairs, bivector, &SuperPolynomial::var(v)));
    }
    Ok(WeightedAlgebroid::new(carrier, q)?)
}
