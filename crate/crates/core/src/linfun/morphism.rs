use super::LinError;
use crate::bundle::CoordinateSystem;
use crate::superalg::{Assignment, SuperPolynomial, Variable};

/// A weight-preserving polynomial map written in a pair of charts: each
/// target coordinate is given as a polynomial in source coordinates.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedMorphism {
    source: CoordinateSystem,
    target: CoordinateSystem,
    components: Assignment,
}

impl GradedMorphism {
    pub fn new(
        source: CoordinateSystem,
        target: CoordinateSystem,
        components: Assignment,
    ) -> Result<Self, LinError> {
        let allowed = source.var_set();
        for v in target.variables() {
            let Some(img) = components.get(v) else {
                return Err(LinError::MissingComponent(v.name().to_string()));
            };
            if let Some(bad) = img.variables().into_iter().find(|u| !allowed.contains(u)) {
                return Err(LinError::ForeignVariable {
                    component: v.name().to_string(),
                    variable: bad.name().to_string(),
                });
            }
        }
        if let Some(extra) = components.keys().find(|v| !target.contains(v)) {
            return Err(LinError::ForeignVariable {
                component: extra.name().to_string(),
                variable: extra.name().to_string(),
            });
        }
        Ok(GradedMorphism {
            source,
            target,
            components,
        })
    }

    pub fn identity(chart: &CoordinateSystem) -> Self {
        let components = chart
            .variables()
            .iter()
            .map(|v| (v.clone(), SuperPolynomial::var(v)))
            .collect();
        GradedMorphism {
            source: chart.clone(),
            target: chart.clone(),
            components,
        }
    }

    pub fn source(&self) -> &CoordinateSystem {
        &self.source
    }

    pub fn target(&self) -> &CoordinateSystem {
        &self.target
    }

    pub fn components(&self) -> &Assignment {
        &self.components
    }

    pub fn component(&self, v: &Variable) -> &SuperPolynomial {
        &self.components[v]
    }

    /// Pulls back a function on the target.
    pub fn pullback(&self, p: &SuperPolynomial) -> SuperPolynomial {
        p.substitute_unchecked(&self.components)
    }

    /// `then ∘ self`.
    pub fn then(&self, then: &GradedMorphism) -> Result<GradedMorphism, LinError> {
        if then.source != self.target {
            return Err(LinError::ChartMismatch);
        }
        let components = then
            .components
            .iter()
            .map(|(v, img)| (v.clone(), self.pullback(img)))
            .collect();
        Ok(GradedMorphism {
            source: self.source.clone(),
            target: then.target.clone(),
            components,
        })
    }

    /// Components that break weight or parity, or base components that
    /// depend on fiber coordinates.
    pub fn weight_violations(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (v, img) in &self.components {
            if !img.weight_of().is(v.weight()) {
                out.push(format!("component {v} = {img} is not of weight {}", v.weight()));
            }
            if !img.is_parity_homogeneous(v.parity()) {
                out.push(format!("component {v} = {img} is not {}", v.parity()));
            }
        }
        out
    }
}

/// The tower projection `F_k → F_l` in one chart.
pub fn tower_projection(chart: &CoordinateSystem, l: u64) -> GradedMorphism {
    let target = chart.filtered(|v| v.weight().total() <= l);
    let components = target
        .variables()
        .iter()
        .map(|v| (v.clone(), SuperPolynomial::var(v)))
        .collect();
    GradedMorphism {
        source: chart.clone(),
        target,
        components,
    }
}
