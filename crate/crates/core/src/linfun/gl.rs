use super::LinError;
use crate::bundle::{CoordinateSystem, GradedBundle};
use crate::report::ValidationReport;
use crate::superalg::{Assignment, SuperPolynomial, Variable};

/// A double graded bundle whose second weight is 0 or 1 and whose weight-1
/// coordinates enter every transition linearly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GLBundle {
    bundle: GradedBundle,
    degree: u64,
}

pub fn is_fiber(v: &Variable) -> bool {
    v.weight().component(1) == 1
}

/// Number of fiber factors in every monomial, if it is the same throughout.
fn fiber_degree(p: &SuperPolynomial) -> Option<u32> {
    let mut degrees = p.terms().map(|(m, _)| {
        m.factors()
            .iter()
            .filter(|(v, _)| is_fiber(v))
            .map(|(_, e)| *e)
            .sum::<u32>()
    });
    let first = degrees.next()?;
    degrees.all(|d| d == first).then_some(first)
}

fn check_linear(map: &Assignment) -> Result<(), LinError> {
    for (v, img) in map {
        let expected = if is_fiber(v) { 1 } else { 0 };
        match fiber_degree(img) {
            None if img.is_zero() => {}
            Some(d) if d == expected => {}
            _ => {
                return Err(LinError::NonlinearFiber {
                    variable: v.name().to_string(),
                })
            }
        }
    }
    Ok(())
}

impl GLBundle {
    pub fn new(bundle: GradedBundle) -> Result<Self, LinError> {
        if bundle.arity() != 2 {
            return Err(LinError::NotGL(format!("grading arity {} instead of 2", bundle.arity())));
        }
        for c in bundle.charts() {
            if let Some(v) = c.variables().iter().find(|v| v.weight().component(1) > 1) {
                return Err(LinError::NotGL(format!("`{v}` has second weight above 1")));
            }
        }
        for t in bundle.transitions() {
            check_linear(&t.forward)?;
            if let Some(inv) = &t.inverse {
                check_linear(inv)?;
            }
        }
        let degree = bundle.degree();
        Ok(GLBundle { bundle, degree })
    }

    /// Declares the degree, which may exceed the largest total weight present.
    pub fn with_degree(mut self, k: u64) -> Result<Self, LinError> {
        if k < self.bundle.degree() {
            return Err(LinError::NotGL(format!(
                "declared degree {k} is below the largest total weight {}",
                self.bundle.degree()
            )));
        }
        self.degree = k;
        Ok(self)
    }

    pub fn bundle(&self) -> &GradedBundle {
        &self.bundle
    }

    pub fn into_bundle(self) -> GradedBundle {
        self.bundle
    }

    pub fn chart(&self, i: usize) -> &CoordinateSystem {
        self.bundle.chart(i)
    }

    /// Degree `k`: the declared degree, by default the maximal total weight.
    /// Fiber coordinates have first weight at most `k − 1`.
    pub fn degree(&self) -> u64 {
        self.degree
    }

    pub fn fiber(&self, chart: usize) -> Vec<Variable> {
        self.chart(chart).variables().iter().filter(|v| is_fiber(v)).cloned().collect()
    }

    pub fn base(&self, chart: usize) -> Vec<Variable> {
        self.chart(chart).variables().iter().filter(|v| !is_fiber(v)).cloned().collect()
    }

    pub fn validate(&self) -> ValidationReport {
        self.bundle.validate()
    }
}
