//! Pass/fail records shared by every verification routine.

use crate::superalg::SuperPolynomial;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub id: String,
    pub passed: bool,
    pub detail: String,
    pub residual: Option<SuperPolynomial>,
    pub weight: Option<String>,
}

impl Check {
    pub fn new(id: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        Check {
            id: id.into(),
            passed,
            detail: detail.into(),
            residual: None,
            weight: None,
        }
    }

    pub fn pass(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(id, true, detail)
    }

    pub fn fail(id: impl Into<String>, detail: impl Into<String>) -> Self {
        Check::new(id, false, detail)
    }

    /// Passes iff the residual vanishes; a nonzero residual is kept.
    pub fn zero(id: impl Into<String>, residual: SuperPolynomial) -> Self {
        if residual.is_zero() {
            Check::pass(id, "exact identity")
        } else {
            Check::fail(id, "nonzero residual").with_residual(residual)
        }
    }

    pub fn with_residual(mut self, residual: SuperPolynomial) -> Self {
        self.residual = Some(residual);
        self
    }

    pub fn with_weight(mut self, weight: impl Into<String>) -> Self {
        self.weight = Some(weight.into());
        self
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.checks.extend(other.checks);
    }
}

impl From<Vec<Check>> for ValidationReport {
    fn from(checks: Vec<Check>) -> Self {
        ValidationReport { checks }
    }
}
