//! Exact supercommutative polynomial algebra over ℚ.
//!
//! Variables carry a multi-weight and a Grassmann parity. Polynomials are kept
//! in a canonical form where every monomial lists its variables in the global
//! variable order, so equality of polynomials is equality of term maps.
//! Derivatives act from the left.

mod derivation;
mod poly;
mod variable;
mod weight;

pub use derivation::{Derivation, HomogeneityFault};
pub use poly::{integer, rational, Assignment, Homogeneity, Monomial, Rational, SuperPolynomial};
pub use variable::Variable;
pub use weight::{MultiWeight, Parity, WeightShift};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("image assigned to `{variable}` is not {expected}")]
    ParityMismatch { variable: String, expected: Parity },
}

/// Free-standing forms of the core operations.
pub fn multiply(p: &SuperPolynomial, q: &SuperPolynomial) -> SuperPolynomial {
    p * q
}

pub fn partial(p: &SuperPolynomial, v: &Variable) -> SuperPolynomial {
    p.partial(v)
}

pub fn substitute(p: &SuperPolynomial, assignment: &Assignment) -> Result<SuperPolynomial, AlgebraError> {
    p.substitute(assignment)
}

pub fn weight_of(p: &SuperPolynomial) -> Homogeneity {
    p.weight_of()
}

pub fn apply(d: &Derivation, p: &SuperPolynomial) -> SuperPolynomial {
    d.apply(p)
}

pub fn commutator(d1: &Derivation, d2: &Derivation) -> Derivation {
    d1.commutator(d2)
}
