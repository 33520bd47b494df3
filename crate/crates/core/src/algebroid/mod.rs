//! Weighted skew and Lie algebroids on GL-bundles: the odd field on `ΠD`, the
//! Hamiltonian on the odd phase space, sections with the derived bracket, and
//! the anchors.

mod hamiltonian;
mod phase;
mod sections;
mod structure;

pub use hamiltonian::{anchor_coefficient, bracket_coefficient, p_from_q, q_from_p};
pub use phase::{schouten_pairs, schouten_pairs_with, OddPhaseSpace};
pub use sections::{anchor_action, derived_bracket, min_section_degree, AlgebroidSection, DERIVED_BRACKET_SIGN};
pub use structure::{
    check_weighted_algebroid, leibniz_check, restrict_to_a1, AlgebroidDiagnostics, AlgebroidKind, EpsilonComponents,
    StructureFunctions, WeightedAlgebroid,
};

use crate::linfun::LinError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum AlgebroidError {
    #[error("coordinate mismatch: {0}")]
    CoordinateMismatch(String),
    #[error("odd field not of the algebroid shape: {0}")]
    MalformedQ(String),
    #[error("Hamiltonian not of the algebroid shape: {0}")]
    MalformedP(String),
    #[error("bracket degree {degree} is below the smallest section degree {minimum}")]
    DegreeUnderflow { degree: i64, minimum: u64 },
    #[error("carrier is not a linearisation: {0}")]
    NotALinearisation(String),
    #[error("field does not project to ΠA₁: coefficient of `{variable}` involves `{offending}`")]
    ProjectionObstruction { variable: String, offending: String },
    #[error(transparent)]
    Lin(#[from] LinError),
}
