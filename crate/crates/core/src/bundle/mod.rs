//! Graded and n-tuple graded bundles given by atlases of weight-homogeneous
//! polynomial transitions.

mod chart;
mod graded;
mod lift;

pub use chart::CoordinateSystem;
pub use graded::{weight_vector_field, GradedBundle, NTupleBundle, TransitionMap};
pub use lift::{differential, tangent_bundle, tangent_chart, vertical_bundle, vertical_chart, LiftedChart};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum BundleError {
    #[error("projection ill defined: image of `{variable}` involves discarded `{offending}`")]
    IllDefinedProjection { variable: String, offending: String },
    #[error("restriction inconsistent: `{variable}` does not vanish, residual {residual}")]
    InconsistentRestriction { variable: String, residual: String },
    #[error("grading arity {found} where {expected} is required")]
    ArityMismatch { expected: usize, found: usize },
    #[error("weight of `{variable}` exceeds grading arity {arity}")]
    WeightArity { variable: String, arity: usize },
    #[error("duplicate coordinate `{0}`")]
    DuplicateVariable(String),
    #[error("no chart with index {0}")]
    UnknownChart(usize),
}
