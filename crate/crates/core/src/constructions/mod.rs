//! Builders for the standard weighted algebroids: tangent and cotangent
//! algebroids, higher tangent bundles, complete lifts, the reduction tower
//! of a Lie algebra and the prolongation of an algebroid.

mod constants;
mod data;
mod higher;
mod tangent;
mod tower;

pub use constants::StructureConstants;
pub use data::{xi_name, AlgebroidData};
pub use higher::{
    complete_lift, higher_tangent, lifted_algebroid, second_tangent_identification, JetChart, LiftedField, PolynomialDiffeo,
};
pub use tangent::{cotangent_algebroid, cotangent_carrier, cotangent_chart, tangent_algebroid};
pub use tower::{dy_name, lie_tower, prolongation_algebroid, reduced_bracket, y_name, ReducedSection};

use crate::algebroid::AlgebroidError;
use crate::bundle::BundleError;
use crate::linfun::LinError;

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum ConstructionError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Bundle(#[from] BundleError),
    #[error(transparent)]
    Lin(#[from] LinError),
    #[error(transparent)]
    Algebroid(#[from] AlgebroidError),
}
