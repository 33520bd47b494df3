//! Exact symbolic engine for graded bundles, their linearisation, linear
//! duals and weighted Lie algebroids.

pub mod algebroid;
pub mod bundle;
pub mod constructions;
pub mod linfun;
pub mod par;
pub mod random;
pub mod report;
pub mod superalg;
