//! Spec-file front end for the graded-core library.

pub mod report;
pub mod run;
pub mod spec;
