//! Lebesgue measure of Gauss-Kuzmin type sets
//! `{z: lhs(z) < rhs}`, where `lhs` is a shift program and `rhs` is a
//! constant, a program applied to z, or a program applied to a fixed point.

mod bounds;
mod mc;
mod scan;
mod set;

pub use crate::sampling::Estimate;
pub use bounds::{measure_bounds, MAX_CYLINDERS};
pub use mc::measure_mc;
pub use scan::{limit_scan, FamilyThreshold, IndexRule, ProgramFamily, ScanFamily, ScanRow};
pub use set::{GkSetSpec, MeasureBounds, Relation, Threshold};
