//! Exact digit arithmetic for Cantor series expansions, the shift and
//! generalized shift operators, generalized Salem functions, and
//! Lebesgue-measure bounds for Gauss-Kuzmin type sets.
//!
//! All digit-level machinery works over exact rationals. The Salem
//! evaluator and the Monte-Carlo estimators are generic over [`Scalar`],
//! so the same series code runs over [`Rational`], `f64` or `f32`.

pub mod error;
pub mod gausskuzmin;
pub mod numeral;
pub mod rational;
pub mod salem;
pub mod sampling;
pub mod scalar;
pub mod shifts;

pub use error::{Error, Result};
pub use gausskuzmin::{Estimate, GkSetSpec, MeasureBounds, ProgramFamily, ScanFamily, Threshold};
pub use numeral::{Cylinder, DigitString, QSequence, Rationality, Tail};
pub use salem::{Reorder, SalemFunction, SalemSystem, SalemValue};
pub use scalar::Scalar;
pub use shifts::{Atom, Point, ShiftProgram, Shiftable};

/// Exact arbitrary-precision rational, the carrier for every exact value.
pub type Rational = num_rational::BigRational;

/// Salem evaluation carried out exactly.
pub type ExactValue = SalemValue<Rational>;
/// Salem evaluation carried out in double precision.
pub type FloatValue = SalemValue<f64>;
