//! Cantor series and q-ary representations, dual representations of
//! Q-rational numbers, and cylinder geometry.

mod cylinder;
mod digits;
mod qseq;

pub use cylinder::{all_cylinders, Cylinder};
pub use digits::{
    classify_rationality, expand, expand_with_probe, leading_digits, DigitString, DigitStringRepr,
    Evaluation, Rationality, Tail, TailRepr, DEFAULT_PROBE,
};
pub use qseq::QSequence;
