//! Generalized Salem functions: the unique bounded solution of the
//! functional-equation system built from generalized shifts.

mod eval;
mod system;

pub use eval::{default_tolerance, Coeffs, EndpointProbe, Grid, Residual, SalemValue, TableRow};
pub use system::{
    Coefficients, Condition, Reorder, RuleName, SalemFunction, SalemSystem, Violation,
    DEFAULT_RULE_HORIZON,
};
