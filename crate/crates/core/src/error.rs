use thiserror::Error;

use crate::salem::Violation;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Argument outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// More digits were needed than the input carries.
    #[error("insufficient depth: {context} needs {needed} digits, {available} available")]
    InsufficientDepth {
        context: String,
        needed: usize,
        available: usize,
    },

    #[error("invalid Salem system: {0}")]
    Validation(Violation),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error: {0}")]
    Parse(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn depth(context: impl Into<String>, needed: usize, available: usize) -> Self {
        Error::InsufficientDepth {
            context: context.into(),
            needed,
            available,
        }
    }
}
