//! Error types shared across the crate.

use thiserror::Error;

/// Errors produced by model construction and the computation engines.
#[derive(Debug, Error)]
pub enum Error {
    /// A configuration or argument failed validation. The message names the
    /// offending field or argument.
    #[error("validation error: {0}")]
    Validation(String),

    /// A computation would exceed a configured size or time budget.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    /// An iterative numerical method failed to reach its target accuracy.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// The model violates a structural assumption (e.g. a reducible chain
    /// where an irreducible one is required).
    #[error("structural error: {0}")]
    Structural(String),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    pub fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }
}
