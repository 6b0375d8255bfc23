//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Scenario or experiment file could not be read.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Scenario or experiment file is not valid JSON for the documented schema.
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// A configuration invariant is violated; the message names the invariant.
    #[error("validation error: {0}")]
    Validation(String),

    /// A numeric argument is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested instance admits no feasible assignment.
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// An iterative numerical procedure failed to converge.
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn infeasible(msg: impl Into<String>) -> Self {
        Error::Infeasible(msg.into())
    }

    pub fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }
}
