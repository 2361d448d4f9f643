//! Crate-wide error type.
//!
//! The CLI maps these variants onto exit codes: schema problems are caught
//! before dispatch (exit 2), `Domain`/`Pole` map to exit 3, and `Guard` to
//! exit 4.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An enumeration operation was asked for a degree it does not support.
    #[error("unsupported degree n = {0}")]
    UnsupportedDegree(usize),

    /// Input violates a mathematical precondition (non-positive-definite
    /// matrix, argument outside a convergence region, malformed weight, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// An exhaustive-search guard would be exceeded.
    #[error("enumeration guard exceeded: {0}")]
    Guard(String),

    /// A Gamma factor was evaluated at one of its poles.
    #[error("pole encountered: {0}")]
    Pole(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn guard(msg: impl Into<String>) -> Self {
        Error::Guard(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
