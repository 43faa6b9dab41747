//! Error taxonomy shared by all modules.
//!
//! Errors are grouped by how a caller should react:
//! - [`Error::Domain`]: the input itself is invalid (a zero outside the disk,
//!   an empty set, a non-unimodular symbol where an inner one is required).
//! - [`Error::Resolution`]: the requested computation cannot reach the target
//!   accuracy with the given grid / coefficient window (aliasing, basis
//!   refinement cap, truncation beyond tolerance).
//! - [`Error::Mode`]: an operation was asked to run in a mode its input does
//!   not satisfy (e.g. eigenvalue extraction on a non-self-adjoint matrix).
//! - [`Error::Config`]: configuration documents that fail schema validation.
//! - [`Error::Assertion`]: a run-time invariant that an experiment promised to
//!   enforce did not hold.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    /// Invalid mathematical input (preconditions on values).
    #[error("domain error: {0}")]
    Domain(String),
    /// Grid/window resolution is insufficient for the requested accuracy.
    #[error("resolution error: {0}")]
    Resolution(String),
    /// Operation mode incompatible with the input.
    #[error("mode error: {0}")]
    Mode(String),
    /// Configuration/schema problem.
    #[error("config error: {0}")]
    Config(String),
    /// An asserted invariant failed during an experiment run.
    #[error("assertion failure: {0}")]
    Assertion(String),
    /// Filesystem problem while reading configs or writing reports.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    /// Malformed JSON in a configuration or report document.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 0 pass, 1 assertion failure,
    /// 2 config/input error, 3 resolution error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Assertion(_) => 1,
            Error::Config(_) | Error::Json(_) | Error::Domain(_) | Error::Mode(_) | Error::Io(_) => 2,
            Error::Resolution(_) => 3,
        }
    }
}

/// Shorthand constructors used throughout the crate.
pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}

pub(crate) fn resolution<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Resolution(msg.into()))
}
