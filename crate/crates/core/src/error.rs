//! Crate-wide error type.

use thiserror::Error;

/// Errors produced by model construction, numerics, and the run driver.
#[derive(Debug, Error)]
pub enum Error {
    /// Parameter validation failure (violated type invariant).
    #[error("invalid parameter: {0}")]
    Invalid(String),
    /// Function evaluated outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// The pole scan found a root with positive real part.
    #[error("unstable parameters: {0}")]
    Unstable(String),
    /// Quadrature or series did not reach the requested tolerance.
    #[error("numerical failure: {0}")]
    Numerics(String),
    /// Run-configuration parse or validation failure.
    #[error("config error: {0}")]
    Config(String),
    /// Output file I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code used by the CLI: 2 config, 3 instability, 4 numerics.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invalid(_) | Error::Config(_) => 2,
            Error::Unstable(_) => 3,
            Error::Domain(_) | Error::Numerics(_) | Error::Io(_) => 4,
        }
    }
}
