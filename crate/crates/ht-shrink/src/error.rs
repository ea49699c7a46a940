//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum HtError {
    /// An argument violated a precondition (dimension mismatch, bad range, ...).
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A matrix was singular or rank deficient where full rank was required.
    #[error("singular matrix: {0}")]
    Singular(String),

    /// A scalar argument was outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The requested operation is not available for the given variant.
    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// A numerical routine failed to converge. Carries the best estimate
    /// reached before giving up, when one exists.
    #[error("numerical failure: {message} (best estimate: {best_estimate:?})")]
    NumericalFailure {
        message: String,
        best_estimate: Option<f64>,
    },

    /// Malformed configuration file or option.
    #[error("config error: {0}")]
    Config(String),

    /// I/O failure while reading or writing datasets and tables.
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// A simulation replication failed; names the seed and method so the
    /// failing cell can be reproduced in isolation.
    #[error("replication {rep} (seed {seed}, method {method}) failed: {source}")]
    Replication {
        rep: usize,
        seed: u64,
        method: String,
        #[source]
        source: Box<HtError>,
    },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, HtError>;

impl HtError {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        HtError::InvalidArgument(msg.into())
    }

    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        HtError::Domain(msg.into())
    }
}
