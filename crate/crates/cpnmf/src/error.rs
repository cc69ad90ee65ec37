//! Error types shared across the crate.

use crate::matrix::SymMatrix;

/// Crate-wide error type.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed arguments: bad shapes, negative entries where nonnegative
    /// ones are required, empty constraint lists, and the like.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A value left the mathematical domain of an operation (log of a
    /// negative number, dual point outside the log domain, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// A value would overflow the floating-point range.
    #[error("range error: {0}")]
    Range(String),

    /// An iteration failed to converge or produced non-finite values.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// Dykstra's projection ran out of cycles before the per-cycle change
    /// dropped below tolerance. Carries the last iterate so callers can
    /// inspect how far it got.
    #[error("dykstra projection stalled after {cycles} cycles (last cycle change {change:.3e})")]
    DykstraStalled {
        cycles: usize,
        change: f64,
        last: Box<SymMatrix>,
    },

    /// The requested factorization mode cannot represent the input
    /// (e.g. a rank-two approximation with negative entries).
    #[error("mode failure: {0}")]
    ModeFailure(String),

    /// A feasibility precondition failed (e.g. Gram rows spread over more
    /// than a quarter turn in the rank-two factorizer).
    #[error("infeasible: {0}")]
    Infeasible(String),

    /// File parse error with location.
    #[error("parse error at {path}:{line}: {msg}")]
    Parse {
        path: String,
        line: usize,
        msg: String,
    },

    /// I/O failure with path context.
    #[error("i/o error on {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    /// Exit code a CLI run should use for this error: 2 for numeric
    /// failures, 1 for everything else (usage, parse, I/O).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::Range(_)
            | Error::Numeric(_)
            | Error::DykstraStalled { .. }
            | Error::ModeFailure(_)
            | Error::Infeasible(_) => 2,
            Error::InvalidInput(_) | Error::Parse { .. } | Error::Io { .. } => 1,
        }
    }
}
