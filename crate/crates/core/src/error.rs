//! Crate-wide error type.

use thiserror::Error;

use crate::params::FeasibilityReport;

/// Errors produced by solving, sampling and validation operations.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Target parameters outside the constructible domain (nonpositive
    /// shapes, correlation outside `[0, 1)`, or a nonpositive implied `c4`
    /// where an operation requires it).
    #[error("invalid target: {0}")]
    InvalidTarget(String),

    /// An operation input outside its domain (e.g. `log_gamma(x)` with
    /// `x <= 0`, malformed grid values).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// Gamma shape parameters must be strictly positive.
    #[error("invalid gamma shape {0}: shape must be > 0 and finite")]
    InvalidShape(f64),

    /// The target violates one or more of the positivity restrictions on the
    /// solved Dirichlet shapes. Carries the full report.
    #[error("infeasible target: {}", .0.violation_summary())]
    Infeasible(FeasibilityReport),

    /// The rejection sampler exhausted its attempt budget without an accept.
    /// This signals an acceptance probability too small to be practical for
    /// the requested shapes.
    #[error("rejection sampling failed to accept within {attempts} attempts")]
    TooManyRejections {
        /// Number of trials performed before giving up.
        attempts: u64,
    },
}

/// Convenience alias used across the crate.
pub type Result<T> = std::result::Result<T, Error>;
