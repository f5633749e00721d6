use thiserror::Error;

/// Errors produced by the library core.
#[derive(Debug, Error)]
pub enum Error {
    /// A probability entry is non-finite or negative beyond rounding slack.
    #[error("invalid probability at index {index}: {value}")]
    InvalidProbability { index: usize, value: f64 },

    /// A distribution with no probability mass at all.
    #[error("distribution has no positive entries")]
    EmptyDistribution,

    /// Strict validation rejected a vector whose entries do not sum to 1.
    #[error("probabilities sum to {sum}, expected 1 within {tolerance}")]
    NotNormalized { sum: f64, tolerance: f64 },

    /// A state and a spectrum (or two vectors) of different lengths were combined.
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    /// A model constant violates its positivity constraint.
    #[error("invalid constant {name} = {value}: must be strictly positive")]
    InvalidConstant { name: &'static str, value: f64 },

    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// The time integrator aborted with a diagnostic.
    #[error("integration aborted at t = {t}: {reason}")]
    IntegrationAbort { t: f64, reason: String },

    /// An operation that needs at least two distinct energy levels was given
    /// a spectrum where every level is equal.
    #[error("degenerate spectrum: all levels equal")]
    DegenerateSpectrum,
}
