use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid dimension {0}")]
    InvalidDimension(usize),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The caller violated a geometric precondition (e.g. start point on the wrong side of a sphere).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("rejection sampler gave up after {proposals} proposals ({context})")]
    RejectionCapExceeded { proposals: u64, context: String },

    #[error("insufficient sample: need at least {needed} points, got {got}")]
    InsufficientSample { needed: usize, got: usize },

    #[error(
        "hit probability too low: {hits} hits in {paths} paths after {consecutive_misses} consecutive misses"
    )]
    HitProbabilityTooLow {
        hits: usize,
        paths: u64,
        consecutive_misses: u64,
    },

    #[error("capacity undefined in the recurrent case (alpha = {alpha}, d = {d})")]
    Recurrent { alpha: f64, d: usize },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
