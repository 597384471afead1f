use thiserror::Error;

/// Errors raised by the estimation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum MwwError {
    #[error("unsupported wavelet order M={0}; supported range is 1..=10")]
    UnsupportedOrder(usize),

    #[error("series of length {len} too short for scale {requested}; largest feasible scale is {max_feasible}")]
    InsufficientData {
        len: usize,
        requested: usize,
        max_feasible: usize,
    },

    #[error("exponent {value} outside the admissible domain ({lower}, {upper})")]
    Domain { value: f64, lower: f64, upper: f64 },

    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),

    #[error("memory parameter d={d} on channel {channel} is not below the vanishing-moment bound M={moments}")]
    VanishingMoments {
        channel: usize,
        d: f64,
        moments: usize,
    },

    #[error("invalid scale range j0={j0}, j1={j1}: {reason}")]
    ScaleRange {
        j0: usize,
        j1: usize,
        reason: String,
    },

    #[error("singular matrix in likelihood evaluation")]
    Singular,

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("all {0} replications failed")]
    AllReplicationsFailed(usize),

    #[error("univariate RMSE is zero for channel {0}; ratio undefined")]
    UndefinedRatio(usize),
}

pub type Result<T> = std::result::Result<T, MwwError>;
