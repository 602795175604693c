use thiserror::Error;

/// Errors shared by all solver and model modules.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("under-resolved grid: {0}")]
    UnderResolved(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("iteration did not converge: {0}")]
    NoConvergence(String),
    #[error("degenerate spectral gap: {0}")]
    DegenerateGap(String),
    #[error("below numeric floor: {0}")]
    NumericFloor(String),
    #[error("invalid trial state: {0}")]
    InvalidTrial(String),
    #[error("momentum window violation: {0}")]
    WindowViolation(String),
    #[error("overflow guard tripped: {0}")]
    Overflow(String),
    #[error("scan window too small: {0}")]
    WindowTooSmall(String),
    #[error("no spectral crossing found: {0}")]
    NoCrossing(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
