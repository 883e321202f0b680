use thiserror::Error;

/// Errors raised when an input violates a precondition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("base must be at least 2, got {0}")]
    InvalidBase(u32),

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("invalid schedule: {0}")]
    InvalidSchedule(String),

    #[error("schedule has length {schedule} but the point set needs {expected}")]
    ScheduleLength { schedule: usize, expected: usize },

    #[error("invalid Haar index: {0}")]
    InvalidIndex(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("value {0} lies outside the admissible domain")]
    OutOfDomain(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("numeric overflow: {0}")]
    Overflow(String),

    #[error("malformed input: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
