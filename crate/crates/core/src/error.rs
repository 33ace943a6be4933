use alloc::string::String;

/// Errors raised by the digit algebra, the search engine and the geometry routines.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid base {base}: must be at least {min}")]
    InvalidBase { base: u32, min: u32 },
    #[error("digit {digit} out of range for base {base}")]
    InvalidDigit { digit: u32, base: u32 },
    #[error("{value} is not an odd prime")]
    InvalidPrime { value: u64 },
    #[error("invalid digit constraint: {0}")]
    InvalidConstraint(String),
    #[error("invalid range: {0}")]
    InvalidRange(String),
    #[error("no member of the constraint at or above the requested value")]
    NoMember,
    #[error("checkpoint does not belong to this search (expected digest {expected}, found {found})")]
    CheckpointMismatch { expected: String, found: String },
    #[error("invalid checkpoint: {0}")]
    InvalidCheckpoint(String),
    #[error("slope set is unbounded: an interval of the first factor touches 0")]
    InvalidDomain,
    #[error("window {0} lies outside the admissible range")]
    InvalidWindow(String),
    #[error("cover would have {count} components (limit {limit})")]
    TooManyComponents { count: u128, limit: u128 },
}

pub type Result<T> = core::result::Result<T, Error>;
