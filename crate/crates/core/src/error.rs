use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("incompatible radicands: sqrt({0}) and sqrt({1})")]
    IncompatibleRadicands(String, String),

    #[error("value {0} is outside the open unit interval")]
    OutOfUnitInterval(String),

    #[error("point {0} is outside [0, 1)")]
    PointOutOfRange(String),

    #[error("continued fraction has too few known entries (needed {needed}, have {available})")]
    TooFewEntries { needed: usize, available: usize },

    #[error("continued fraction is empty")]
    EmptyExpansion,

    #[error("partial quotient {0} exceeds the supported range")]
    PartialQuotientTooLarge(String),

    #[error("invalid partial quotient {0}: entries must be positive")]
    InvalidPartialQuotient(u64),

    #[error("continued fraction did not become periodic within {0} steps")]
    PeriodNotFound(usize),

    #[error("truncated expansion carries no exact value")]
    PrecisionExhausted,

    #[error("comparison undecided at {0} bits")]
    Undecided(u32),

    #[error("degenerate window after clipping")]
    DegenerateWindow,

    #[error("rational rotation {0} has no isolated strictly heavy point")]
    RationalRotation(String),

    #[error("invalid rational rotation {p}/{q}")]
    InvalidRational { p: u64, q: u64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("logarithm of non-positive enclosure")]
    NonPositiveLog,

    #[error("unsupported format: {0}")]
    UnsupportedFormat(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
