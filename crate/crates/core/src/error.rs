use thiserror::Error;

/// Errors raised by the numeric and sequence layers.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by a ball that contains zero")]
    DivisionByEnclosedZero,

    #[error("domain violation: {0}")]
    DomainViolation(String),

    #[error("tangent({0}) did not reduce to an integer")]
    NonIntegerResult(u64),

    #[error("precision exhausted at {0} bits")]
    PrecisionExhausted(u32),

    #[error("no threshold found up to x = {0}")]
    SearchExhausted(String),

    #[error("sequence term at index {0} is not positive")]
    NonPositiveTerm(u64),

    #[error("insufficient range: need at least {needed} terms, got {got}")]
    InsufficientRange { needed: u64, got: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::DomainViolation(msg.into())
}
