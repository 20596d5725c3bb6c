use thiserror::Error;

/// Errors shared by every module.
///
/// Decoders distinguish `DecodeFailure` (input inconsistent with the claimed
/// label/syndrome, a signal downstream callers rely on) from
/// `ContractViolation` (a precondition such as regularity or ball membership
/// was broken by the caller).
#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum CodeError {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("invalid word: {0}")]
    InvalidWord(String),
    #[error("enumeration cap exceeded: {0}")]
    CapExceeded(String),
    #[error("decode failure: {0}")]
    DecodeFailure(String),
    #[error("contract violation: {0}")]
    ContractViolation(String),
    #[error("cache error: {0}")]
    Cache(String),
}

pub type Result<T> = std::result::Result<T, CodeError>;

pub(crate) fn param_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(CodeError::InvalidParameter(msg.into()))
}
