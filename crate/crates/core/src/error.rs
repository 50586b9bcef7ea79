use thiserror::Error;

/// Errors raised by the library. Violations found by the verification
/// suites are reported in their reports, not through this type.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("descriptor mismatch: {left} vs {right}")]
    DescriptorMismatch { left: String, right: String },
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("value not in group: {0}")]
    NotInGroup(String),
    #[error("invalid automorphism: {0}")]
    InvalidAutomorphism(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("space mismatch: {0}")]
    SpaceMismatch(String),
    #[error("invalid map: {0}")]
    InvalidMap(String),
    #[error("invalid space: {0}")]
    InvalidSpace(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("base change incompatible at generator `{generator}`, lambda = {lambda}")]
    BaseChangeIncompatible { generator: String, lambda: String },
    #[error("out of range: {0}")]
    OutOfRange(String),
    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
