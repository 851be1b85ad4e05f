use thiserror::Error;

/// Errors raised by the engine.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Invalid input or misuse of an operation (wrong arity, mismatched universes, ...).
    #[error("usage error: {0}")]
    Usage(String),
    /// Polynomial expression could not be parsed.
    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },
    /// The wall-clock budget ran out; `stage` names the last stage that was entered.
    #[error("timeout exceeded during stage `{stage}`")]
    Timeout { stage: String },
    /// An internal consistency check failed.
    #[error("computation error: {0}")]
    Computation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}
