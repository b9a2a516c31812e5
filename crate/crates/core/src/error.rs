use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("manifold mismatch: {0}")]
    ManifoldMismatch(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("non-finite value in {0}")]
    NonFinite(&'static str),
    #[error("weight function is degenerate: {0}")]
    DegenerateWeight(String),
    #[error("extension sum does not converge: {0}")]
    Divergent(String),
    #[error("config error at line {line}: {msg}")]
    Config { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
