use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid Lie type: {0}")]
    InvalidType(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("not a root: {0}")]
    NotARoot(String),
    #[error("vectors belong to different flags")]
    FlagMismatch,
    #[error("class {class} has odd size {size}")]
    OddClass { class: usize, size: usize },
    #[error("expected {expected} blocks, got {got}")]
    MissingClass { expected: usize, got: usize },
    #[error("invariant violated: {0}")]
    InvariantViolation(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("structure constants failed the Jacobi identity: {0}")]
    Jacobi(String),
    #[error("2-form is not invariant: pair ({0}, {1}) crosses classes")]
    NonInvariantB(usize, usize),
    #[error("no invertible Cayley parameter after {0} attempts")]
    RetriesExhausted(usize),
}

pub type Result<T> = std::result::Result<T, Error>;
