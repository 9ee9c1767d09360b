use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or dimensions of inputs do not line up.
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    /// Input violates a documented precondition (normalization, range, ...).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// An eigensolver or factorization did not converge.
    #[error("linear algebra failure: {0}")]
    Linalg(String),

    /// An integrator or iterative scheme left its domain of validity.
    #[error("numerical failure: {0}")]
    Numerics(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
