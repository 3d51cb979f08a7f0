use thiserror::Error;

/// Unified error type for the whole toolkit.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("non-finite entries: {0}")]
    NonFinite(String),
    #[error("matrix is singular (pivot below tolerance)")]
    SingularMatrix,
    #[error("eigenvalue iteration did not converge within the iteration budget")]
    ConvergenceFailure,
    #[error("matrix exponential overflowed the representable range")]
    Overflow,
    #[error("matrix is not Hurwitz: an eigenvalue has real part >= -1e-9")]
    NotHurwitz,
    #[error("Q is not symmetric within tolerance")]
    AsymmetricQ,
    #[error("matrix is not symmetric within tolerance: {0}")]
    Asymmetric(String),
    #[error("matrix is not positive definite: {0}")]
    NotPositiveDefinite(String),
    #[error("state became non-finite or exceeded the divergence sentinel")]
    NonFiniteState,
    #[error("eigendecomposition failed: {0}")]
    DecompositionFailed(String),
    #[error("trace is empty")]
    EmptyTrace,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}

pub type Result<T> = std::result::Result<T, Error>;
