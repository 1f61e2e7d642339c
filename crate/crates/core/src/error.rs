use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix contains a non-finite entry")]
    NonFinite,

    #[error("matrix is not Hermitian (asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("matrix is not positive semidefinite (eigenvalue {0:e})")]
    NotPsd(f64),

    #[error("trace {0} differs from 1")]
    BadTrace(f64),

    #[error("vector norm {0} differs from 1")]
    NotUnit(f64),

    #[error("ancilla dimension {ancilla} is smaller than the rank {rank}")]
    AncillaTooSmall { ancilla: usize, rank: usize },

    #[error("super-operator is not completely positive (min Choi eigenvalue {0:e})")]
    NotCompletelyPositive(f64),

    #[error("super-operator is not positive")]
    NotPositive,

    #[error("{0} did not converge")]
    NoConvergence(&'static str),

    #[error("input dimension {dim} exceeds the oracle cap {cap}")]
    DimensionCap { dim: usize, cap: usize },

    #[error("malformed JSON: {0}")]
    Json(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
