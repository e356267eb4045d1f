use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("operator is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),
    #[error("invalid density operator: {0}")]
    InvalidState(String),
    #[error("log of operator with nonpositive eigenvalue {0:e}")]
    NonPositive(f64),
    #[error("invalid channel: {0}")]
    InvalidChannel(String),
    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),
    #[error("invalid test operator: {0}")]
    InvalidTestOperator(String),
    #[error("loss entry {value} at index {index} outside [-1, 1]")]
    LossOutOfRange { index: usize, value: f64 },
    #[error("spectral norm {0} exceeds 1")]
    SpectralNorm(f64),
    #[error("projection did not converge: residual {residual:e} after {iterations} iterations")]
    NoConvergence { residual: f64, iterations: usize },
    #[error("query budget exhausted after {0} rounds")]
    BudgetExhausted(usize),
    #[error("invalid parameter: {0}")]
    Parameter(String),
    #[error("serialization: {0}")]
    Serialization(String),
}

pub type Result<T> = std::result::Result<T, Error>;
