use thiserror::Error;

/// Errors raised by the matrix kernels and everything built on them.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum LinalgError {
    #[error("dimension mismatch in {op}: {left:?} vs {right:?}")]
    DimensionMismatch {
        op: &'static str,
        left: (usize, usize),
        right: (usize, usize),
    },
    #[error("{op} requires a square matrix, got {rows}x{cols}")]
    NotSquare { op: &'static str, rows: usize, cols: usize },
    #[error("matrix is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },
    #[error("{routine} did not converge within {iterations} iterations")]
    ConvergenceFailure { routine: &'static str, iterations: usize },
    #[error("exponent must be positive and finite, got {0}")]
    InvalidExponent(f64),
    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("invalid tolerance: {0}")]
    InvalidTolerance(String),
    #[error("invalid matrix file: {0}")]
    InvalidFormat(String),
}

pub type Result<T, E = LinalgError> = std::result::Result<T, E>;
