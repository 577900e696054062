use thiserror::Error;

/// Errors produced by matrix arithmetic, equation checks and constructions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum GybeError {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix is singular (pivot {pivot:e} below threshold)")]
    Singular { pivot: f64 },

    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },

    #[error("index {index} out of range for {n} strands")]
    IndexOutOfRange { index: i64, n: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("braid relation violated for generators ({first}, {second}): residual {residual:e}")]
    Representation { first: usize, second: usize, residual: f64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, GybeError>;
