use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("matrix is not positive definite (pivot {pivot} is {value:e})")]
    NotPositiveDefinite { pivot: usize, value: f64 },
    #[error("noise covariance is not symmetric (max deviation {0:e})")]
    Asymmetric(f64),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("{what}: size {got} exceeds limit {limit}")]
    Size {
        what: &'static str,
        got: usize,
        limit: usize,
    },
    #[error("invalid rate grouping: {0}")]
    InvalidGrouping(String),
    #[error("expected a split with {expected} parts, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("linear program failed: {0}")]
    Solver(String),
    #[error("quadrature did not converge: {0}")]
    Accuracy(String),
    #[error("objective evaluation failed: {0}")]
    Evaluation(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
