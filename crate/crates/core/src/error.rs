use thiserror::Error;

/// Errors raised by the solver library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {context}: expected {expected}, got {found}")]
    DimensionMismatch {
        context: &'static str,
        expected: String,
        found: String,
    },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("weight entries must be finite and strictly positive ({0})")]
    NonPositiveWeight(String),
    #[error("matrix is singular to working precision (pivot {pivot:e} at step {step})")]
    Singular { step: usize, pivot: f64 },
    #[error("eigenvalue iteration failed to converge after {sweeps} sweeps ({found} of {total} eigenvalues found)")]
    EigenNoConvergence {
        sweeps: usize,
        found: usize,
        total: usize,
    },
    #[error("deflation unavailable: {0}")]
    Deflation(String),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn shape_mismatch(
    context: &'static str,
    expected: (usize, usize),
    found: (usize, usize),
) -> Error {
    Error::DimensionMismatch {
        context,
        expected: format!("{}x{}", expected.0, expected.1),
        found: format!("{}x{}", found.0, found.1),
    }
}
