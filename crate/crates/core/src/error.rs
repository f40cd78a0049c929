use thiserror::Error;

#[derive(Debug, Error)]
pub enum QxError {
    #[error("invalid dimension: {0}")]
    InvalidDimension(String),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index out of range: {0}")]
    IndexOutOfRange(String),
    #[error("inconsistent basis: imaginary residue {0:e} in structure constants")]
    InconsistentBasis(f64),
    #[error("matrix is not unitary (residual {0:e})")]
    NotUnitary(f64),
    #[error("matrix is not Hermitian (residual {0:e})")]
    NotHermitian(f64),
    #[error("channel is not trace preserving (residual {0:e})")]
    NotTracePreserving(f64),
    #[error("all eigenvalues of the error Gram matrix fall below the cutoff")]
    DegenerateNoise,
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
    #[error("operator supports overlap on subsystem {0}")]
    OverlappingSupport(usize),
    #[error("operator is not logical (deviation {0:e})")]
    NotLogical(f64),
    #[error("dense cap exceeded: {needed} amplitudes > cap {cap}")]
    DenseCapExceeded { needed: usize, cap: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, QxError>;
