use thiserror::Error;

/// Errors produced by tensor construction, algebra, the solver and file I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimensions {n1}x{n2}x{n3}: {reason}")]
    InvalidDims {
        n1: usize,
        n2: usize,
        n3: usize,
        reason: &'static str,
    },
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("index {index} out of range for extent {extent}")]
    Index { index: usize, extent: usize },
    #[error("non-finite value at flat position {0}")]
    NonFinite(usize),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("spectrum is not conjugate-symmetric: imaginary residue {residue:e} exceeds {limit:e}")]
    SymmetryViolation { residue: f64, limit: f64 },
    #[error("SVD did not converge on spectral slice {slice}")]
    SvdNonConvergence { slice: usize },
    #[error("format error: {0}")]
    Format(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
