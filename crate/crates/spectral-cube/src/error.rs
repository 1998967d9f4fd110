use thiserror::Error;

/// Errors surfaced by the sampling, embedding and limit layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("realization mismatch: `{left}` vs `{right}`")]
    RealizationMismatch { left: String, right: String },
    #[error("scalar field mismatch")]
    FieldMismatch,
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("basis is not orthonormal (max deviation {deviation:e})")]
    NotOrthonormal { deviation: f64 },
    #[error("matrix is not hermitian (max asymmetry {asymmetry:e})")]
    NotHermitian { asymmetry: f64 },
    #[error("eigensolver did not converge: off-diagonal norm {offdiag:e} after {sweeps} sweeps")]
    EigNotConverged { offdiag: f64, sweeps: usize },
    #[error("graph vector g_{index} is numerically dependent on its predecessors (residual {residual:e})")]
    RankDeficient { index: usize, residual: f64 },
    #[error("level parameter {n} outside supported range {min}..={max}")]
    LevelOutOfRange { n: usize, min: usize, max: usize },
    #[error("not enough graph pairs: need {needed}, have {available}")]
    NotEnoughPairs { needed: usize, available: usize },
    #[error("zero vector not allowed at position {index}")]
    ZeroVector { index: usize },
    #[error("spectral weight vanished at eigenvector {index}: the scale does not separate the eigenbasis")]
    ZeroWeight { index: usize },
    #[error("test function references coordinate {coord} beyond truncation depth {depth}")]
    DepthExceeded { coord: usize, depth: usize },
    #[error("need at least {needed} levels, have {available}")]
    NotEnoughLevels { needed: usize, available: usize },
    #[error("this operator kind requires the complex scalar field")]
    ComplexRequired,
    #[error("realizations `{from}` and `{to}` are not comparable")]
    IncompatibleRealizations { from: String, to: String },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
