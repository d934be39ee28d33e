use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("eigendecomposition did not converge (dim {dim})")]
    EigenFailure { dim: usize },

    #[error("dimension {dim} exceeds the configured cap {cap}")]
    DimensionOverflow { dim: usize, cap: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("size mismatch: n = {left} vs n = {right}")]
    SizeMismatch { left: usize, right: usize },

    #[error("not a permutation of 0..{n}: {images:?}")]
    InvalidPermutation { n: usize, images: Vec<usize> },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NotUnitary { residual: f64 },

    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a projection (residual {residual:.3e})")]
    NotProjection { residual: f64 },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("index ({i}, {j}) out of range for n = {n}")]
    IndexOutOfRange { i: usize, j: usize, n: usize },

    #[error("all weights are zero")]
    AllZeroWeights,

    #[error("invalid weight vector: {0}")]
    InvalidWeights(String),

    #[error("marginals are infeasible: source mass {source_mass}, target mass {target_mass}")]
    InfeasibleMarginals { source_mass: f64, target_mass: f64 },

    #[error("transport simplex failed to terminate after {pivots} pivots")]
    DegenerateCycle { pivots: usize },

    #[error("instance too large for brute-force enumeration ({rows}x{cols}, max 4x4)")]
    TooLarge { rows: usize, cols: usize },

    #[error("state is not classical")]
    NotClassical,

    #[error("magic unitary failed validation (worst residual {worst:.3e})")]
    InvalidMagicUnitary { worst: f64 },

    #[error("empty mixture")]
    EmptyMixture,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("inconsistent bounds: {0}")]
    Inconsistent(String),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse(err.to_string())
    }
}
