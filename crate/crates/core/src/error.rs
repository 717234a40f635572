use thiserror::Error;

/// Errors produced by the hybrid-bracket library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operands are built on different su(n) bases")]
    BasisMismatch,

    #[error("state components do not share one Gaussian envelope")]
    EnvelopeMismatch,

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("point {index} lies on the |L| = 0 singular locus (|L| = {norm:e})")]
    SingularPoint { index: usize, norm: f64 },

    #[error("operator is not Hermitian (max |M - M^dagger| = {0:e})")]
    NotHermitian(f64),

    #[error("initial value is not positive on the point set (margin {0:e})")]
    NotPositive(f64),

    #[error("empty point set")]
    EmptyPointSet,

    #[error("bracket output is not proportional to e_(r+s): {0}")]
    PostulateViolation(String),

    #[error("state normalization is not positive ({0:e})")]
    Normalization(f64),

    #[error("parse error at byte {position} in `{input}`: {message}")]
    Parse {
        input: String,
        position: usize,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
