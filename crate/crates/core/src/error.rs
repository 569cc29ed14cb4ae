use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is empty")]
    EmptyMatrix,

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix has non-finite entries")]
    NonFinite,

    #[error("metric is not Hermitian (relative asymmetry {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("metric is not positive semidefinite (eigenvalue {eigenvalue:.3e})")]
    NotPositiveSemidefinite { eigenvalue: f64 },

    #[error("metric is the zero matrix")]
    ZeroMetric,

    #[error("operator is not A-bounded (residual {residual:.3e})")]
    NotABounded { residual: f64 },

    #[error("operator has no A-adjoint (range residual {residual:.3e})")]
    NotInBA { residual: f64 },

    #[error("compressed rank {rank} exceeds the oracle limit {limit}")]
    RankTooLarge { rank: usize, limit: usize },

    #[error("parameter t must be nonzero")]
    ZeroT,

    #[error("required seminorm {what} is zero")]
    DegenerateNorm { what: &'static str },

    #[error("b = {0} must be positive")]
    NonpositiveB(f64),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
