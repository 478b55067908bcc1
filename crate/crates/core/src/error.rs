use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (max deviation {0:.3e})")]
    NotHermitian(f64),
    #[error("trace is {0}, expected 1")]
    TraceNotOne(f64),
    #[error("negative eigenvalue {0:.3e} beyond tolerance")]
    NegativeEigenvalue(f64),
    #[error("vector norm is {0}, expected 1")]
    NotNormalized(f64),
    #[error("invalid probability distribution: {0}")]
    InvalidDistribution(String),
    #[error("Bloch vector norm {0} exceeds 1")]
    BlochOutOfBall(f64),
    #[error("dimension must be at least 2, got {0}")]
    DimensionTooSmall(usize),
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("Weyl label ({x},{y}) out of range for dimension {d}")]
    WeylLabelOutOfRange { x: usize, y: usize, d: usize },
    #[error("parameter {lambda} outside the completely positive range [{min}, {max}]")]
    LambdaOutOfRange { lambda: f64, min: f64, max: f64 },
    #[error("map is not completely positive (min Choi eigenvalue {0:.3e})")]
    NotCompletelyPositive(f64),
    #[error("map is not trace-preserving (deviation {0:.3e})")]
    NotTracePreserving(f64),
    #[error("asymmetry ratio undefined: {0}")]
    UndefinedRatio(String),
    #[error("expected a nonnegative value, got {0}")]
    NegativeValue(f64),
    #[error("channel spec: {0}")]
    Spec(String),
}

pub type Result<T> = std::result::Result<T, Error>;
