use thiserror::Error;

/// Crate-wide error type.
#[derive(Error, Debug)]
pub enum ExtendError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("point index {index} out of range for a {len}-point distance matrix")]
    IndexOutOfRange { index: f64, len: usize },

    #[error("coordinates must be finite")]
    NonFiniteCoordinate,

    #[error("function values must be finite")]
    NonFiniteValue,

    #[error("point cloud must be nonempty")]
    EmptySet,

    #[error("duplicate point: ids {first} and {second} have identical coordinates")]
    DuplicatePoint { first: usize, second: usize },

    #[error("function has {values} values but the point cloud has {points} points")]
    LengthMismatch { points: usize, values: usize },

    #[error("functions are attached to different point clouds")]
    SetMismatch,

    #[error(
        "function value at point {index} is negative ({value}); \
         the sup-weight construction only extends nonnegative functions \
         (it collapses to 0 on negative constants)"
    )]
    NegativeValues { index: usize, value: f64 },

    #[error("weight arguments outside the domain s >= t > 0: s={s}, t={t}")]
    WeightDomain { s: f64, t: f64 },

    #[error("query point lies on the sampled set (distance {rho}); the step function is undefined there")]
    MemberPoint { rho: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{path}:{line}: {message}")]
    FileFormat {
        path: String,
        line: usize,
        message: String,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, ExtendError>;
