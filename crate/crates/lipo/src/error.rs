//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid domain: {0}")]
    InvalidDomain(String),

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("evaluation history is empty")]
    EmptyHistory,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("unknown objective `{0}`")]
    UnknownObjective(String),

    #[error("point {0:?} lies outside the objective domain")]
    OutOfDomain(Vec<f64>),

    #[error("objective returned a non-finite value {value} at {point:?}")]
    NonFiniteValue { value: f64, point: Vec<f64> },

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("linear solve failed: {0}")]
    SolveFailure(String),

    #[error("missing objective metadata: {0}")]
    MissingMetadata(String),

    #[error("invalid algorithm spec `{spec}`: {reason}")]
    InvalidAlgorithmSpec { spec: String, reason: String },

    #[error("f_target requires f_max >= f_avg (got f_max={f_max}, f_avg={f_avg})")]
    TargetOrder { f_max: f64, f_avg: f64 },

    #[error("csv parse error: {0}")]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
