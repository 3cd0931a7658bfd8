//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong when building states, measurements, or
/// running an experiment.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix shapes are incompatible: {left} vs {right}")]
    ShapeMismatch { left: String, right: String },

    #[error("direction has norm {norm}, expected a unit vector")]
    NonUnitDirection { norm: f64 },

    #[error("matrix is not Hermitian (max deviation {deviation:.3e})")]
    NonHermitian { deviation: f64 },

    #[error("invalid density matrix: {reason}")]
    InvalidDensityMatrix { reason: String },

    #[error("party count {n} outside supported range {min}..={max}")]
    PartyCountOutOfRange { n: usize, min: usize, max: usize },

    #[error("party index {index} outside 1..={n_parties}")]
    PartyIndexOutOfRange { index: usize, n_parties: usize },

    #[error("keep set for partial trace is empty")]
    EmptyKeepSet,

    #[error("sharpness {value} outside [0, 1]")]
    SharpnessOutOfRange { value: f64 },

    #[error("joint measurement inadmissible: Busch margin {margin:.6e} < 0")]
    InadmissibleJointMeasurement { margin: f64 },

    #[error("setting tuple {tuple:#b} has no samples")]
    MissingSettingCoverage { tuple: usize },

    #[error("invalid POVM: {reason}")]
    InvalidPovm { reason: String },

    #[error("invalid configuration: {reason}")]
    InvalidConfig { reason: String },

    #[error("non-finite value in report field `{field}`")]
    NonFiniteReportField { field: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("failed to parse JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid_config(reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            reason: reason.into(),
        }
    }
}
