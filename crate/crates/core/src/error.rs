use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate subsystem label `{0}`")]
    DuplicateLabel(String),

    #[error("unknown subsystem label `{0}`")]
    UnknownLabel(String),

    #[error("invalid dimension: {0}")]
    InvalidDimension(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("state is not normalized (squared norm {0})")]
    NotNormalized(f64),

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("Renyi order must be positive, got {0}")]
    InvalidOrder(f64),

    #[error("invalid probability spectrum: {0}")]
    InvalidSpectrum(String),

    #[error(
        "interior too small: need {needed} dimensions but 2^n = {available} (deficit {deficit})"
    )]
    PaddingDeficit {
        needed: u128,
        available: u128,
        deficit: u128,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("unknown subsystem tag `{0}`")]
    UnknownTag(String),

    #[error("chi^({q}) = {value} lies outside [0, {max}]; the exterior spectrum is inconsistent with the interior size")]
    InconsistentChi { q: f64, value: f64, max: f64 },

    #[error("hypothesis failed for step {level}: {reason}")]
    HypothesisFailed { level: u8, reason: String },

    #[error("dimension {dim} exceeds the Monte Carlo cap {cap}; use the analytic path")]
    DimCapExceeded { dim: u128, cap: u128 },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
