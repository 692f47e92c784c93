use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Config = 1,
    Verification = 2,
    ResourceCap = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("config field `{field}`: {reason}")]
    Field { field: String, reason: String },

    #[error("cannot parse config {path}: {reason}")]
    Parse { path: PathBuf, reason: String },

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Core(#[from] horizon_core::Error),
}

impl CliError {
    pub fn field(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CliError::Field {
            field: field.into(),
            reason: reason.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Core(horizon_core::Error::DimCapExceeded { .. }) => ExitCode::ResourceCap,
            _ => ExitCode::Config,
        }
    }
}
