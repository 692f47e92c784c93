//! Scenario runner for the horizon toolkit: TOML scenarios in, CSV tables
//! and JSON reports out.

pub mod config;
pub mod error;
pub mod format;
pub mod report;
pub mod run;

pub use config::{ExtConfig, ScenarioConfig};
pub use error::{CliError, ExitCode};
pub use report::{RunReport, Warning, WarningCode};
pub use run::{run, write_artifacts, Artifact, Command, RunOutput};
