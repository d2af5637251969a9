//! Experiment runner: presets and TOML configs in, CSV tables and JSON
//! manifests out.

pub mod commands;
pub mod config;
pub mod error;
pub mod output;

pub use config::ExperimentConfig;
pub use error::{CliError, Result};

/// Worker threads from `QVPDE_THREADS`, if set.
pub fn threads_from_env(value: Option<&str>) -> Result<Option<usize>> {
    match value {
        None => Ok(None),
        Some(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(CliError::Usage(format!(
                "QVPDE_THREADS must be a positive integer, got `{v}`"
            ))),
        },
    }
}
