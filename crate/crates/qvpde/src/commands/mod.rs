//! One function per subcommand; each writes its artifacts under the
//! configured output directory and returns a summary.

use std::path::{Path, PathBuf};

use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output;

mod bench;
mod expressibility;
mod shots;
mod solve;
mod verify;

pub use bench::{optimizer_bench, BenchRow, BenchSummary};
pub use expressibility::{expressibility, ExpressibilitySummary};
pub use shots::{shot_scaling, ScalingSummary};
pub use solve::{solve, SolveOptions, SolveSummary};
pub use verify::{verify, SuiteResult, VerifyReport};

/// Command-line overrides applied on top of a preset or config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub steps: Option<usize>,
    pub budget: Option<usize>,
    pub out: Option<PathBuf>,
}

/// Config from `--config`, else `--preset`, else `fallback`; overrides last.
pub fn resolve(
    preset: Option<&str>,
    config: Option<&Path>,
    fallback: Option<&str>,
    ov: &Overrides,
) -> Result<ExperimentConfig> {
    let mut cfg = match (config, preset.or(fallback)) {
        (Some(p), _) => ExperimentConfig::load(p)?,
        (None, Some(name)) => ExperimentConfig::preset(name)?,
        (None, None) => {
            return Err(CliError::Usage(
                "one of --preset or --config is required".into(),
            ))
        }
    };
    if let Some(s) = ov.seed {
        cfg.reseed(s);
    }
    if let Some(n) = ov.steps {
        cfg.plan.steps = n;
    }
    if let Some(b) = ov.budget {
        cfg.set_budget(b);
    }
    if let Some(o) = &ov.out {
        cfg.output_dir = o.clone();
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Creates the output directory and stores the resolved config in it.
fn prepare(cfg: &ExperimentConfig) -> Result<()> {
    output::ensure_dir(&cfg.output_dir)?;
    output::write_text(&cfg.output_dir.join("config.toml"), &cfg.to_toml()?)
}

#[derive(Debug, serde::Serialize)]
struct Versions {
    qvpde: &'static str,
    qvpde_core: &'static str,
}

const VERSIONS: Versions = Versions {
    qvpde: env!("CARGO_PKG_VERSION"),
    qvpde_core: qvpde_core::VERSION,
};
