//! Experiment configuration and its TOML form.

use std::path::{Path, PathBuf};

use qvpde_core::ansatz::AnsatzKind;
use qvpde_core::evolve::{EvolutionPlan, Evolver};
use qvpde_core::optimize::Algorithm;
use qvpde_core::presets;
use qvpde_core::sampling::ScalingConfig;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

/// Everything needed to replay one experiment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    pub output_dir: PathBuf,
    /// PDE, ansatz families and per-stage optimizer settings (with seeds).
    pub plan: EvolutionPlan,
    #[serde(default)]
    pub optimizer_bench: BenchConfig,
    #[serde(default)]
    pub shot_scaling: ScalingConfig,
    #[serde(default)]
    pub expressibility: ExpressibilityConfig,
    #[serde(default)]
    pub verify: VerifyConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchConfig {
    pub ansaetze: Vec<AnsatzKind>,
    pub algorithms: Vec<Algorithm>,
    /// Largest budget; the reported axis is log-spaced up to it.
    pub max_budget: usize,
    pub seed: u64,
}

impl Default for BenchConfig {
    fn default() -> Self {
        BenchConfig {
            ansaetze: vec![AnsatzKind::ZgrReal { m: 6 }, AnsatzKind::Ula { d: 6 }],
            algorithms: vec![Algorithm::DifferentialEvolution, Algorithm::ParticleSwarm],
            max_budget: 100_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpressibilityConfig {
    pub strike: f64,
    pub zgr_qubits: Vec<u32>,
    pub zgr_m: Vec<u32>,
    pub ula_qubits: u32,
    pub ula_depths: Vec<u32>,
    pub ula_budget: usize,
    pub seed: u64,
}

impl Default for ExpressibilityConfig {
    fn default() -> Self {
        ExpressibilityConfig {
            strike: 50.0,
            zgr_qubits: vec![6, 8, 10],
            zgr_m: vec![1, 2, 3, 4, 5, 6],
            ula_qubits: 6,
            ula_depths: vec![1, 2, 3, 4, 5, 6],
            ula_budget: 20_000,
            seed: 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Suite {
    /// Gate-level Hadamard tests against the direct expectations.
    Shortcut,
    /// Direct and expanded cost evaluation agree.
    Modes,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VerifyConfig {
    pub suites: Vec<Suite>,
    pub tolerance: f64,
    /// Relative change applied to one expanded coefficient (test mode).
    pub perturbation: f64,
    pub seed: u64,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            suites: vec![Suite::Shortcut, Suite::Modes],
            tolerance: 1e-10,
            perturbation: 0.0,
            seed: 1,
        }
    }
}

impl ExperimentConfig {
    pub fn preset(name: &str) -> Result<Self> {
        let plan = presets::by_name(name).map_err(|e| CliError::Usage(e.to_string()))?;
        Ok(ExperimentConfig {
            experiment: name.to_string(),
            output_dir: PathBuf::from("runs").join(name),
            plan,
            optimizer_bench: BenchConfig::default(),
            shot_scaling: ScalingConfig::default(),
            expressibility: ExpressibilityConfig::default(),
            verify: VerifyConfig::default(),
        })
    }

    /// Parses TOML; errors name the offending field.
    pub fn from_toml(text: &str) -> Result<Self> {
        let de =
            toml::Deserializer::parse(text).map_err(|e| CliError::Usage(format!("config: {e}")))?;
        let cfg: ExperimentConfig = serde_path_to_error::deserialize(de).map_err(|e| {
            CliError::Usage(format!(
                "config field `{}`: {}",
                e.path(),
                e.inner().message()
            ))
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))?;
        Self::from_toml(&text)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string(self).map_err(|e| CliError::Usage(format!("config cannot be written: {e}")))
    }

    pub fn validate(&self) -> Result<()> {
        Evolver::new(&self.plan)
            .map_err(|e| CliError::Usage(format!("config field `plan`: {e}")))?;
        let s = &self.shot_scaling;
        if s.qubits.is_empty() || s.shots.is_empty() || s.trials == 0 {
            return Err(CliError::Usage(
                "config field `shot_scaling`: needs qubits, shots and at least one trial".into(),
            ));
        }
        if !(self.verify.tolerance > 0.0) {
            return Err(CliError::Usage(
                "config field `verify.tolerance`: must be positive".into(),
            ));
        }
        Ok(())
    }

    /// Applies `--seed`: every stage and experiment seed is derived from it.
    pub fn reseed(&mut self, seed: u64) {
        self.plan.u_stage.seed = seed;
        self.plan.chi_stage.seed = seed.wrapping_add(1);
        self.optimizer_bench.seed = seed;
        self.shot_scaling.seed = seed;
        self.expressibility.seed = seed;
        self.verify.seed = seed;
    }

    /// Applies `--budget` to every optimizer in the config.
    pub fn set_budget(&mut self, budget: usize) {
        self.plan.u_stage.budget = budget;
        self.plan.chi_stage.budget = budget;
        self.optimizer_bench.max_budget = budget;
        self.expressibility.ula_budget = budget;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_round_trip() {
        for name in presets::NAMES {
            let c = ExperimentConfig::preset(name).unwrap();
            let back = ExperimentConfig::from_toml(&c.to_toml().unwrap()).unwrap();
            assert_eq!(back, c, "{name}");
        }
    }

    #[test]
    fn bad_fields_are_named() {
        let mut text = ExperimentConfig::preset("kpz").unwrap().to_toml().unwrap();
        text = text.replace("steps = 200", "steps = -3");
        let e = ExperimentConfig::from_toml(&text).unwrap_err().to_string();
        assert!(e.contains("plan.steps"), "{e}");
        assert!(ExperimentConfig::from_toml("experiment = 1").is_err());
    }

    #[test]
    fn overrides_reach_every_stage() {
        let mut c = ExperimentConfig::preset("bse1d-nonlinear").unwrap();
        c.reseed(9);
        c.set_budget(500);
        assert_eq!(
            (
                c.plan.u_stage.seed,
                c.plan.chi_stage.seed,
                c.shot_scaling.seed
            ),
            (9, 10, 9)
        );
        assert_eq!(
            (
                c.plan.u_stage.budget,
                c.plan.chi_stage.budget,
                c.optimizer_bench.max_budget
            ),
            (500, 500, 500)
        );
    }
}
