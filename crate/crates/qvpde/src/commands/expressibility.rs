use qvpde_core::ansatz::expressibility::{ula_sweep, zgr_sweep, ExpSegments, FitRow};
use qvpde_core::classical::{physical_grid, put_payoff};
use qvpde_core::evolve::reflect_for_dirichlet;
use qvpde_core::optimize::{Algorithm, ScaleHandling, StageConfig};
use qvpde_core::presets::bse_grid;
use qvpde_core::state::complexify;
use serde::{Deserialize, Serialize};

use super::prepare;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{write_csv, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MSpread {
    pub m: u32,
    pub function_error_spread: f64,
    pub sampled_error_spread: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExpressibilitySummary {
    pub rows: Vec<FitRow>,
    /// Spread across qubit counts at fixed register size.
    pub spreads: Vec<MSpread>,
}

fn reflected_put(n: u32, strike: f64) -> Result<Vec<f64>> {
    let g = bse_grid(n);
    Ok(reflect_for_dirichlet(
        &put_payoff(&physical_grid(&g), strike),
        &g,
    )?)
}

fn spread(v: impl Iterator<Item = f64> + Clone) -> f64 {
    v.clone().fold(f64::MIN, f64::max) - v.fold(f64::MAX, f64::min)
}

/// Fit error of both ansatz families on the reflected put payoff.
pub fn expressibility(cfg: &ExperimentConfig) -> Result<ExpressibilitySummary> {
    let ec = &cfg.expressibility;
    if !(ec.strike > 0.0) {
        return Err(CliError::Usage(
            "config field `expressibility.strike`: must be positive".into(),
        ));
    }
    prepare(cfg)?;
    let mut rows = Vec::new();
    for &n in &ec.zgr_qubits {
        let ms: Vec<u32> = ec.zgr_m.iter().copied().filter(|&m| m + 2 <= n).collect();
        let continuum = ExpSegments::reflected_put(ec.strike, &bse_grid(n));
        rows.extend(zgr_sweep(
            &reflected_put(n, ec.strike)?,
            n,
            &ms,
            Some(&continuum),
        )?);
    }
    if !ec.ula_depths.is_empty() {
        let target = complexify(&reflected_put(ec.ula_qubits, ec.strike)?);
        let mut stage = StageConfig::new(ec.ula_budget, ec.seed);
        stage.algorithm = Algorithm::ParticleSwarm;
        stage.scale = ScaleHandling::Profiled;
        rows.extend(ula_sweep(&target, ec.ula_qubits, &ec.ula_depths, &stage)?);
    }
    let mut spreads = Vec::new();
    for &m in &ec.zgr_m {
        let at_m: Vec<&FitRow> = rows
            .iter()
            .filter(|r| r.family == "zgr_qft" && r.config == m)
            .collect();
        if at_m.len() > 1 {
            spreads.push(MSpread {
                m,
                function_error_spread: spread(at_m.iter().filter_map(|r| r.function_error)),
                sampled_error_spread: spread(at_m.iter().map(|r| r.sampled_error)),
            });
        }
    }
    write_csv(&cfg.output_dir.join("expressibility.csv"), &rows)?;
    let summary = ExpressibilitySummary { rows, spreads };
    write_json(
        &cfg.output_dir.join("expressibility.json"),
        &summary.spreads,
    )?;
    Ok(summary)
}
