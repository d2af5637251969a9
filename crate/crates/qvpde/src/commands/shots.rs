use qvpde_core::sampling::{scaling_experiment, ScalingFit, ScalingRow};
use serde::{Deserialize, Serialize};

use super::prepare;
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{write_csv, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingSummary {
    pub fits: Vec<ScalingFit>,
    /// `exp(intercept)` per qubit count.
    pub prefactors: Vec<f64>,
    /// Ratios of consecutive prefactors.
    pub prefactor_ratios: Vec<f64>,
}

pub fn shot_scaling(cfg: &ExperimentConfig) -> Result<(Vec<ScalingRow>, ScalingSummary)> {
    prepare(cfg)?;
    let (rows, fits) = scaling_experiment(&cfg.shot_scaling)?;
    let prefactors: Vec<f64> = fits.iter().map(ScalingFit::prefactor).collect();
    let prefactor_ratios = prefactors.windows(2).map(|w| w[1] / w[0]).collect();
    let summary = ScalingSummary {
        fits,
        prefactors,
        prefactor_ratios,
    };
    write_csv(&cfg.output_dir.join("shot_scaling.csv"), &rows)?;
    write_json(&cfg.output_dir.join("shot_scaling_fits.json"), &summary)?;
    Ok((rows, summary))
}
