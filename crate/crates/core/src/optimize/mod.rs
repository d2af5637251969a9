//! Gradient-free optimizers and the per-timestep protocol.

pub mod de;
pub mod line_search;
pub mod pso;

use alloc::vec::Vec;

pub use de::differential_evolution;
pub use line_search::{line_search_scale, LineSearch};
pub use pso::particle_swarm;

use crate::error::{bail, Result};
use crate::state::ParamVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Algorithm {
    DifferentialEvolution,
    ParticleSwarm,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeParams {
    /// Differential weight `F`.
    pub f: f64,
    /// Crossover rate `CR`.
    pub cr: f64,
}

impl Default for DeParams {
    fn default() -> Self {
        DeParams { f: 0.8, cr: 0.9 }
    }
}

/// Optimizer settings over a flat parameter vector.
#[derive(Debug, Clone, PartialEq)]
pub struct OptimizerConfig {
    pub algorithm: Algorithm,
    /// Maximum number of cost evaluations.
    pub budget: usize,
    pub bounds: Vec<(f64, f64)>,
    pub population: usize,
    pub seed: u64,
    pub de: DeParams,
    /// Stop as soon as the best cost falls to this value.
    pub stop_below: f64,
    /// Initial population spread as a fraction of each half-width around the
    /// warm start; `None` samples the whole box.
    pub init_spread: Option<f64>,
}

impl OptimizerConfig {
    pub fn new(algorithm: Algorithm, budget: usize, bounds: Vec<(f64, f64)>, seed: u64) -> Self {
        OptimizerConfig {
            algorithm,
            budget,
            bounds,
            population: 15,
            seed,
            de: DeParams::default(),
            stop_below: 0.0,
            init_spread: None,
        }
    }

    pub(crate) fn validate(&self, dim: usize) -> Result<()> {
        if self.population < 4 {
            bail!(
                Config,
                "population must be at least 4, got {}",
                self.population
            );
        }
        if self.budget < self.population {
            bail!(
                Config,
                "budget {} is smaller than the population {}",
                self.budget,
                self.population
            );
        }
        if self.bounds.len() != dim {
            bail!(
                Config,
                "{} bounds for {} parameters",
                self.bounds.len(),
                dim
            );
        }
        for (i, &(lo, hi)) in self.bounds.iter().enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
                bail!(Config, "bound {i} is not a finite interval: ({lo}, {hi})");
            }
        }
        if !(0.0..=2.0).contains(&self.de.f) || !(0.0..=1.0).contains(&self.de.cr) {
            bail!(
                Config,
                "DE parameters out of range: F={} CR={}",
                self.de.f,
                self.de.cr
            );
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptimizeResult {
    /// Best flat parameter vector found.
    pub best: Vec<f64>,
    pub best_cost: f64,
    pub evaluations_used: usize,
    /// `(evaluations, best cost so far)` after each generation.
    pub trace: Vec<(usize, f64)>,
}

impl OptimizeResult {
    /// Best point as `[scale, angles…]`.
    pub fn best_params(&self) -> ParamVector {
        ParamVector::from_flat(&self.best)
    }
}

/// Cost over a flat vector; must be callable from several threads.
pub trait Objective: Sync {
    fn eval(&self, x: &[f64]) -> Result<f64>;
}

impl<F: Fn(&[f64]) -> Result<f64> + Sync> Objective for F {
    fn eval(&self, x: &[f64]) -> Result<f64> {
        self(x)
    }
}

/// Evaluate a batch, in parallel when enabled; non-finite costs rank last.
pub(crate) fn eval_batch(f: &dyn Objective, xs: &[Vec<f64>]) -> Result<Vec<f64>> {
    #[cfg(feature = "parallel")]
    let out: Vec<Result<f64>> = {
        use rayon::prelude::*;
        xs.par_iter().map(|x| f.eval(x)).collect()
    };
    #[cfg(not(feature = "parallel"))]
    let out: Vec<Result<f64>> = xs.iter().map(|x| f.eval(x)).collect();
    out.into_iter()
        .map(|r| r.map(|c| if c.is_nan() { f64::INFINITY } else { c }))
        .collect()
}

pub(crate) fn clamp_into(x: &mut [f64], bounds: &[(f64, f64)]) {
    for (v, &(lo, hi)) in x.iter_mut().zip(bounds) {
        *v = v.clamp(lo, hi);
    }
}

/// Run the configured algorithm from `init`.
pub fn minimize(
    f: &dyn Objective,
    config: &OptimizerConfig,
    init: &[f64],
) -> Result<OptimizeResult> {
    match config.algorithm {
        Algorithm::DifferentialEvolution => differential_evolution(f, config, init),
        Algorithm::ParticleSwarm => particle_swarm(f, config, init),
    }
}

/// How the scale parameter is handled after the line search.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "kind", rename_all = "snake_case"))]
pub enum ScaleHandling {
    /// Optimized jointly with the angles inside `±(rel·|λ₀| + abs)`.
    Bounded { rel: f64, abs: f64 },
    /// Eliminated: every evaluation uses the optimal scale for its angles,
    /// read off the quadratic coefficients of the same evaluation.
    Profiled,
}

impl Default for ScaleHandling {
    fn default() -> Self {
        ScaleHandling::Bounded {
            rel: 0.1,
            abs: 1e-3,
        }
    }
}

/// Per-stage optimizer settings; bounds are derived from the warm start.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StageConfig {
    pub algorithm: Algorithm,
    pub budget: usize,
    pub population: usize,
    pub de: DeParams,
    pub seed: u64,
    /// Uniform half-width for every active angle; `None` uses the ansatz
    /// defaults. Inert slots stay fixed either way.
    pub half_width: Option<f64>,
    pub scale: ScaleHandling,
    pub init_spread: Option<f64>,
    pub stop_below: f64,
}

impl StageConfig {
    pub fn new(budget: usize, seed: u64) -> Self {
        StageConfig {
            algorithm: Algorithm::DifferentialEvolution,
            budget,
            population: 15,
            de: DeParams::default(),
            seed,
            half_width: None,
            scale: ScaleHandling::default(),
            init_spread: None,
            stop_below: 0.0,
        }
    }
}

/// Cost as a function of the full parameter vector.
pub type ParamCost<'a> = &'a (dyn Fn(&ParamVector) -> Result<f64> + Sync);

/// Quadratic coefficients `(c₂, c₁, c₀)` in the scale at fixed angles.
pub type ScaleQuadratic<'a> = &'a (dyn Fn(&[f64]) -> Result<(f64, f64, f64)> + Sync);

fn vertex((c2, c1, c0): (f64, f64, f64)) -> (f64, f64) {
    if c2 > 0.0 {
        (-c1 / (2.0 * c2), (c0 - c1 * c1 / (4.0 * c2)).max(0.0))
    } else {
        (0.0, c0)
    }
}

/// Line search on the scale, then the configured optimizer around `prev`.
///
/// `half_widths` bound each angle to `prev ± w`; the line-search evaluations
/// count against `config.budget`. [`ScaleHandling::Profiled`] needs
/// `quadratic`.
pub fn timestep_optimize(
    cost: ParamCost,
    quadratic: Option<ScaleQuadratic>,
    prev: &ParamVector,
    half_widths: &[f64],
    config: &StageConfig,
) -> Result<OptimizeResult> {
    if half_widths.len() != prev.angles.len() {
        bail!(
            Config,
            "{} half-widths for {} angles",
            half_widths.len(),
            prev.angles.len()
        );
    }
    let mut start = prev.clone();
    let ls = line_search_scale(
        |s| {
            let p = ParamVector {
                scale: s,
                angles: start.angles.clone(),
            };
            cost(&p)
        },
        prev.scale,
    )?;
    start.scale = ls.scale;
    let used = ls.evaluations;
    let mut trace = alloc::vec![(used, ls.cost)];
    if ls.cost <= config.stop_below || config.budget < used + config.population {
        return Ok(OptimizeResult {
            best: start.to_flat(),
            best_cost: ls.cost,
            evaluations_used: used,
            trace,
        });
    }
    let angle_bounds = prev
        .angles
        .iter()
        .zip(half_widths)
        .map(|(&a, &w)| (a - w, a + w));
    let mut oc = OptimizerConfig {
        algorithm: config.algorithm,
        budget: config.budget - used,
        bounds: Vec::new(),
        population: config.population,
        seed: config.seed,
        de: config.de,
        stop_below: config.stop_below,
        init_spread: config.init_spread,
    };
    let mut r = match config.scale {
        ScaleHandling::Bounded { rel, abs } => {
            let sw = rel * start.scale.abs() + abs;
            oc.bounds.push((start.scale - sw, start.scale + sw));
            oc.bounds.extend(angle_bounds);
            let flat = |x: &[f64]| cost(&ParamVector::from_flat(x));
            minimize(&flat, &oc, &start.to_flat())?
        }
        ScaleHandling::Profiled => {
            let q = match quadratic {
                Some(q) => q,
                None => bail!(
                    Config,
                    "profiled scale handling needs the quadratic coefficients"
                ),
            };
            oc.bounds.extend(angle_bounds);
            let f = |x: &[f64]| q(x).map(|c| vertex(c).1);
            let mut r = minimize(&f, &oc, &start.angles)?;
            let scale = vertex(q(&r.best)?).0;
            r.best.insert(0, scale);
            r
        }
    };
    if ls.cost < r.best_cost {
        r.best = start.to_flat();
        r.best_cost = ls.cost;
    }
    for t in &mut r.trace {
        t.0 += used;
        t.1 = t.1.min(ls.cost);
    }
    trace.extend(r.trace);
    Ok(OptimizeResult {
        best: r.best,
        best_cost: r.best_cost,
        evaluations_used: r.evaluations_used + used,
        trace,
    })
}
