use qvpde_core::ansatz::{AnsatzKind, AnsatzSpec};
use qvpde_core::evolve::{Evolver, PdeProblem};
use qvpde_core::optimize::{timestep_optimize, Algorithm};
use qvpde_core::state::normalize;
use serde::{Deserialize, Serialize};

use super::prepare;
use crate::config::ExperimentConfig;
use crate::error::{CliError, Result};
use crate::output::{write_csv, write_json};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub ansatz: String,
    pub algorithm: String,
    pub budget: usize,
    /// Best cost found within `budget` evaluations.
    pub best_cost: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchRun {
    pub ansatz: String,
    pub algorithm: String,
    pub best_cost: f64,
    pub evaluations: usize,
    /// Cost at the read-in of the dense minimizer, optimal scale; Fourier
    /// ansatz only.
    pub projected_dense: Option<f64>,
    /// `best_cost / projected_dense − 1`.
    pub excess_over_projected: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchSummary {
    /// Minimum of the cost over all vectors.
    pub dense_minimum: f64,
    pub runs: Vec<BenchRun>,
}

/// `1, 2, 5 × 10ᵏ` from 10 up to `max`, then `max` itself.
pub fn budget_axis(max: usize) -> Vec<usize> {
    let mut v = Vec::new();
    let mut decade = 10usize;
    'outer: loop {
        for f in [1, 2, 5] {
            let b = f * decade;
            if b >= max {
                break 'outer;
            }
            v.push(b);
        }
        decade *= 10;
    }
    v.push(max);
    v
}

fn ansatz_name(k: &AnsatzKind) -> String {
    match k {
        AnsatzKind::ZgrReal { m } => format!("zgr_real_m{m}"),
        AnsatzKind::ZgrComplex { m } => format!("zgr_complex_m{m}"),
        AnsatzKind::Zgr2d { mx, my } => format!("zgr_2d_m{mx}x{my}"),
        AnsatzKind::Ula { d } => format!("ula_d{d}"),
    }
}

fn algorithm_name(a: Algorithm) -> &'static str {
    match a {
        Algorithm::DifferentialEvolution => "differential_evolution",
        Algorithm::ParticleSwarm => "particle_swarm",
    }
}

/// Best cost versus budget on the first solution-stage cost of the
/// nonlinear Black–Scholes plan, with `χ` taken exactly.
pub fn optimizer_bench(cfg: &ExperimentConfig) -> Result<(Vec<BenchRow>, BenchSummary)> {
    let plan = &cfg.plan;
    if !matches!(plan.problem, PdeProblem::Bse1d(_)) || !plan.problem.needs_chi() {
        return Err(CliError::Usage(
            "optimizer-bench needs a nonlinear Black–Scholes plan (e.g. --preset bse1d-nonlinear)"
                .into(),
        ));
    }
    let bc = &cfg.optimizer_bench;
    if bc.max_budget < 10 {
        return Err(CliError::Usage(
            "config field `optimizer_bench.max_budget`: must be at least 10".into(),
        ));
    }
    prepare(cfg)?;
    let evolver = Evolver::new(plan)?;
    let s0 = evolver.initial_state()?;
    let problem = plan.problem.at_time(s0.t);
    let grid = problem.grid();
    let chi = match problem.chi_model(&s0.u, evolver.u_spec.clone())? {
        Some(m) => Some(normalize(&m.dense_solution()?)),
        None => None,
    };
    let dense_model = problem.u_model(&s0.u, chi.as_ref(), evolver.u_spec.clone())?;
    let dense = dense_model.dense_solution()?;
    let dense_minimum = dense_model.direct_state(&normalize(&dense))?;
    let axis = budget_axis(bc.max_budget);
    let mut rows = Vec::new();
    let mut runs = Vec::new();
    for kind in &bc.ansaetze {
        let spec = kind.build(&grid)?;
        let model = problem.u_model(&s0.u, chi.as_ref(), spec.clone())?;
        let projected_dense = match &spec {
            AnsatzSpec::Zgr(_) => {
                let (c2, c1, c0) = model.quadratic(&spec.read_in(&dense)?.angles)?;
                Some(if c2 > 0.0 {
                    c0 - c1 * c1 / (4.0 * c2)
                } else {
                    c0
                })
            }
            AnsatzSpec::Ula(_) => None,
        };
        let warm = match &spec {
            AnsatzSpec::Zgr(_) => spec.read_in(&s0.u.vector())?,
            AnsatzSpec::Ula(_) => spec.zeros(1.0),
        };
        for &alg in &bc.algorithms {
            let mut stage = plan.u_stage.clone();
            stage.algorithm = alg;
            stage.budget = bc.max_budget;
            stage.seed = bc.seed;
            if matches!(spec, AnsatzSpec::Ula(_)) {
                stage.half_width = None;
            }
            let mode = plan.cost_mode;
            let cost = |p: &qvpde_core::ParamVector| model.evaluate(p, mode);
            let quad = |a: &[f64]| model.quadratic(a);
            let widths = spec.half_widths_with(stage.half_width);
            let r = timestep_optimize(&cost, Some(&quad), &warm, &widths, &stage)?;
            for &b in &axis {
                if let Some(best) = r
                    .trace
                    .iter()
                    .filter(|(e, _)| *e <= b)
                    .map(|(_, c)| *c)
                    .reduce(f64::min)
                {
                    rows.push(BenchRow {
                        ansatz: ansatz_name(kind),
                        algorithm: algorithm_name(alg).into(),
                        budget: b,
                        best_cost: best,
                    });
                }
            }
            runs.push(BenchRun {
                ansatz: ansatz_name(kind),
                algorithm: algorithm_name(alg).into(),
                best_cost: r.best_cost,
                evaluations: r.evaluations_used,
                projected_dense,
                excess_over_projected: projected_dense.map(|d| r.best_cost / d - 1.0),
            });
        }
    }
    let summary = BenchSummary {
        dense_minimum,
        runs,
    };
    write_csv(&cfg.output_dir.join("optimizer_bench.csv"), &rows)?;
    write_json(&cfg.output_dir.join("optimizer_bench.json"), &summary)?;
    Ok((rows, summary))
}
