use std::time::Instant;

use qvpde_core::circuits::{Circuit, Prep};
use qvpde_core::evolve::{physical_part, Evolver, StepRecord};
use qvpde_core::Grid;
use serde::{Deserialize, Serialize};

use super::{prepare, Versions, VERSIONS};
use crate::config::ExperimentConfig;
use crate::error::Result;
use crate::output::{write_csv, write_json, write_text};

#[derive(Debug, Clone, Copy, Default)]
pub struct SolveOptions {
    /// Also write the final state's preparation circuit.
    pub netlist: bool,
}

#[derive(Debug, Serialize)]
struct SolutionRow {
    step: usize,
    t: f64,
    gridpoint: usize,
    x: f64,
    y: Option<f64>,
    quantum: f64,
    classical: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub experiment: String,
    pub steps: usize,
    pub read_in_error: f64,
    pub final_error: f64,
    pub wall_time_s: f64,
}

#[derive(Debug, Serialize)]
struct Manifest<'a> {
    versions: Versions,
    threads: usize,
    config: &'a ExperimentConfig,
    summary: &'a SolveSummary,
    steps: &'a [StepRecord],
}

/// Physical-domain coordinates in read-out order.
fn coordinates(grid: &Grid) -> Vec<(f64, Option<f64>)> {
    let all: Vec<(f64, Option<f64>)> = match grid {
        Grid::One(g) => g.xs().into_iter().map(|x| (x, None)).collect(),
        Grid::Two(g) => (0..g.points())
            .map(|k| {
                let (kx, ky) = g.unflatten(k);
                (g.x.x(kx), Some(g.y.x(ky)))
            })
            .collect(),
    };
    physical_part(&all, grid)
}

pub fn solve(cfg: &ExperimentConfig, opts: SolveOptions) -> Result<SolveSummary> {
    prepare(cfg)?;
    let plan = &cfg.plan;
    let start = Instant::now();
    let evolver = Evolver::new(plan)?;
    let record = evolver.run_with_clock(&|| start.elapsed().as_secs_f64())?;
    let summary = SolveSummary {
        experiment: cfg.experiment.clone(),
        steps: record.steps.len(),
        read_in_error: record.read_in_error,
        final_error: record.final_error,
        wall_time_s: start.elapsed().as_secs_f64(),
    };
    let coords = coordinates(&plan.problem.grid());
    let t0 = plan.problem.start_time();
    let mut rows = Vec::with_capacity(coords.len() * record.quantum.len());
    for (j, (q, c)) in record.quantum.iter().zip(&record.classical).enumerate() {
        let t = if j == 0 { t0 } else { record.steps[j - 1].t };
        for (k, ((x, y), (qv, cv))) in coords.iter().zip(q.iter().zip(c)).enumerate() {
            rows.push(SolutionRow {
                step: j,
                t,
                gridpoint: k,
                x: *x,
                y: *y,
                quantum: *qv,
                classical: *cv,
            });
        }
    }
    let dir = &cfg.output_dir;
    write_csv(&dir.join("solution.csv"), &rows)?;
    let manifest = Manifest {
        versions: VERSIONS,
        threads: rayon::current_num_threads(),
        config: cfg,
        summary: &summary,
        steps: &record.steps,
    };
    write_json(&dir.join("manifest.json"), &manifest)?;
    write_json(&dir.join("summary.json"), &summary)?;
    if opts.netlist {
        let params = match record.steps.last().and_then(|s| s.u_params.clone()) {
            Some(p) => Some(p),
            None => evolver.initial_state()?.u_params,
        };
        if let Some(p) = params {
            let prep = Prep::from_ansatz(&evolver.u_spec, &p)?;
            let mut c = Circuit::new(prep.qubits());
            let reg: Vec<usize> = (0..prep.qubits()).collect();
            prep.append(&mut c, &reg, &[])?;
            write_text(&dir.join("final_state.netlist"), &c.netlist())?;
        } else {
            log::warn!("dense runs have no circuit to export");
        }
    }
    Ok(summary)
}
