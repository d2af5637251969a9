use qvpde_core::circuits::{verify_shortcut, AdderVariant};
use qvpde_core::costfn::{CostModel, Mode};
use qvpde_core::evolve::{EvolutionPlan, Evolver};
use qvpde_core::presets;
use qvpde_core::sampling::trial_rng;
use qvpde_core::ParamVector;
use rand::Rng;
use serde::{Deserialize, Serialize};

use super::prepare;
use crate::config::{ExperimentConfig, Suite};
use crate::error::{CliError, Result};
use crate::output::write_json;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteResult {
    pub suite: Suite,
    pub checks: usize,
    pub max_deviation: f64,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub tolerance: f64,
    pub perturbation: f64,
    pub suites: Vec<SuiteResult>,
    pub passed: bool,
}

/// Random parameters: scale in `[0.5, 2]`, angles in `[−π, π]`.
fn random_params(template: &ParamVector, rng: &mut impl Rng) -> ParamVector {
    let pi = std::f64::consts::PI;
    ParamVector {
        scale: rng.random_range(0.5..2.0),
        angles: template
            .angles
            .iter()
            .map(|_| rng.random_range(-pi..pi))
            .collect(),
    }
}

fn perturb(mut model: CostModel, eps: f64) -> CostModel {
    for t in &mut model.expansion.terms {
        t.coeff *= 1.0 + eps;
    }
    model
}

fn mode_gap(model: &CostModel, p: &ParamVector) -> Result<f64> {
    let d = model.evaluate(p, Mode::Direct)?;
    let e = model.evaluate(p, Mode::Expanded)?;
    Ok((d - e).abs() / d.abs().max(1.0))
}

/// Direct against expanded evaluation for the first-step models of every
/// preset, at random parameters.
fn modes_suite(seed: u64, eps: f64) -> Result<(usize, f64)> {
    const DRAWS: u64 = 4;
    let (mut checks, mut worst) = (0, 0.0f64);
    for (i, name) in presets::NAMES.iter().enumerate() {
        let plan = presets::by_name(name)?;
        let evolver = Evolver::new(&plan)?;
        let s0 = evolver.initial_state()?;
        let problem = plan.problem.at_time(s0.t);
        for d in 0..DRAWS {
            let mut rng = trial_rng(seed, (i as u64) * DRAWS + d);
            let mut chi_state = None;
            if let Some(spec) = &evolver.chi_spec {
                if let Some(m) = problem.chi_model(&s0.u, spec.clone())? {
                    let p = random_params(&spec.zeros(1.0), &mut rng);
                    worst = worst.max(mode_gap(&perturb(m, eps), &p)?);
                    checks += 1;
                    chi_state = Some(spec.amplitudes(&random_params(&spec.zeros(1.0), &mut rng))?);
                }
            }
            let m = problem.u_model(&s0.u, chi_state.as_ref(), evolver.u_spec.clone())?;
            let p = random_params(&evolver.u_spec.zeros(1.0), &mut rng);
            worst = worst.max(mode_gap(&perturb(m, eps), &p)?);
            checks += 1;
        }
    }
    Ok((checks, worst))
}

/// Small plans whose Hadamard tests fit in a statevector.
fn shortcut_cases(seed: u64) -> Result<Vec<(EvolutionPlan, usize)>> {
    let mut kpz = presets::resized(presets::kpz(), 4)?;
    let mut buck = presets::resized(presets::buckmaster(), 4)?;
    for p in [&mut kpz, &mut buck] {
        p.u_stage.seed = seed;
        p.chi_stage.seed = seed.wrapping_add(1);
    }
    Ok(vec![(kpz, 2), (buck, 1)])
}

fn shortcut_suite(seed: u64) -> Result<(usize, f64)> {
    let (mut checks, mut worst) = (0, 0.0f64);
    for (plan, steps) in shortcut_cases(seed)? {
        for variant in [AdderVariant::QftPhase, AdderVariant::ToffoliAncilla] {
            let r = verify_shortcut(&plan, steps, variant)?;
            checks += r.expectations;
            worst = worst.max(r.max_deviation);
        }
    }
    Ok((checks, worst))
}

/// Runs the selected suites; fails with exit code 4 when any deviation
/// exceeds the tolerance. The report is written either way.
pub fn verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    prepare(cfg)?;
    let vc = &cfg.verify;
    let mut suites = Vec::new();
    for &s in &vc.suites {
        let (checks, max_deviation) = match s {
            Suite::Shortcut => shortcut_suite(vc.seed)?,
            Suite::Modes => modes_suite(vc.seed, vc.perturbation)?,
        };
        log::info!("{s:?}: {checks} checks, max deviation {max_deviation:.3e}");
        suites.push(SuiteResult {
            suite: s,
            checks,
            max_deviation,
            passed: max_deviation <= vc.tolerance,
        });
    }
    let passed = suites.iter().all(|s| s.passed);
    let report = VerifyReport {
        tolerance: vc.tolerance,
        perturbation: vc.perturbation,
        suites,
        passed,
    };
    write_json(&cfg.output_dir.join("verify.json"), &report)?;
    if !passed {
        let failed: Vec<String> = report
            .suites
            .iter()
            .filter(|s| !s.passed)
            .map(|s| format!("{:?} deviation {:.3e}", s.suite, s.max_deviation))
            .collect();
        return Err(CliError::Verification(failed.join(", ")));
    }
    Ok(report)
}
