//! Time evolution: train the intermediate states, then the solution state,
//! one timestep at a time, and compare with a classical reference.

mod reflect;

pub use reflect::{physical_part, reflect_2d, reflect_for_dirichlet};

use alloc::vec::Vec;

use crate::ansatz::{AnsatzKind, AnsatzSpec};
use crate::classical::{
    basket_put_payoff, physical_grid, physical_grid_2d, put_payoff, relative_error,
    solve_bse1d_classical, solve_bse2d_classical, solve_explicit_classical, BoundaryMode,
    ExplicitProblem,
};
use crate::costfn::{Bse1dProblem, Bse2dProblem, BuckmasterProblem, CostModel, KpzProblem, Mode};
use crate::error::{bail, Result};
use crate::math::{exp, sin};
use crate::optimize::{timestep_optimize, StageConfig};
use crate::state::{complexify, normalize, re, Grid, ParamVector, ScaledState};

/// Time discretization of a problem.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Scheme {
    BackwardEulerSemiImplicit,
    ForwardEuler,
}

/// One of the supported PDE instances, including its grid and timestep.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(tag = "pde", rename_all = "snake_case"))]
pub enum PdeProblem {
    /// Put option; `t` is the start time (the maturity for backward runs).
    Bse1d(Bse1dProblem),
    /// Basket put evolved backward from the maturity.
    Bse2d(Bse2dProblem),
    /// Starts from `(2 − sin x)/3`.
    Buckmaster(BuckmasterProblem),
    /// Starts from `e^{−x²}`.
    Kpz(KpzProblem),
}

impl PdeProblem {
    pub fn grid(&self) -> Grid {
        match self {
            PdeProblem::Bse1d(p) => p.grid.into(),
            PdeProblem::Bse2d(p) => p.grid.into(),
            PdeProblem::Buckmaster(p) => p.grid.into(),
            PdeProblem::Kpz(p) => p.grid.into(),
        }
    }

    pub fn tau(&self) -> f64 {
        match self {
            PdeProblem::Bse1d(p) => p.tau,
            PdeProblem::Bse2d(p) => p.tau,
            PdeProblem::Buckmaster(p) => p.tau,
            PdeProblem::Kpz(p) => p.tau,
        }
    }

    pub fn with_tau(mut self, tau: f64) -> Self {
        match &mut self {
            PdeProblem::Bse1d(p) => p.tau = tau,
            PdeProblem::Bse2d(p) => p.tau = tau,
            PdeProblem::Buckmaster(p) => p.tau = tau,
            PdeProblem::Kpz(p) => p.tau = tau,
        }
        self
    }

    pub fn scheme(&self) -> Scheme {
        match self {
            PdeProblem::Bse1d(_) | PdeProblem::Bse2d(_) => Scheme::BackwardEulerSemiImplicit,
            PdeProblem::Buckmaster(_) | PdeProblem::Kpz(_) => Scheme::ForwardEuler,
        }
    }

    pub fn start_time(&self) -> f64 {
        match self {
            PdeProblem::Bse1d(p) => p.t,
            PdeProblem::Bse2d(p) => p.maturity,
            _ => 0.0,
        }
    }

    /// Whether a step trains an intermediate state first.
    pub fn needs_chi(&self) -> bool {
        match self {
            PdeProblem::Bse1d(p) => p.nonlinearity != 0.0,
            PdeProblem::Kpz(p) => p.beta != 0.0,
            _ => false,
        }
    }

    /// Exact initial condition on the physical (unreflected) domain.
    pub fn initial_physical(&self) -> Vec<f64> {
        match self {
            PdeProblem::Bse1d(p) => put_payoff(&physical_grid(&p.grid), p.strike),
            PdeProblem::Bse2d(p) => {
                basket_put_payoff(&physical_grid_2d(&p.grid), p.strike, p.w_x, p.w_y)
            }
            PdeProblem::Buckmaster(p) => p
                .grid
                .xs()
                .into_iter()
                .map(|x| (2.0 - sin(x)) / 3.0)
                .collect(),
            PdeProblem::Kpz(p) => p.grid.xs().into_iter().map(|x| exp(-x * x)).collect(),
        }
    }

    /// Exact initial condition on the full (reflected where flagged) grid.
    pub fn initial_samples(&self) -> Result<Vec<f64>> {
        let phys = self.initial_physical();
        match self {
            PdeProblem::Bse1d(p) if p.grid.reflected => reflect_for_dirichlet(&phys, &p.grid),
            PdeProblem::Bse2d(p) => reflect_2d(&phys, &p.grid),
            _ => Ok(phys),
        }
    }

    /// Copy with time-dependent coefficients taken at `t`.
    pub fn at_time(&self, t: f64) -> PdeProblem {
        let mut p = *self;
        if let PdeProblem::Bse1d(b) = &mut p {
            b.t = t;
        }
        p
    }

    /// Intermediate-state cost at the current state, if the problem has one.
    pub fn chi_model(&self, prev: &ScaledState, ansatz: AnsatzSpec) -> Result<Option<CostModel>> {
        if !self.needs_chi() {
            return Ok(None);
        }
        Ok(Some(match self {
            PdeProblem::Bse1d(p) => p.chi_cost(prev, ansatz)?,
            PdeProblem::Kpz(p) => p.chi_cost(prev, ansatz)?,
            _ => unreachable!(),
        }))
    }

    /// Solution-stage cost with `χ` frozen.
    pub fn u_model(
        &self,
        prev: &ScaledState,
        chi: Option<&ScaledState>,
        ansatz: AnsatzSpec,
    ) -> Result<CostModel> {
        match self {
            PdeProblem::Bse1d(p) => p.v_cost(prev, chi, ansatz),
            PdeProblem::Bse2d(p) => p.v_cost(prev, ansatz),
            PdeProblem::Buckmaster(p) => p.cost(prev, ansatz),
            PdeProblem::Kpz(p) => p.f_cost(prev, chi, ansatz),
        }
    }
}

/// How each stage's cost is minimized.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum StageSolver {
    /// Gradient-free optimization over ansatz parameters.
    #[default]
    Variational,
    /// Exact minimizer over all vectors (no ansatz); small grids only.
    Dense,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EvolutionPlan {
    pub problem: PdeProblem,
    pub steps: usize,
    pub u_ansatz: AnsatzKind,
    pub chi_ansatz: Option<AnsatzKind>,
    pub u_stage: StageConfig,
    pub chi_stage: StageConfig,
    pub solver: StageSolver,
    pub cost_mode: Mode,
    /// Reference used for error reporting.
    pub reference: BoundaryMode,
}

impl EvolutionPlan {
    pub fn scheme(&self) -> Scheme {
        self.problem.scheme()
    }

    /// `steps·|τ|`.
    pub fn horizon(&self) -> f64 {
        self.steps as f64 * self.problem.tau().abs()
    }

    pub fn validate(&self) -> Result<()> {
        if !self.problem.tau().is_finite() {
            bail!(Config, "timestep must be finite");
        }
        if self.scheme() == Scheme::BackwardEulerSemiImplicit && self.problem.tau() > 0.0 {
            bail!(
                Config,
                "Black–Scholes runs step backward from the maturity (τ ≤ 0)"
            );
        }
        if self.solver == StageSolver::Variational
            && self.problem.needs_chi()
            && self.chi_ansatz.is_none()
        {
            bail!(Config, "problem needs an intermediate-state ansatz");
        }
        Ok(())
    }
}

/// Evolving state between steps.
#[derive(Debug, Clone, PartialEq)]
pub struct EvolveState {
    pub t: f64,
    pub u: ScaledState,
    pub u_params: Option<ParamVector>,
    pub chi_params: Option<ParamVector>,
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StepRecord {
    pub step: usize,
    /// Time after the step.
    pub t: f64,
    pub u_params: Option<ParamVector>,
    pub chi_params: Option<ParamVector>,
    pub u_cost: f64,
    pub chi_cost: Option<f64>,
    pub u_evaluations: usize,
    pub chi_evaluations: usize,
    pub relative_error: Option<f64>,
    pub wall_time_s: f64,
}

/// Trajectory of a run; value snapshots cover the physical domain and
/// include the initial state at index 0.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct RunRecord {
    pub read_in_error: f64,
    pub steps: Vec<StepRecord>,
    pub final_error: f64,
    pub quantum: Vec<Vec<f64>>,
    pub classical: Vec<Vec<f64>>,
}

struct StageOutcome {
    state: ScaledState,
    params: Option<ParamVector>,
    cost: f64,
    evaluations: usize,
}

/// Ansatz specs built once for a plan.
#[derive(Debug, Clone)]
pub struct Evolver<'a> {
    pub plan: &'a EvolutionPlan,
    pub u_spec: AnsatzSpec,
    pub chi_spec: Option<AnsatzSpec>,
}

fn stage_seed(seed: u64, step: usize) -> u64 {
    seed.wrapping_add((step as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

impl<'a> Evolver<'a> {
    pub fn new(plan: &'a EvolutionPlan) -> Result<Self> {
        plan.validate()?;
        let grid = plan.problem.grid();
        let u_spec = plan.u_ansatz.build(&grid)?;
        let chi_spec = plan.chi_ansatz.map(|k| k.build(&grid)).transpose()?;
        Ok(Evolver {
            plan,
            u_spec,
            chi_spec,
        })
    }

    /// Read in the initial condition.
    pub fn initial_state(&self) -> Result<EvolveState> {
        let samples = complexify(&self.plan.problem.initial_samples()?);
        let t = self.plan.problem.start_time();
        Ok(match self.plan.solver {
            StageSolver::Dense => EvolveState {
                t,
                u: normalize(&samples),
                u_params: None,
                chi_params: None,
            },
            StageSolver::Variational => {
                let p = self.u_spec.read_in(&samples)?;
                EvolveState {
                    t,
                    u: self.u_spec.amplitudes(&p)?,
                    u_params: Some(p),
                    chi_params: None,
                }
            }
        })
    }

    fn solve_stage(
        &self,
        model: &CostModel,
        warm: Option<&ParamVector>,
        cfg: &StageConfig,
        seed: u64,
    ) -> Result<StageOutcome> {
        if self.plan.solver == StageSolver::Dense {
            let state = normalize(&model.dense_solution()?);
            let cost = model.direct_state(&state)?;
            return Ok(StageOutcome {
                state,
                params: None,
                cost,
                evaluations: 0,
            });
        }
        let spec = &model.ansatz;
        let warm = match warm {
            Some(p) => p.clone(),
            // The first intermediate state is fitted to its target, which is
            // classically known from the read-in initial condition.
            None if matches!(spec, AnsatzSpec::Zgr(_)) => spec.read_in(&model.target)?,
            None => spec.zeros(1.0),
        };
        let mode = self.plan.cost_mode;
        let cost = |p: &ParamVector| model.evaluate(p, mode);
        let quad = |a: &[f64]| model.quadratic(a);
        let widths = spec.half_widths_with(cfg.half_width);
        let mut c = cfg.clone();
        c.seed = seed;
        let r = timestep_optimize(&cost, Some(&quad), &warm, &widths, &c)?;
        let params = r.best_params();
        Ok(StageOutcome {
            state: spec.amplitudes(&params)?,
            params: Some(params),
            cost: r.best_cost,
            evaluations: r.evaluations_used,
        })
    }

    /// Advance one step; `index` is the zero-based step number.
    pub fn step(&self, state: &EvolveState, index: usize) -> Result<(EvolveState, StepRecord)> {
        self.step_inner(state, index).map_err(|e| e.at_step(index))
    }

    fn step_inner(&self, state: &EvolveState, index: usize) -> Result<(EvolveState, StepRecord)> {
        let plan = self.plan;
        let problem = plan.problem.at_time(state.t);
        let mut chi_out = None;
        if let Some(chi_spec) = self
            .chi_spec
            .clone()
            .or_else(|| (plan.solver == StageSolver::Dense).then(|| self.u_spec.clone()))
        {
            if let Some(model) = problem.chi_model(&state.u, chi_spec)? {
                chi_out = Some(self.solve_stage(
                    &model,
                    state.chi_params.as_ref(),
                    &plan.chi_stage,
                    stage_seed(plan.chi_stage.seed, index),
                )?);
            }
        }
        let model = problem.u_model(
            &state.u,
            chi_out.as_ref().map(|c| &c.state),
            self.u_spec.clone(),
        )?;
        let u = self.solve_stage(
            &model,
            state.u_params.as_ref(),
            &plan.u_stage,
            stage_seed(plan.u_stage.seed, index),
        )?;
        let t = plan.problem.start_time() + (index + 1) as f64 * plan.problem.tau();
        let record = StepRecord {
            step: index + 1,
            t,
            u_params: u.params.clone(),
            chi_params: chi_out.as_ref().and_then(|c| c.params.clone()),
            u_cost: u.cost,
            chi_cost: chi_out.as_ref().map(|c| c.cost),
            u_evaluations: u.evaluations,
            chi_evaluations: chi_out.as_ref().map_or(0, |c| c.evaluations),
            relative_error: None,
            wall_time_s: 0.0,
        };
        let next = EvolveState {
            t,
            u: u.state,
            u_params: u.params,
            chi_params: chi_out
                .and_then(|c| c.params)
                .or_else(|| state.chi_params.clone()),
        };
        Ok((next, record))
    }

    /// Classical reference trajectory on the physical domain.
    pub fn reference(&self, initial: &EvolveState) -> Result<Vec<Vec<f64>>> {
        let plan = self.plan;
        let grid = plan.problem.grid();
        let read_in = re(&initial.u.vector());
        let full = |v: Vec<Vec<f64>>| -> Vec<Vec<f64>> {
            v.into_iter().map(|x| physical_part(&x, &grid)).collect()
        };
        Ok(match (&plan.problem, plan.reference) {
            (PdeProblem::Bse1d(p), BoundaryMode::DirichletExact) => {
                solve_bse1d_classical(p, BoundaryMode::DirichletExact, plan.steps, None)?.values
            }
            (PdeProblem::Bse1d(p), m) => {
                full(solve_bse1d_classical(p, m, plan.steps, Some(&read_in))?.values)
            }
            (PdeProblem::Bse2d(p), BoundaryMode::DirichletExact) => {
                solve_bse2d_classical(p, BoundaryMode::DirichletExact, plan.steps, None)?.values
            }
            (PdeProblem::Bse2d(p), m) => {
                full(solve_bse2d_classical(p, m, plan.steps, Some(&read_in))?.values)
            }
            (PdeProblem::Buckmaster(p), _) => {
                solve_explicit_classical(
                    &ExplicitProblem::Buckmaster(*p),
                    &plan.problem.initial_samples()?,
                    plan.steps,
                )?
                .values
            }
            (PdeProblem::Kpz(p), _) => {
                solve_explicit_classical(
                    &ExplicitProblem::Kpz(*p),
                    &plan.problem.initial_samples()?,
                    plan.steps,
                )?
                .values
            }
        })
    }

    /// Physical-domain real values of a state.
    pub fn read_out(&self, state: &EvolveState) -> Vec<f64> {
        physical_part(&re(&state.u.vector()), &self.plan.problem.grid())
    }

    /// Run every step; `clock` returns seconds and is used for wall times.
    pub fn run_with_clock(&self, clock: &dyn Fn() -> f64) -> Result<RunRecord> {
        let mut state = self.initial_state()?;
        let reference = self.reference(&state)?;
        let exact = self.plan.problem.initial_physical();
        let first = self.read_out(&state);
        let read_in_error = relative_error(&first, &exact, None)?;
        let mut quantum = alloc::vec![first];
        let mut final_error = relative_error(&quantum[0], &reference[0], None)?;
        let mut steps = Vec::with_capacity(self.plan.steps);
        for j in 0..self.plan.steps {
            let t0 = clock();
            let (next, mut rec) = self.step(&state, j)?;
            rec.wall_time_s = clock() - t0;
            let values = self.read_out(&next);
            final_error =
                relative_error(&values, &reference[j + 1], None).map_err(|e| e.at_step(j))?;
            rec.relative_error = Some(final_error);
            log::info!(
                "step {} t={:.4} cost={:.3e} error={:.4e}",
                rec.step,
                rec.t,
                rec.u_cost,
                final_error
            );
            quantum.push(values);
            steps.push(rec);
            state = next;
        }
        Ok(RunRecord {
            read_in_error,
            steps,
            final_error,
            quantum,
            classical: reference,
        })
    }
}

/// One step of `plan` from `state` (step index `index`).
pub fn step(
    plan: &EvolutionPlan,
    state: &EvolveState,
    index: usize,
) -> Result<(EvolveState, StepRecord)> {
    Evolver::new(plan)?.step(state, index)
}

/// Full run with wall-clock timing.
#[cfg(feature = "std")]
pub fn run(plan: &EvolutionPlan) -> Result<RunRecord> {
    let start = std::time::Instant::now();
    Evolver::new(plan)?.run_with_clock(&|| start.elapsed().as_secs_f64())
}

/// Full run without timing information.
#[cfg(not(feature = "std"))]
pub fn run(plan: &EvolutionPlan) -> Result<RunRecord> {
    Evolver::new(plan)?.run_with_clock(&|| 0.0)
}
