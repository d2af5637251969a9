//! Named experiment configurations.

use crate::ansatz::AnsatzKind;
use crate::classical::BoundaryMode;
use crate::costfn::{Bse1dProblem, Bse2dProblem, BuckmasterProblem, KpzProblem, Mode};
use crate::error::{bail, Result};
use crate::evolve::{EvolutionPlan, PdeProblem, StageSolver};
use crate::math::{ln, PI};
use crate::optimize::{Algorithm, ScaleHandling, StageConfig};
use crate::state::{Grid1D, Grid2D};

pub const NAMES: [&str; 5] = [
    "bse1d-nonlinear",
    "bse1d-linear",
    "bse2d",
    "buckmaster",
    "kpz",
];

/// Angle half-width used for the Fourier ansatz in the presets.
pub const ZGR_HALF_WIDTH: f64 = 1.0;

/// Reflected log-price grid over `[−log 135, log 135]`.
pub fn bse_grid(n: u32) -> Grid1D {
    let l = ln(135.0);
    Grid1D {
        n,
        length: 4.0 * l,
        x0: -l,
        reflected: true,
    }
}

fn stage(budget: usize, seed: u64, half_width: Option<f64>) -> StageConfig {
    let mut s = StageConfig::new(budget, seed);
    s.half_width = half_width;
    s.scale = ScaleHandling::Profiled;
    s
}

pub fn bse1d_problem(nonlinearity: f64) -> Bse1dProblem {
    Bse1dProblem {
        strike: 50.0,
        rate: 0.3,
        sigma0_sq: 0.04,
        nonlinearity,
        maturity: 3.0,
        tau: -0.3,
        grid: bse_grid(8),
        t: 3.0,
    }
}

/// 1D Black–Scholes with the nonlinear volatility term: n = 8, ZGR m = 6 for
/// V, ULA d = 6 for χ, 10 steps of −0.3.
pub fn bse1d_nonlinear() -> EvolutionPlan {
    let mut chi = stage(20_000, 2, None);
    chi.algorithm = Algorithm::ParticleSwarm;
    EvolutionPlan {
        problem: PdeProblem::Bse1d(bse1d_problem(0.1)),
        steps: 10,
        u_ansatz: AnsatzKind::ZgrReal { m: 6 },
        chi_ansatz: Some(AnsatzKind::Ula { d: 6 }),
        u_stage: stage(10_000, 1, Some(ZGR_HALF_WIDTH)),
        chi_stage: chi,
        solver: StageSolver::Variational,
        cost_mode: Mode::Direct,
        reference: BoundaryMode::DirichletExact,
    }
}

/// Same configuration with `a = 0`.
pub fn bse1d_linear() -> EvolutionPlan {
    let mut p = bse1d_nonlinear();
    p.problem = PdeProblem::Bse1d(bse1d_problem(0.0));
    p.chi_ansatz = None;
    p
}

/// Two-asset basket put: nx = ny = 6, mx = my = 3 (512 parameters).
pub fn bse2d() -> EvolutionPlan {
    let g = bse_grid(6);
    let mut u = stage(100_000, 1, Some(0.1));
    u.algorithm = Algorithm::ParticleSwarm;
    EvolutionPlan {
        problem: PdeProblem::Bse2d(Bse2dProblem {
            rate: 0.3,
            sigma_x: 0.2,
            sigma_y: 0.2,
            rho: 0.0,
            w_x: 1.0,
            w_y: 1.0,
            strike: 50.0,
            maturity: 3.0,
            tau: -0.3,
            grid: Grid2D::new(g, g),
        }),
        steps: 10,
        u_ansatz: AnsatzKind::Zgr2d { mx: 3, my: 3 },
        chi_ansatz: None,
        u_stage: u,
        chi_stage: stage(20_000, 2, None),
        solver: StageSolver::Variational,
        cost_mode: Mode::Direct,
        reference: BoundaryMode::DirichletExact,
    }
}

/// Buckmaster on `[−π, π)`, n = 5, real ZGR m = 3, 250 steps of 0.008.
pub fn buckmaster() -> EvolutionPlan {
    EvolutionPlan {
        problem: PdeProblem::Buckmaster(BuckmasterProblem {
            alpha: 1.0,
            tau: 0.008,
            grid: Grid1D {
                n: 5,
                length: 2.0 * PI,
                x0: -PI,
                reflected: false,
            },
        }),
        steps: 250,
        u_ansatz: AnsatzKind::ZgrReal { m: 3 },
        chi_ansatz: None,
        u_stage: stage(10_000, 1, Some(ZGR_HALF_WIDTH)),
        chi_stage: stage(20_000, 2, None),
        solver: StageSolver::Variational,
        cost_mode: Mode::Direct,
        reference: BoundaryMode::PeriodicReflected,
    }
}

/// Deterministic KPZ on `[−2.5, 2.5)`, α = β = 0.5, n = 5, ZGR m = 3,
/// 200 steps of 0.02.
pub fn kpz() -> EvolutionPlan {
    EvolutionPlan {
        problem: PdeProblem::Kpz(KpzProblem {
            alpha: 0.5,
            beta: 0.5,
            tau: 0.02,
            grid: Grid1D {
                n: 5,
                length: 5.0,
                x0: -2.5,
                reflected: false,
            },
        }),
        steps: 200,
        u_ansatz: AnsatzKind::ZgrReal { m: 3 },
        chi_ansatz: Some(AnsatzKind::ZgrReal { m: 3 }),
        u_stage: stage(10_000, 1, Some(ZGR_HALF_WIDTH)),
        chi_stage: stage(20_000, 2, Some(ZGR_HALF_WIDTH)),
        solver: StageSolver::Variational,
        cost_mode: Mode::Direct,
        reference: BoundaryMode::PeriodicReflected,
    }
}

fn shrink(kind: AnsatzKind, n: u32) -> AnsatzKind {
    match kind {
        AnsatzKind::ZgrReal { m } => AnsatzKind::ZgrReal {
            m: m.min(n.saturating_sub(2)),
        },
        AnsatzKind::ZgrComplex { m } => AnsatzKind::ZgrComplex {
            m: m.min(n.saturating_sub(1)),
        },
        AnsatzKind::Zgr2d { mx, my } => AnsatzKind::Zgr2d {
            mx: mx.min(n.saturating_sub(1)),
            my: my.min(n.saturating_sub(1)),
        },
        k => k,
    }
}

/// The same plan with `n` qubits per axis and Fourier registers capped to fit.
pub fn resized(mut plan: EvolutionPlan, n: u32) -> Result<EvolutionPlan> {
    if n < 2 {
        bail!(Config, "grids need at least two qubits per axis");
    }
    match &mut plan.problem {
        PdeProblem::Bse1d(p) => p.grid.n = n,
        PdeProblem::Bse2d(p) => {
            p.grid.x.n = n;
            p.grid.y.n = n;
        }
        PdeProblem::Buckmaster(p) => p.grid.n = n,
        PdeProblem::Kpz(p) => p.grid.n = n,
    }
    plan.u_ansatz = shrink(plan.u_ansatz, n);
    plan.chi_ansatz = plan.chi_ansatz.map(|k| shrink(k, n));
    plan.validate()?;
    Ok(plan)
}

pub fn by_name(name: &str) -> Result<EvolutionPlan> {
    Ok(match name {
        "bse1d-nonlinear" => bse1d_nonlinear(),
        "bse1d-linear" => bse1d_linear(),
        "bse2d" => bse2d(),
        "buckmaster" => buckmaster(),
        "kpz" => kpz(),
        other => bail!(
            Config,
            "unknown preset `{other}` (expected one of {})",
            NAMES.join(", ")
        ),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn every_name_resolves() {
        for n in NAMES {
            by_name(n).unwrap().validate().unwrap();
        }
        assert!(by_name("nope").is_err());
    }

    #[test]
    fn resizing_caps_registers() {
        let p = resized(kpz(), 4).unwrap();
        assert_eq!(p.problem.grid().qubits(), 4);
        assert_eq!(p.u_ansatz, AnsatzKind::ZgrReal { m: 2 });
        assert_eq!(p.chi_ansatz, Some(AnsatzKind::ZgrReal { m: 2 }));
        assert_eq!(resized(bse2d(), 3).unwrap().problem.grid().qubits(), 6);
        assert!(resized(kpz(), 1).is_err());
    }

    #[test]
    fn horizons() {
        assert!((bse1d_nonlinear().horizon() - 3.0).abs() < 1e-12);
        assert!((buckmaster().horizon() - 2.0).abs() < 1e-12);
        assert!((kpz().horizon() - 4.0).abs() < 1e-12);
    }
}
