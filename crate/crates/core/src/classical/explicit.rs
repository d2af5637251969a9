//! Forward-Euler references for the Buckmaster and KPZ equations.

use alloc::vec;
use alloc::vec::Vec;

use super::Trajectory;
use crate::costfn::buckmaster::BuckmasterProblem;
use crate::costfn::kpz::KpzProblem;
use crate::error::{bail, Result};
use crate::math::powi;
use crate::state::Grid1D;

/// A problem stepped explicitly with periodic wraparound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExplicitProblem {
    Buckmaster(BuckmasterProblem),
    Kpz(KpzProblem),
}

impl ExplicitProblem {
    pub fn grid(&self) -> &Grid1D {
        match self {
            ExplicitProblem::Buckmaster(p) => &p.grid,
            ExplicitProblem::Kpz(p) => &p.grid,
        }
    }

    pub fn tau(&self) -> f64 {
        match self {
            ExplicitProblem::Buckmaster(p) => p.tau,
            ExplicitProblem::Kpz(p) => p.tau,
        }
    }

    /// Largest effective diffusion coefficient at state `f`.
    fn diffusivity(&self, f: &[f64]) -> f64 {
        match self {
            ExplicitProblem::Buckmaster(_) => {
                f.iter().map(|v| 4.0 * powi(v.abs(), 3)).fold(0.0, f64::max)
            }
            ExplicitProblem::Kpz(p) => p.alpha.abs(),
        }
    }

    fn rate(&self, f: &[f64], h: f64) -> Vec<f64> {
        let np = f.len();
        let (a, b) = (0.5 / h, 1.0 / (h * h));
        let d1 = |g: &dyn Fn(usize) -> f64, i: usize| a * (g((i + 1) % np) - g((i + np - 1) % np));
        let d2 = |g: &dyn Fn(usize) -> f64, i: usize| {
            b * (g((i + 1) % np) + g((i + np - 1) % np) - 2.0 * g(i))
        };
        match self {
            ExplicitProblem::Buckmaster(p) => {
                let f4 = |i: usize| powi(f[i], 4);
                let f3 = |i: usize| powi(f[i], 3);
                (0..np).map(|i| d2(&f4, i) + p.alpha * d1(&f3, i)).collect()
            }
            ExplicitProblem::Kpz(p) => {
                let g = |i: usize| f[i];
                (0..np)
                    .map(|i| {
                        let fx = d1(&g, i);
                        p.alpha * d2(&g, i) + p.beta * fx * fx
                    })
                    .collect()
            }
        }
    }
}

/// `steps` Forward-Euler steps from `initial` on the periodic grid.
///
/// Logs a warning when the diffusive stability bound `τD/h² ≤ ½` is violated
/// at the start.
pub fn solve_explicit_classical(
    problem: &ExplicitProblem,
    initial: &[f64],
    steps: usize,
) -> Result<Trajectory> {
    let g = problem.grid();
    if initial.len() != g.points() {
        bail!(
            Dimension,
            "initial condition of length {} on {} points",
            initial.len(),
            g.points()
        );
    }
    let (h, tau) = (g.spacing(), problem.tau());
    let cfl = tau.abs() * problem.diffusivity(initial) / (h * h);
    if cfl > 0.5 {
        log::warn!("explicit step exceeds the diffusive stability bound ({cfl:.3} > 0.5)");
    }
    let mut traj = Trajectory {
        times: vec![0.0],
        values: vec![initial.to_vec()],
    };
    for j in 0..steps {
        let f = traj.values.last().unwrap();
        let next: Vec<f64> = f
            .iter()
            .zip(problem.rate(f, h))
            .map(|(v, r)| v + tau * r)
            .collect();
        if next.iter().any(|v| !v.is_finite()) {
            return Err(
                crate::Error::Numeric("explicit update became non-finite".into()).at_step(j),
            );
        }
        traj.times.push((j + 1) as f64 * tau);
        traj.values.push(next);
    }
    Ok(traj)
}
