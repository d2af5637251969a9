//! Classical finite-difference reference solvers and error metrics.

mod bse;
mod explicit;

pub use bse::{solve_bse1d_classical, solve_bse2d_classical};
pub use explicit::{solve_explicit_classical, ExplicitProblem};

use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::{exp, ln, norm_cdf, sqrt};
use crate::state::{Grid1D, Grid2D};

/// Boundary treatment of the Black–Scholes reference solvers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum BoundaryMode {
    /// Physical half-domain with pinned put asymptotes at both ends.
    #[default]
    DirichletExact,
    /// Full reflected grid with periodic wraparound, as seen by the ansatz.
    PeriodicReflected,
}

/// Solution snapshots; `values[0]` is the initial condition.
#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub values: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn last(&self) -> &[f64] {
        self.values.last().map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn steps(&self) -> usize {
        self.values.len().saturating_sub(1)
    }
}

/// Grid of the unreflected half-domain (the grid itself when not reflected).
pub fn physical_grid(g: &Grid1D) -> Grid1D {
    if g.reflected {
        Grid1D {
            n: g.n - 1,
            length: g.length / 2.0,
            x0: g.x0,
            reflected: false,
        }
    } else {
        *g
    }
}

/// Physical quadrant of a 2D grid.
pub fn physical_grid_2d(g: &Grid2D) -> Grid2D {
    Grid2D::new(physical_grid(&g.x), physical_grid(&g.y))
}

/// `max(K − eˣ, 0)` on every gridpoint.
pub fn put_payoff(grid: &Grid1D, strike: f64) -> Vec<f64> {
    grid.xs()
        .into_iter()
        .map(|x| (strike - exp(x)).max(0.0))
        .collect()
}

/// `max(K − w_x eˣ − w_y eʸ, 0)` on the flattened grid.
pub fn basket_put_payoff(grid: &Grid2D, strike: f64, w_x: f64, w_y: f64) -> Vec<f64> {
    let mut out = Vec::with_capacity(grid.points());
    for kx in 0..grid.x.points() {
        for ky in 0..grid.y.points() {
            out.push((strike - w_x * exp(grid.x.x(kx)) - w_y * exp(grid.y.x(ky))).max(0.0));
        }
    }
    out
}

/// Black–Scholes European put with time `tau` to expiry.
pub fn bs_put(s: f64, strike: f64, rate: f64, sigma: f64, tau: f64) -> f64 {
    if tau <= 0.0 {
        return (strike - s).max(0.0);
    }
    let sq = sigma * sqrt(tau);
    let d1 = (ln(s / strike) + (rate + 0.5 * sigma * sigma) * tau) / sq;
    let d2 = d1 - sq;
    strike * exp(-rate * tau) * norm_cdf(-d2) - s * norm_cdf(-d1)
}

/// `‖q − c‖ / ‖c‖` over the entries selected by `mask` (all when `None`).
pub fn relative_error(quantum: &[f64], classical: &[f64], mask: Option<&[bool]>) -> Result<f64> {
    if quantum.len() != classical.len() {
        bail!(
            Dimension,
            "comparing {} values with {}",
            quantum.len(),
            classical.len()
        );
    }
    if let Some(m) = mask {
        if m.len() != quantum.len() {
            bail!(
                Dimension,
                "mask of length {} for {} values",
                m.len(),
                quantum.len()
            );
        }
    }
    let (mut num, mut den) = (0.0, 0.0);
    for (k, (q, c)) in quantum.iter().zip(classical).enumerate() {
        if mask.map_or(true, |m| m[k]) {
            num += (q - c) * (q - c);
            den += c * c;
        }
    }
    if den == 0.0 {
        bail!(Numeric, "reference solution has zero norm");
    }
    Ok(sqrt(num / den))
}
