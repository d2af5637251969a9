//! Two-asset linear Black–Scholes, fully implicit Backward Euler on the
//! flattened grid.

use alloc::vec;
use alloc::vec::Vec;

use super::{compose, scale, sym_d1, sym_d2, CostModel, Slot, SlotStates, SymWord, TargetTerm};
use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::operators::Dims;
use crate::state::{Axis, Grid2D, ScaledState};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Bse2dProblem {
    pub rate: f64,
    pub sigma_x: f64,
    pub sigma_y: f64,
    pub rho: f64,
    pub w_x: f64,
    pub w_y: f64,
    pub strike: f64,
    pub maturity: f64,
    pub tau: f64,
    pub grid: Grid2D,
}

impl Bse2dProblem {
    pub fn alpha(&self) -> f64 {
        1.0 - self.rate * self.tau
    }

    pub fn beta_x(&self) -> f64 {
        (0.5 * self.sigma_x * self.sigma_x - self.rate) * self.tau
    }

    pub fn beta_y(&self) -> f64 {
        (0.5 * self.sigma_y * self.sigma_y - self.rate) * self.tau
    }

    pub fn gamma_x(&self) -> f64 {
        0.5 * self.sigma_x * self.sigma_x * self.tau
    }

    pub fn gamma_y(&self) -> f64 {
        0.5 * self.sigma_y * self.sigma_y * self.tau
    }

    pub fn gamma_xy(&self) -> f64 {
        0.5 * self.rho * self.sigma_x * self.sigma_y * self.tau
    }

    pub fn dims(&self) -> Dims {
        Dims {
            nx: self.grid.x.n,
            ny: self.grid.y.n,
        }
    }

    /// `α − β_x∂x − β_y∂y + γ_x∂x² + γ_y∂y² + γ_xy∂x∂y`.
    pub fn scheme_op(&self) -> Vec<SymWord> {
        let (gx, gy) = (&self.grid.x, &self.grid.y);
        let dx = sym_d1(Axis::X, gx.n, gx.length);
        let dy = sym_d1(Axis::Y, gy.n, gy.length);
        let mut w = vec![SymWord::scalar(self.alpha())];
        w.extend(scale(&dx, -self.beta_x()));
        w.extend(scale(&dy, -self.beta_y()));
        w.extend(scale(&sym_d2(Axis::X, gx.n, gx.length), self.gamma_x()));
        w.extend(scale(&sym_d2(Axis::Y, gy.n, gy.length), self.gamma_y()));
        if self.gamma_xy() != 0.0 {
            w.extend(scale(&compose(&dx, &dy), self.gamma_xy()));
        }
        w
    }

    pub fn v_cost(&self, prev: &ScaledState, ansatz: AnsatzSpec) -> Result<CostModel> {
        if prev.len() != self.grid.points() {
            bail!(
                Dimension,
                "state of length {} on a grid of {} points",
                prev.len(),
                self.grid.points()
            );
        }
        CostModel::new(
            ansatz,
            self.dims(),
            self.scheme_op(),
            vec![TargetTerm::new(SymWord::scalar(1.0), Slot::Prev)],
            SlotStates::with_prev(prev.clone()),
        )
    }
}

pub fn v_cost_bse2d(
    lambda: &crate::ParamVector,
    prev: &ScaledState,
    problem: &Bse2dProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .v_cost(prev, ansatz.clone())?
        .evaluate(lambda, super::Mode::Expanded)
}
