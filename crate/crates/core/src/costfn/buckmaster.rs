//! Buckmaster equation `u_t = (u³)_xx + α(u²)_x`, Forward Euler.
//!
//! `Ô|f̃⟩ = ∂² D³_f̃ |f̃⟩ + α ∂ D²_f̃ |f̃⟩`; the step target is `|f̃⟩ + τÔ|f̃⟩`.

use alloc::vec;
use alloc::vec::Vec;

use super::{
    compose, scale, sym_d1, sym_d2, CostModel, Slot, SlotStates, SymFactor, SymWord, TargetTerm,
};
use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::operators::Dims;
use crate::state::{Axis, Grid1D, ScaledState};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct BuckmasterProblem {
    pub alpha: f64,
    pub tau: f64,
    pub grid: Grid1D,
}

impl BuckmasterProblem {
    /// `𝟙 + τÔ` acting on `f̃`, as words over `Prev`.
    pub fn rhs(&self) -> Vec<SymWord> {
        let g = &self.grid;
        let d3 = [SymWord::new(1.0, vec![SymFactor::diag(Slot::Prev, 3)])];
        let d2 = [SymWord::new(1.0, vec![SymFactor::diag(Slot::Prev, 2)])];
        let mut w = vec![SymWord::scalar(1.0)];
        w.extend(scale(
            &compose(&sym_d2(Axis::X, g.n, g.length), &d3),
            self.tau,
        ));
        w.extend(scale(
            &compose(&sym_d1(Axis::X, g.n, g.length), &d2),
            self.tau * self.alpha,
        ));
        w
    }

    pub fn cost(&self, prev: &ScaledState, ansatz: AnsatzSpec) -> Result<CostModel> {
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
            Dims::one(self.grid.n),
            vec![SymWord::scalar(1.0)],
            TargetTerm::on(self.rhs(), Slot::Prev),
            SlotStates::with_prev(prev.clone()),
        )
    }
}

pub fn cost_buckmaster(
    lambda: &crate::ParamVector,
    prev: &ScaledState,
    problem: &BuckmasterProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .cost(prev, ansatz.clone())?
        .evaluate(lambda, super::Mode::Expanded)
}
