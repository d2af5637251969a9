//! Deterministic KPZ equation `f_t = α f_xx + β (f_x)²`, Forward Euler with
//! an intermediate `χ = ∂f̃`.

use alloc::vec;
use alloc::vec::Vec;

use super::{scale, sym_d1, sym_d2, CostModel, Slot, SlotStates, SymFactor, SymWord, TargetTerm};
use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::operators::Dims;
use crate::state::{Axis, Grid1D, ScaledState};

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct KpzProblem {
    pub alpha: f64,
    pub beta: f64,
    pub tau: f64,
    pub grid: Grid1D,
}

impl KpzProblem {
    fn check(&self, s: &ScaledState) -> Result<()> {
        if s.len() != self.grid.points() {
            bail!(
                Dimension,
                "state of length {} on a grid of {} points",
                s.len(),
                self.grid.points()
            );
        }
        Ok(())
    }

    /// `‖|χ⟩ − ∂|f̃⟩‖²`.
    pub fn chi_cost(&self, prev: &ScaledState, ansatz: AnsatzSpec) -> Result<CostModel> {
        self.check(prev)?;
        CostModel::new(
            ansatz,
            Dims::one(self.grid.n),
            vec![SymWord::scalar(1.0)],
            TargetTerm::on(sym_d1(Axis::X, self.grid.n, self.grid.length), Slot::Prev),
            SlotStates::with_prev(prev.clone()),
        )
    }

    /// `‖|f⟩ − (𝟙 + τα∂²)|f̃⟩ − τβ D_χ|χ⟩‖²`.
    pub fn f_cost(
        &self,
        prev: &ScaledState,
        chi: Option<&ScaledState>,
        ansatz: AnsatzSpec,
    ) -> Result<CostModel> {
        self.check(prev)?;
        let g = &self.grid;
        let mut rhs: Vec<SymWord> = vec![SymWord::scalar(1.0)];
        rhs.extend(scale(
            &sym_d2(Axis::X, g.n, g.length),
            self.tau * self.alpha,
        ));
        let mut target = TargetTerm::on(rhs, Slot::Prev);
        let mut states = SlotStates::with_prev(prev.clone());
        if self.beta != 0.0 {
            let chi =
                chi.ok_or_else(|| crate::Error::State("KPZ step needs a trained χ".into()))?;
            self.check(chi)?;
            states.set_chi(0, chi.clone());
            target.push(TargetTerm::new(
                SymWord::new(self.tau * self.beta, vec![SymFactor::diag(Slot::Chi(0), 1)]),
                Slot::Chi(0),
            ));
        }
        CostModel::new(
            ansatz,
            Dims::one(g.n),
            vec![SymWord::scalar(1.0)],
            target,
            states,
        )
    }
}

pub fn chi_cost_kpz(
    theta: &crate::ParamVector,
    prev: &ScaledState,
    problem: &KpzProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .chi_cost(prev, ansatz.clone())?
        .evaluate(theta, super::Mode::Expanded)
}

pub fn f_cost_kpz(
    lambda: &crate::ParamVector,
    prev: &ScaledState,
    chi: &ScaledState,
    problem: &KpzProblem,
    ansatz: &AnsatzSpec,
) -> Result<f64> {
    problem
        .f_cost(prev, Some(chi), ansatz.clone())?
        .evaluate(lambda, super::Mode::Expanded)
}
