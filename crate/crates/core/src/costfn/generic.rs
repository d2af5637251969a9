//! Intermediate-state costs for arbitrary right-hand sides.

use alloc::vec;
use alloc::vec::Vec;

use super::{CostModel, Mode, Slot, SlotStates, SymFactor, SymWord, TargetTerm};
use crate::ansatz::AnsatzSpec;
use crate::error::Result;
use crate::operators::Dims;
use crate::state::ParamVector;

/// `‖|χ⟩ − Σ_j V_j|s_j⟩‖²` where every `s_j` is already trained.
pub fn chi_model(
    ansatz: AnsatzSpec,
    dims: Dims,
    rhs: Vec<TargetTerm>,
    states: SlotStates,
) -> Result<CostModel> {
    CostModel::new(ansatz, dims, vec![SymWord::scalar(1.0)], rhs, states)
}

pub fn generic_chi_cost(
    theta: &ParamVector,
    ansatz: AnsatzSpec,
    dims: Dims,
    rhs: Vec<TargetTerm>,
    states: SlotStates,
) -> Result<f64> {
    chi_model(ansatz, dims, rhs, states)?.evaluate(theta, Mode::Direct)
}

/// Truncated Taylor series `sin χ ≈ χ − χ³/6 + χ⁵/120` as words on `χ_k`.
pub fn sin_taylor_rhs(k: u8) -> Vec<TargetTerm> {
    let chi = Slot::Chi(k);
    TargetTerm::on(
        vec![
            SymWord::scalar(1.0),
            SymWord::new(-1.0 / 6.0, vec![SymFactor::diag(chi, 2)]),
            SymWord::new(1.0 / 120.0, vec![SymFactor::diag(chi, 4)]),
        ],
        chi,
    )
}
