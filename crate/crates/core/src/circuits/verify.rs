//! Gate-level check of the direct-apply expectation values.

use alloc::vec::Vec;

use super::{
    build_hadamard_test, hadamard_value, AdderVariant, CircuitFactor, Part, Prep, TestLayout,
};
use crate::costfn::{CostModel, Slot, SymFactor};
use crate::error::{bail, Result};
use crate::evolve::{EvolutionPlan, Evolver, StageSolver};
use crate::state::ParamVector;
use crate::C64;

/// Circuits wider than this are refused.
const MAX_QUBITS: usize = 22;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShortcutReport {
    pub models: usize,
    pub expectations: usize,
    /// Largest `|circuit − shortcut|` over all complex expectations.
    pub max_deviation: f64,
    pub max_qubits: usize,
}

impl ShortcutReport {
    fn merge(&mut self, other: ShortcutReport) {
        self.models += other.models;
        self.expectations += other.expectations;
        self.max_deviation = self.max_deviation.max(other.max_deviation);
        self.max_qubits = self.max_qubits.max(other.max_qubits);
    }
}

fn slot_prep(model: &CostModel, slot: Slot, psi: &Prep) -> Result<Prep> {
    Ok(match slot {
        Slot::Psi => psi.clone(),
        s => Prep::Amplitudes(model.frozen_state(s)?.to_vec()),
    })
}

/// Every expanded expectation of `model` at `params`, by simulation of its
/// Hadamard tests, against [`CostModel::expectations`].
pub fn verify_model(
    model: &CostModel,
    params: &ParamVector,
    variant: AdderVariant,
) -> Result<ShortcutReport> {
    let left = Prep::from_ansatz(&model.ansatz, params)?;
    let psi = left.state()?;
    let shortcut = model.expectations(&psi)?;
    let layout = TestLayout {
        nx: model.dims.nx,
        ny: model.dims.ny,
        variant,
    };
    let mut report = ShortcutReport {
        models: 1,
        ..Default::default()
    };
    for (term, want) in model.expansion.terms.iter().zip(shortcut) {
        let right = slot_prep(model, term.right, &left)?;
        let factors = term
            .factors
            .iter()
            .map(|f| {
                Ok(match *f {
                    SymFactor::Adder { axis, power } => CircuitFactor::Adder { axis, power },
                    SymFactor::Diag {
                        slot,
                        power,
                        conjugated,
                    } => {
                        let s = slot_prep(model, slot, &left)?;
                        CircuitFactor::Diag {
                            state: if conjugated { s.conj() } else { s },
                            power,
                        }
                    }
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let re = build_hadamard_test(layout, &factors, &left, &right, Part::Real)?;
        if re.qubits > MAX_QUBITS {
            bail!(
                Construction,
                "Hadamard test needs {} qubits (limit {MAX_QUBITS})",
                re.qubits
            );
        }
        let im = build_hadamard_test(layout, &factors, &left, &right, Part::Imag)?;
        let got = C64::new(hadamard_value(&re)?, hadamard_value(&im)?);
        report.expectations += 1;
        report.max_qubits = report.max_qubits.max(re.qubits);
        report.max_deviation = report.max_deviation.max((got - want).norm());
    }
    Ok(report)
}

/// Runs the first `steps` timesteps of `plan` and checks every cost model
/// built along the way at its optimized parameters.
pub fn verify_shortcut(
    plan: &EvolutionPlan,
    steps: usize,
    variant: AdderVariant,
) -> Result<ShortcutReport> {
    if plan.solver != StageSolver::Variational {
        bail!(Config, "shortcut verification needs variational stages");
    }
    let mut report = ShortcutReport::default();
    if steps == 0 {
        return Ok(report);
    }
    let evolver = Evolver::new(plan)?;
    let mut state = evolver.initial_state()?;
    for k in 0..steps {
        let (next, rec) = evolver.step(&state, k)?;
        let problem = plan.problem.at_time(state.t);
        let mut chi_state = None;
        if let Some(spec) = &evolver.chi_spec {
            if let Some(model) = problem.chi_model(&state.u, spec.clone())? {
                let p = rec
                    .chi_params
                    .as_ref()
                    .ok_or_else(|| crate::Error::State("missing χ parameters".into()))?;
                report.merge(verify_model(&model, p, variant).map_err(|e| e.at_step(k))?);
                chi_state = Some(spec.amplitudes(p)?);
            }
        }
        let model = problem.u_model(&state.u, chi_state.as_ref(), evolver.u_spec.clone())?;
        let p = rec
            .u_params
            .as_ref()
            .ok_or_else(|| crate::Error::State("missing parameters".into()))?;
        report.merge(verify_model(&model, p, variant).map_err(|e| e.at_step(k))?);
        state = next;
    }
    Ok(report)
}
