//! Cyclic shift `Â|k⟩ = |k − 1 mod N⟩` on a register.

use alloc::vec::Vec;

use super::{append_qft, Circuit, Gate, GateKind};
use crate::error::{bail, Result};
use crate::math::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum AdderVariant {
    /// QFT, one phase gate per qubit, inverse QFT; no ancillas.
    #[default]
    QftPhase,
    /// Ripple of Toffolis over a prefix-AND ancilla chain.
    ToffoliAncilla,
}

/// Ancillas needed by a `width`-qubit adder carrying `controls` extra controls.
pub fn adder_ancillas(width: usize, controls: usize, variant: AdderVariant) -> usize {
    match variant {
        AdderVariant::QftPhase => 0,
        AdderVariant::ToffoliAncilla => (controls + width).saturating_sub(3),
    }
}

/// Increment `|k⟩ → |k + 1⟩` on `bits` (least significant first).
fn increment(bits: &[usize], controls: &[usize], anc: &[usize]) -> Vec<Gate> {
    let w = bits.len();
    let chain: Vec<usize> = controls.iter().chain(&bits[..w - 1]).copied().collect();
    let kmax = controls.len() + w - 1;
    let mut g = Vec::new();
    let and = |j: usize| {
        if j == 0 {
            Gate::toffoli(chain[0], chain[1], anc[0])
        } else {
            Gate::toffoli(anc[j - 1], chain[j + 1], anc[j])
        }
    };
    if kmax >= 3 {
        g.extend((0..=kmax - 3).map(and));
    }
    for i in (0..w).rev() {
        let k = controls.len() + i;
        match k {
            0 => g.push(Gate::new(GateKind::X, &[bits[i]])),
            1 => g.push(Gate::cnot(chain[0], bits[i])),
            2 => g.push(Gate::toffoli(chain[0], chain[1], bits[i])),
            _ => {
                g.push(Gate::toffoli(anc[k - 3], chain[k - 1], bits[i]));
                g.push(and(k - 3));
            }
        }
    }
    g
}

/// Appends `Âᵖ` on `reg` (most significant first), controlled by `controls`.
pub fn append_adder(
    c: &mut Circuit,
    reg: &[usize],
    power: i64,
    controls: &[usize],
    ancillas: &[usize],
    variant: AdderVariant,
) -> Result<()> {
    let w = reg.len();
    if w == 0 {
        bail!(Construction, "adder on an empty register");
    }
    let n = 1i64 << w;
    let p = power.rem_euclid(n);
    if p == 0 {
        return Ok(());
    }
    if w == 1 {
        c.push(Gate::controlled(GateKind::X, &[reg[0]], controls));
        return Ok(());
    }
    match variant {
        AdderVariant::QftPhase => {
            append_qft(c, reg, false);
            for (i, &q) in reg.iter().rev().enumerate() {
                let angle = -2.0 * PI * ((p << i) % n) as f64 / n as f64;
                if angle != 0.0 {
                    c.push(Gate::controlled(GateKind::Phase(angle), &[q], controls));
                }
            }
            append_qft(c, reg, true);
        }
        AdderVariant::ToffoliAncilla => {
            let need = adder_ancillas(w, controls.len(), variant);
            if ancillas.len() < need {
                bail!(
                    Construction,
                    "Toffoli adder on {w} qubits needs {need} ancillas, got {}",
                    ancillas.len()
                );
            }
            let bits: Vec<usize> = reg.iter().rev().copied().collect();
            let inc = increment(&bits, controls, ancillas);
            // Âᵖ = (increment⁻¹)ᵖ; use whichever direction is shorter
            let (reps, forward) = if p <= n / 2 {
                (p, false)
            } else {
                (n - p, true)
            };
            for _ in 0..reps {
                if forward {
                    c.gates.extend(inc.iter().cloned());
                } else {
                    c.gates.extend(inc.iter().rev().cloned());
                }
            }
        }
    }
    Ok(())
}

/// Uncontrolled `Â` on qubits `0..width`, followed by its ancillas.
pub fn build_adder_circuit(width: usize, variant: AdderVariant) -> Result<Circuit> {
    if width == 0 {
        bail!(Construction, "adder width must be at least 1");
    }
    let anc = adder_ancillas(width, 0, variant);
    let mut c = Circuit::new(width + anc);
    if anc > 0 {
        c.ancillas.push(("adder".into(), width..width + anc));
    }
    let reg: Vec<usize> = (0..width).collect();
    let ancillas: Vec<usize> = (width..width + anc).collect();
    append_adder(&mut c, &reg, 1, &[], &ancillas, variant)?;
    Ok(c)
}
