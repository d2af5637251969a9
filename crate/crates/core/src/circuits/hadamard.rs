//! Hadamard tests for `⟨L|W|R⟩` with `W` a product of Adders and Diagonal
//! operators.
//!
//! Layout: qubit 0 is the test ancilla, then the main register, then one
//! register per Diagonal power, then adder ancillas. The `|0⟩` branch
//! prepares `|L⟩` with every auxiliary register at zero; the `|1⟩` branch
//! prepares `|R⟩` and each Diagonal state `|φ⟩`, then applies the factors
//! right to left. A Diagonal factor pairs main qubit `i` with qubit `i` of
//! its register through a Toffoli on the ancilla: projecting the register
//! back onto `|0⟩` leaves `Σ_k φ_k |k⟩⟨k|`.

use alloc::vec;
use alloc::vec::Vec;

use super::{adder_ancillas, append_adder, AdderVariant, Circuit, Gate, GateKind};
use crate::ansatz::mottonen;
use crate::ansatz::ula::UlaSpec;
use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::math::sqrt;
use crate::state::{norm_sq, Axis, ParamVector};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Part {
    Real,
    Imag,
}

/// State-preparation block.
#[derive(Debug, Clone, PartialEq)]
pub enum Prep {
    /// Brickwork of SO(4) blocks, gate for gate.
    Ula { spec: UlaSpec, angles: Vec<f64> },
    /// Uniformly controlled Ry/Rz cascade reaching the given (normalized)
    /// amplitudes; used for Fourier-ansatz and frozen states.
    Amplitudes(Vec<C64>),
}

impl Prep {
    pub fn from_ansatz(spec: &AnsatzSpec, params: &ParamVector) -> Result<Prep> {
        Ok(match spec {
            AnsatzSpec::Ula(u) => {
                u.real_amplitudes(&params.angles)?;
                Prep::Ula {
                    spec: *u,
                    angles: params.angles.clone(),
                }
            }
            _ => Prep::Amplitudes(spec.amplitudes(params)?.psi),
        })
    }

    pub fn qubits(&self) -> usize {
        match self {
            Prep::Ula { spec, .. } => spec.n as usize,
            Prep::Amplitudes(v) => v.len().trailing_zeros() as usize,
        }
    }

    /// Unit state produced from `|0…0⟩`.
    pub fn state(&self) -> Result<Vec<C64>> {
        match self {
            Prep::Ula { spec, angles } => Ok(spec
                .real_amplitudes(angles)?
                .into_iter()
                .map(|x| C64::new(x, 0.0))
                .collect()),
            Prep::Amplitudes(v) => unit(v),
        }
    }

    pub fn conj(&self) -> Prep {
        match self {
            Prep::Ula { .. } => self.clone(),
            Prep::Amplitudes(v) => Prep::Amplitudes(v.iter().map(|z| z.conj()).collect()),
        }
    }

    /// Appends the preparation on `reg` (most significant first).
    pub fn append(&self, c: &mut Circuit, reg: &[usize], controls: &[usize]) -> Result<()> {
        if reg.len() != self.qubits() {
            bail!(
                Construction,
                "{}-qubit preparation on a register of {}",
                self.qubits(),
                reg.len()
            );
        }
        match self {
            Prep::Ula { spec, angles } => {
                let tops = spec.block_tops();
                for (b, th) in angles.chunks_exact(6).enumerate() {
                    let (t, u) = (
                        reg[tops[b % tops.len()] as usize],
                        reg[tops[b % tops.len()] as usize + 1],
                    );
                    for (k, pair) in th.chunks_exact(2).enumerate() {
                        if k > 0 {
                            c.push(Gate::cnot(t, u).with_controls(controls));
                        }
                        c.push(Gate::controlled(GateKind::Ry(pair[0]), &[t], controls));
                        c.push(Gate::controlled(GateKind::Ry(pair[1]), &[u], controls));
                    }
                }
            }
            Prep::Amplitudes(v) => {
                let (ry, rz, alpha) = mottonen::angles(&unit(v)?);
                if alpha != 0.0 {
                    c.push(Gate::controlled(
                        GateKind::GlobalPhase(alpha),
                        &[],
                        controls,
                    ));
                }
                for j in 0..reg.len() {
                    let off = (1usize << j) - 1;
                    for p in 0..1usize << j {
                        let mut on = controls.to_vec();
                        let mut off_ctrl = Vec::new();
                        for (i, &q) in reg[..j].iter().enumerate() {
                            if (p >> (j - 1 - i)) & 1 == 1 {
                                on.push(q);
                            } else {
                                off_ctrl.push(q);
                            }
                        }
                        for kind in [GateKind::Ry(ry[off + p]), GateKind::Rz(rz[off + p])] {
                            if kind.angle() != Some(0.0) {
                                c.push(Gate {
                                    kind,
                                    targets: vec![reg[j]],
                                    controls: on.clone(),
                                    anti_controls: off_ctrl.clone(),
                                });
                            }
                        }
                    }
                }
            }
        }
        Ok(())
    }
}

fn unit(v: &[C64]) -> Result<Vec<C64>> {
    if !v.len().is_power_of_two() {
        bail!(Dimension, "state length {} is not a power of two", v.len());
    }
    let n = sqrt(norm_sq(v));
    if n == 0.0 || !n.is_finite() {
        bail!(State, "cannot prepare a zero or non-finite state");
    }
    Ok(v.iter().map(|z| z / n).collect())
}

/// Factor of a circuit-level word.
#[derive(Debug, Clone, PartialEq)]
pub enum CircuitFactor {
    Adder {
        axis: Axis,
        power: i64,
    },
    /// `D̂ᵖ_φ` with `φ` the state the block prepares.
    Diag {
        state: Prep,
        power: u32,
    },
}

/// Register sizes of the main grid and the adder construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TestLayout {
    pub nx: u32,
    pub ny: u32,
    pub variant: AdderVariant,
}

impl TestLayout {
    fn axis(&self, axis: Axis) -> Result<core::ops::Range<usize>> {
        let (nx, ny) = (self.nx as usize, self.ny as usize);
        match axis {
            Axis::X => Ok(1..1 + nx),
            Axis::Y if ny > 0 => Ok(1 + nx..1 + nx + ny),
            Axis::Y => bail!(Construction, "y-axis adder on a 1D layout"),
        }
    }
}

/// Circuit whose ancilla statistics give `P(0) − P(1) = Re` (or `Im`) of
/// `⟨L|W|R⟩` for unit `|L⟩, |R⟩`; `factors` act right to left.
pub fn build_hadamard_test(
    layout: TestLayout,
    factors: &[CircuitFactor],
    left: &Prep,
    right: &Prep,
    part: Part,
) -> Result<Circuit> {
    let n = (layout.nx + layout.ny) as usize;
    let diag_regs: usize = factors
        .iter()
        .map(|f| {
            if let CircuitFactor::Diag { power, .. } = f {
                *power as usize
            } else {
                0
            }
        })
        .sum();
    let mut adder_anc = 0;
    for f in factors {
        if let CircuitFactor::Adder { axis, .. } = f {
            adder_anc = adder_anc.max(adder_ancillas(layout.axis(*axis)?.len(), 1, layout.variant));
        }
    }
    let total = 1 + n * (1 + diag_regs) + adder_anc;
    let mut c = Circuit::new(total);
    let main: Vec<usize> = (1..=n).collect();
    let mut next = 1 + n;
    if diag_regs > 0 {
        c.ancillas
            .push(("diagonal".into(), next..next + n * diag_regs));
    }
    let adder_start = next + n * diag_regs;
    let adder_reg: Vec<usize> = (adder_start..total).collect();
    if adder_anc > 0 {
        c.ancillas.push(("adder".into(), adder_start..total));
    }

    c.push(Gate::new(GateKind::H, &[0]));
    c.push(Gate::new(GateKind::X, &[0]));
    left.append(&mut c, &main, &[0])?;
    c.push(Gate::new(GateKind::X, &[0]));
    right.append(&mut c, &main, &[0])?;
    for f in factors.iter().rev() {
        match f {
            CircuitFactor::Adder { axis, power } => {
                let reg: Vec<usize> = layout.axis(*axis)?.collect();
                append_adder(&mut c, &reg, *power, &[0], &adder_reg, layout.variant)?;
            }
            CircuitFactor::Diag { state, power } => {
                for _ in 0..*power {
                    let reg: Vec<usize> = (next..next + n).collect();
                    next += n;
                    state.append(&mut c, &reg, &[0])?;
                    for (&m, &r) in main.iter().zip(&reg) {
                        c.push(Gate::toffoli(0, m, r));
                    }
                }
            }
        }
    }
    if part == Part::Imag {
        c.push(Gate::new(GateKind::Sdg, &[0]));
    }
    c.push(Gate::new(GateKind::H, &[0]));
    Ok(c)
}

/// `P(0) − P(1)` of qubit 0 after simulating from `|0…0⟩`.
pub fn hadamard_value(c: &Circuit) -> Result<f64> {
    let v = c.simulate(None)?;
    let half = v.len() / 2;
    Ok(v[..half].iter().map(|z| z.norm_sqr()).sum::<f64>()
        - v[half..].iter().map(|z| z.norm_sqr()).sum::<f64>())
}

/// The two-qubit adder test: one SO(4) block on qubits 1–2, then the
/// controlled increment as a Toffoli and a CNOT. Measures `⟨ψ|Â†|ψ⟩`,
/// equal to `⟨ψ|Â|ψ⟩` for the real block state.
pub fn toy_adder_test(block: &[f64; 6]) -> Circuit {
    let mut c = Circuit::new(3);
    c.push(Gate::new(GateKind::H, &[0]));
    let prep = Prep::Ula {
        spec: UlaSpec { n: 2, d: 1 },
        angles: block.to_vec(),
    };
    prep.append(&mut c, &[1, 2], &[]).expect("two-qubit block");
    c.push(Gate::toffoli(0, 2, 1));
    c.push(Gate::cnot(0, 2));
    c.push(Gate::new(GateKind::H, &[0]));
    c
}

/// The one-qubit Diagonal test: `|ψ⟩ = Ry(λ)|0⟩` on qubit 1, `|φ⟩ = Ry(θ)|0⟩`
/// prepared on qubit 2 under the ancilla, paired by a Toffoli. Measures
/// `⟨ψ|D̂_φ|ψ⟩ = Σ_k ψ_k² φ_k`.
pub fn toy_diagonal_test(lambda: f64, theta: f64) -> Circuit {
    let mut c = Circuit::new(3);
    c.push(Gate::new(GateKind::H, &[0]));
    c.push(Gate::new(GateKind::Ry(lambda), &[1]));
    c.push(Gate::controlled(GateKind::Ry(theta), &[2], &[0]));
    c.push(Gate::toffoli(0, 1, 2));
    c.push(Gate::new(GateKind::H, &[0]));
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin};
    use crate::operators::{Dims, Factor, OperatorWord};
    use crate::state::dot;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_state(rng: &mut ChaCha8Rng, n: usize) -> Vec<C64> {
        unit(
            &(0..1 << n)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect::<Vec<_>>(),
        )
        .unwrap()
    }

    fn both_parts(layout: TestLayout, f: &[CircuitFactor], l: &Prep, r: &Prep) -> C64 {
        let re =
            hadamard_value(&build_hadamard_test(layout, f, l, r, Part::Real).unwrap()).unwrap();
        let im =
            hadamard_value(&build_hadamard_test(layout, f, l, r, Part::Imag).unwrap()).unwrap();
        C64::new(re, im)
    }

    #[test]
    fn amplitude_prep_reproduces_state() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for n in 1..=4 {
            let s = random_state(&mut rng, n);
            let mut c = Circuit::new(n);
            Prep::Amplitudes(s.clone())
                .append(&mut c, &(0..n).collect::<Vec<_>>(), &[])
                .unwrap();
            let out = c.simulate(None).unwrap();
            assert!(out.iter().zip(&s).all(|(a, b)| (a - b).norm() < 1e-12));
        }
    }

    #[test]
    fn ula_prep_matches_ansatz() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let spec = UlaSpec { n: 3, d: 2 };
        let angles: Vec<f64> = (0..spec.angle_count())
            .map(|_| rng.random_range(-3.0..3.0))
            .collect();
        let prep = Prep::Ula { spec, angles };
        let mut c = Circuit::new(3);
        prep.append(&mut c, &[0, 1, 2], &[]).unwrap();
        let out = c.simulate(None).unwrap();
        let want = prep.state().unwrap();
        assert!(out.iter().zip(&want).all(|(a, b)| (a - b).norm() < 1e-12));
    }

    #[test]
    fn identity_word_on_equal_states_is_one() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let p = Prep::Amplitudes(random_state(&mut rng, 2));
        let layout = TestLayout {
            nx: 2,
            ny: 0,
            variant: AdderVariant::QftPhase,
        };
        let v = both_parts(layout, &[], &p, &p);
        assert!((v - C64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn random_words_match_direct_application() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for trial in 0..100 {
            let (nx, ny) = if trial % 4 == 3 {
                (1u32, 1u32)
            } else {
                (1 + trial % 3, 0)
            };
            let n = (nx + ny) as usize;
            let variant = if trial % 2 == 0 {
                AdderVariant::QftPhase
            } else {
                AdderVariant::ToffoliAncilla
            };
            let layout = TestLayout { nx, ny, variant };
            let (l, r, phi) = (
                random_state(&mut rng, n),
                random_state(&mut rng, n),
                random_state(&mut rng, n),
            );
            let axis = if ny > 0 && rng.random_bool(0.5) {
                Axis::Y
            } else {
                Axis::X
            };
            let p = rng.random_range(-2i64..=2);
            let pw = rng.random_range(1u32..=2);
            let cf = vec![
                CircuitFactor::Adder { axis, power: p },
                CircuitFactor::Diag {
                    state: Prep::Amplitudes(phi.clone()),
                    power: pw,
                },
            ];
            let word = OperatorWord::new(
                1.0,
                vec![
                    Factor::adder(axis, p),
                    Factor::diag_values(phi.clone().into(), pw),
                ],
            );
            let mut buf = r.clone();
            word.apply_factors(&mut buf, Dims { nx, ny }).unwrap();
            let want = dot(&l, &buf);
            let got = both_parts(layout, &cf, &Prep::Amplitudes(l), &Prep::Amplitudes(r));
            assert!(
                (got - want).norm() < 1e-12,
                "trial {trial}: {got} vs {want}"
            );
        }
    }

    #[test]
    fn toy_adder_circuit() {
        let block = [0.3, 1.1, -0.4, 0.7, 0.2, -0.9];
        let c = toy_adder_test(&block);
        let psi: Vec<f64> = UlaSpec { n: 2, d: 1 }.real_amplitudes(&block).unwrap();
        let direct: f64 = (0..4).map(|k| psi[k] * psi[(k + 1) % 4]).sum();
        assert!((hadamard_value(&c).unwrap() - direct).abs() < 1e-12);
        let counts = c.gate_counts();
        assert_eq!(
            (
                counts.qubits,
                counts.one_qubit,
                counts.two_qubit,
                counts.multi_qubit
            ),
            (3, 8, 3, 1)
        );
        assert_eq!(counts.depth, 8);
    }

    #[test]
    fn toy_diagonal_circuit() {
        for (l, t) in [(0.0, 0.0), (1.0, 0.6), (2.5, -1.2)] {
            let (c0, s0) = (cos(l / 2.0), sin(l / 2.0));
            let (c1, s1) = (cos(t / 2.0), sin(t / 2.0));
            let want = c0 * c0 * c1 + s0 * s0 * s1;
            assert!((hadamard_value(&toy_diagonal_test(l, t)).unwrap() - want).abs() < 1e-12);
        }
    }
}
