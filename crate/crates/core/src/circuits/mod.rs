//! Gate-level circuits and an exact statevector simulator for small registers.
//!
//! Qubit 0 is the most significant bit of a basis index. Gates carry plain
//! controls (active on `|1⟩`) and anti-controls (active on `|0⟩`).

mod adder;
mod hadamard;
mod verify;

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt::Write as _;
use core::ops::Range;

use crate::error::{bail, Result};
use crate::math::{sincos, FRAC_1_SQRT_2};
use crate::C64;

pub use adder::{adder_ancillas, append_adder, build_adder_circuit, AdderVariant};
pub use hadamard::{
    build_hadamard_test, hadamard_value, toy_adder_test, toy_diagonal_test, CircuitFactor, Part,
    Prep, TestLayout,
};
pub use verify::{verify_model, verify_shortcut, ShortcutReport};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    H,
    X,
    S,
    Sdg,
    Ry(f64),
    Rz(f64),
    /// `diag(1, e^{iφ})`.
    Phase(f64),
    /// Exchanges its two targets.
    Swap,
    /// `e^{iφ}` on the whole (controlled) subspace; no targets.
    GlobalPhase(f64),
}

impl GateKind {
    pub fn name(&self) -> &'static str {
        match self {
            GateKind::H => "h",
            GateKind::X => "x",
            GateKind::S => "s",
            GateKind::Sdg => "sdg",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::Phase(_) => "p",
            GateKind::Swap => "swap",
            GateKind::GlobalPhase(_) => "gphase",
        }
    }

    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Ry(a) | GateKind::Rz(a) | GateKind::Phase(a) | GateKind::GlobalPhase(a) => {
                Some(a)
            }
            _ => None,
        }
    }

    fn target_count(&self) -> usize {
        match self {
            GateKind::Swap => 2,
            GateKind::GlobalPhase(_) => 0,
            _ => 1,
        }
    }

    /// 2×2 matrix `[[a, b], [c, d]]` of single-target kinds.
    fn matrix(&self) -> [C64; 4] {
        let r = |x: f64| C64::new(x, 0.0);
        match *self {
            GateKind::H => [
                r(FRAC_1_SQRT_2),
                r(FRAC_1_SQRT_2),
                r(FRAC_1_SQRT_2),
                r(-FRAC_1_SQRT_2),
            ],
            GateKind::X => [r(0.0), r(1.0), r(1.0), r(0.0)],
            GateKind::S => [r(1.0), r(0.0), r(0.0), C64::new(0.0, 1.0)],
            GateKind::Sdg => [r(1.0), r(0.0), r(0.0), C64::new(0.0, -1.0)],
            GateKind::Ry(t) => {
                let (s, c) = sincos(0.5 * t);
                [r(c), r(-s), r(s), r(c)]
            }
            GateKind::Rz(t) => {
                let (s, c) = sincos(0.5 * t);
                [C64::new(c, -s), r(0.0), r(0.0), C64::new(c, s)]
            }
            GateKind::Phase(t) => {
                let (s, c) = sincos(t);
                [r(1.0), r(0.0), r(0.0), C64::new(c, s)]
            }
            GateKind::Swap | GateKind::GlobalPhase(_) => unreachable!("not a single-target gate"),
        }
    }

    /// The inverse gate.
    pub fn inverse(&self) -> GateKind {
        match *self {
            GateKind::S => GateKind::Sdg,
            GateKind::Sdg => GateKind::S,
            GateKind::Ry(a) => GateKind::Ry(-a),
            GateKind::Rz(a) => GateKind::Rz(-a),
            GateKind::Phase(a) => GateKind::Phase(-a),
            GateKind::GlobalPhase(a) => GateKind::GlobalPhase(-a),
            k => k,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Gate {
    pub kind: GateKind,
    pub targets: Vec<usize>,
    pub controls: Vec<usize>,
    pub anti_controls: Vec<usize>,
}

impl Gate {
    pub fn new(kind: GateKind, targets: &[usize]) -> Self {
        Gate {
            kind,
            targets: targets.to_vec(),
            controls: Vec::new(),
            anti_controls: Vec::new(),
        }
    }

    pub fn controlled(kind: GateKind, targets: &[usize], controls: &[usize]) -> Self {
        Gate {
            kind,
            targets: targets.to_vec(),
            controls: controls.to_vec(),
            anti_controls: Vec::new(),
        }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Gate::controlled(GateKind::X, &[target], &[control])
    }

    pub fn toffoli(c1: usize, c2: usize, target: usize) -> Self {
        Gate::controlled(GateKind::X, &[target], &[c1, c2])
    }

    /// Same gate with additional plain controls.
    pub fn with_controls(mut self, extra: &[usize]) -> Self {
        self.controls.extend_from_slice(extra);
        self
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.targets
            .iter()
            .chain(&self.controls)
            .chain(&self.anti_controls)
            .copied()
    }

    pub fn inverse(&self) -> Gate {
        Gate {
            kind: self.kind.inverse(),
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct Circuit {
    pub qubits: usize,
    pub gates: Vec<Gate>,
    /// Named ancilla ranges, for inspection.
    pub ancillas: Vec<(String, Range<usize>)>,
}

/// Exact counts; `depth` by greedy layering.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct GateCounts {
    pub qubits: usize,
    pub one_qubit: usize,
    pub two_qubit: usize,
    /// Gates on three or more qubits (Toffoli and wider).
    pub multi_qubit: usize,
    pub depth: usize,
}

impl Circuit {
    pub fn new(qubits: usize) -> Self {
        Circuit {
            qubits,
            gates: Vec::new(),
            ancillas: Vec::new(),
        }
    }

    pub fn push(&mut self, gate: Gate) {
        self.gates.push(gate);
    }

    /// Appends `other` with its qubit `i` mapped to `map[i]`.
    pub fn append_mapped(&mut self, other: &Circuit, map: &[usize]) {
        for g in &other.gates {
            let m = |v: &[usize]| v.iter().map(|&q| map[q]).collect::<Vec<_>>();
            self.gates.push(Gate {
                kind: g.kind,
                targets: m(&g.targets),
                controls: m(&g.controls),
                anti_controls: m(&g.anti_controls),
            });
        }
    }

    pub fn inverse(&self) -> Circuit {
        Circuit {
            qubits: self.qubits,
            gates: self.gates.iter().rev().map(Gate::inverse).collect(),
            ancillas: self.ancillas.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        for (i, g) in self.gates.iter().enumerate() {
            if g.targets.len() != g.kind.target_count() {
                bail!(
                    Construction,
                    "gate {i} ({}) has {} targets",
                    g.kind.name(),
                    g.targets.len()
                );
            }
            let mut seen = vec![false; self.qubits];
            for q in g.qubits() {
                if q >= self.qubits {
                    bail!(
                        Construction,
                        "gate {i} ({}) acts on qubit {q} of {}",
                        g.kind.name(),
                        self.qubits
                    );
                }
                if core::mem::replace(&mut seen[q], true) {
                    bail!(
                        Construction,
                        "gate {i} ({}) uses qubit {q} twice",
                        g.kind.name()
                    );
                }
            }
        }
        Ok(())
    }

    /// Final state from `initial` (default `|0…0⟩`).
    pub fn simulate(&self, initial: Option<&[C64]>) -> Result<Vec<C64>> {
        self.validate()?;
        let dim = 1usize << self.qubits;
        let mut v = match initial {
            Some(s) if s.len() == dim => s.to_vec(),
            Some(s) => bail!(
                Dimension,
                "initial state of length {} for {} qubits",
                s.len(),
                self.qubits
            ),
            None => {
                let mut v = vec![C64::new(0.0, 0.0); dim];
                v[0] = C64::new(1.0, 0.0);
                v
            }
        };
        for g in &self.gates {
            apply_gate(&mut v, self.qubits, g);
        }
        Ok(v)
    }

    /// Dense unitary, column-major (`u[col][row]`).
    pub fn unitary(&self) -> Result<Vec<Vec<C64>>> {
        if self.qubits > 12 {
            bail!(
                Dimension,
                "dense unitary of {} qubits is too large",
                self.qubits
            );
        }
        let dim = 1usize << self.qubits;
        (0..dim)
            .map(|j| {
                let mut e = vec![C64::new(0.0, 0.0); dim];
                e[j] = C64::new(1.0, 0.0);
                self.simulate(Some(&e))
            })
            .collect()
    }

    pub fn gate_counts(&self) -> GateCounts {
        let mut layer = vec![0usize; self.qubits];
        let (mut one, mut two, mut multi, mut depth) = (0, 0, 0, 0);
        for g in &self.gates {
            let qs: Vec<usize> = g.qubits().collect();
            match qs.len() {
                0 => continue,
                1 => one += 1,
                2 => two += 1,
                _ => multi += 1,
            }
            let l = 1 + qs.iter().map(|&q| layer[q]).max().unwrap_or(0);
            qs.iter().for_each(|&q| layer[q] = l);
            depth = depth.max(l);
        }
        GateCounts {
            qubits: self.qubits,
            one_qubit: one,
            two_qubit: two,
            multi_qubit: multi,
            depth,
        }
    }

    /// One gate per line: `name targets controls angle`; anti-controls are
    /// prefixed with `!`, empty fields are `-`.
    pub fn netlist(&self) -> String {
        let mut s = String::new();
        let list = |v: &[String]| {
            if v.is_empty() {
                String::from("-")
            } else {
                v.join(",")
            }
        };
        for g in &self.gates {
            let targets: Vec<String> = g.targets.iter().map(|q| format!("{q}")).collect();
            let controls: Vec<String> = g
                .controls
                .iter()
                .map(|q| format!("{q}"))
                .chain(g.anti_controls.iter().map(|q| format!("!{q}")))
                .collect();
            let angle = g
                .kind
                .angle()
                .map_or(String::from("-"), |a| format!("{a:.17e}"));
            let _ = writeln!(
                s,
                "{} {} {} {}",
                g.kind.name(),
                list(&targets),
                list(&controls),
                angle
            );
        }
        s
    }
}

fn apply_gate(v: &mut [C64], nq: usize, g: &Gate) {
    let bit = |q: usize| 1usize << (nq - 1 - q);
    let on: usize = g.controls.iter().map(|&q| bit(q)).sum();
    let off: usize = g.anti_controls.iter().map(|&q| bit(q)).sum();
    let active = |i: usize| i & on == on && i & off == 0;
    match g.kind {
        GateKind::GlobalPhase(a) => {
            let (s, c) = sincos(a);
            let ph = C64::new(c, s);
            for (i, z) in v.iter_mut().enumerate() {
                if active(i) {
                    *z *= ph;
                }
            }
        }
        GateKind::Swap => {
            let (a, b) = (bit(g.targets[0]), bit(g.targets[1]));
            for i in 0..v.len() {
                if i & a != 0 && i & b == 0 && active(i) {
                    v.swap(i, i ^ a ^ b);
                }
            }
        }
        kind => {
            let t = bit(g.targets[0]);
            let [m00, m01, m10, m11] = kind.matrix();
            for i in 0..v.len() {
                if i & t == 0 && active(i) {
                    let (x0, x1) = (v[i], v[i | t]);
                    v[i] = m00 * x0 + m01 * x1;
                    v[i | t] = m10 * x0 + m11 * x1;
                }
            }
        }
    }
}

/// Appends the QFT `|k⟩ → Σ_j e^{2πi jk/N}|j⟩/√N` on `reg` (most
/// significant first).
pub fn append_qft(c: &mut Circuit, reg: &[usize], inverse: bool) {
    let mut gates = Vec::new();
    let w = reg.len();
    for i in 0..w {
        gates.push(Gate::new(GateKind::H, &[reg[i]]));
        for j in i + 1..w {
            let angle = crate::math::PI / (1u64 << (j - i)) as f64;
            gates.push(Gate::controlled(
                GateKind::Phase(angle),
                &[reg[i]],
                &[reg[j]],
            ));
        }
    }
    for i in 0..w / 2 {
        gates.push(Gate::new(GateKind::Swap, &[reg[i], reg[w - 1 - i]]));
    }
    if inverse {
        c.gates.extend(gates.iter().rev().map(Gate::inverse));
    } else {
        c.gates.extend(gates);
    }
}

/// Largest deviation of `u†u` from the identity.
pub fn unitarity_defect(u: &[Vec<C64>]) -> f64 {
    let mut worst: f64 = 0.0;
    for (i, a) in u.iter().enumerate() {
        for (j, b) in u.iter().enumerate() {
            let d = crate::state::dot(a, b)
                - if i == j {
                    C64::new(1.0, 0.0)
                } else {
                    C64::new(0.0, 0.0)
                };
            worst = worst.max(d.norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{cos, sin, PI};

    #[test]
    fn single_gates() {
        let mut c = Circuit::new(1);
        c.push(Gate::new(GateKind::X, &[0]));
        assert_eq!(c.simulate(None).unwrap()[1], C64::new(1.0, 0.0));
        let mut c = Circuit::new(2);
        c.push(Gate::new(GateKind::H, &[0]));
        c.push(Gate::cnot(0, 1));
        let v = c.simulate(None).unwrap();
        assert!((v[0].re - FRAC_1_SQRT_2).abs() < 1e-15 && (v[3].re - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(v[1].norm() < 1e-15 && v[2].norm() < 1e-15);
    }

    #[test]
    fn anti_control_fires_on_zero() {
        let mut c = Circuit::new(2);
        c.push(Gate {
            kind: GateKind::X,
            targets: vec![1],
            controls: vec![],
            anti_controls: vec![0],
        });
        assert_eq!(c.simulate(None).unwrap()[1], C64::new(1.0, 0.0));
    }

    #[test]
    fn qft_matches_dft() {
        for w in 1..=4 {
            let mut c = Circuit::new(w);
            let reg: Vec<usize> = (0..w).collect();
            append_qft(&mut c, &reg, false);
            let u = c.unitary().unwrap();
            let n = 1usize << w;
            for k in 0..n {
                for j in 0..n {
                    let ph = 2.0 * PI * (j * k) as f64 / n as f64;
                    let want = C64::new(cos(ph), sin(ph)) / (n as f64).sqrt();
                    assert!((u[k][j] - want).norm() < 1e-12, "w={w} k={k} j={j}");
                }
            }
            assert!(unitarity_defect(&u) < 1e-12);
            let mut inv = c.clone();
            append_qft(&mut inv, &reg, true);
            let id = inv.unitary().unwrap();
            assert!(id
                .iter()
                .enumerate()
                .all(|(k, col)| (col[k] - C64::new(1.0, 0.0)).norm() < 1e-12));
        }
    }

    #[test]
    fn validation_and_counts() {
        let mut c = Circuit::new(2);
        c.push(Gate::cnot(0, 0));
        assert!(c.validate().is_err());
        let mut c = Circuit::new(2);
        c.push(Gate::new(GateKind::H, &[2]));
        assert!(c.simulate(None).is_err());
        let empty = Circuit::new(4);
        assert_eq!(
            empty.gate_counts(),
            GateCounts {
                qubits: 4,
                one_qubit: 0,
                two_qubit: 0,
                multi_qubit: 0,
                depth: 0
            }
        );
    }

    #[test]
    fn netlist_format() {
        let mut c = Circuit::new(3);
        c.push(Gate::new(GateKind::Ry(0.5), &[2]));
        c.push(Gate {
            kind: GateKind::X,
            targets: vec![1],
            controls: vec![0],
            anti_controls: vec![2],
        });
        let text = c.netlist();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "ry 2 - 5.00000000000000000e-1");
        assert_eq!(lines[1], "x 1 0,!2 -");
    }
}
