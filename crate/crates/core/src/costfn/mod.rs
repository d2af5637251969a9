//! Cost functions `‖M|u⟩ − |t⟩‖²` in two evaluation modes.
//!
//! A [`CostModel`] is assembled from symbolic words: the scheme matrix `M`
//! acting on the trial state, and a right-hand side built from frozen states.
//! Direct mode applies `M` to the represented vector. Expanded mode sums
//! prefactored expectation values `Re⟨ψ|W|·⟩` generated by expanding the
//! square symbolically, merging words that are equal or adjoint to each other.

pub mod bse1d;
pub mod bse2d;
pub mod buckmaster;
pub mod generic;
pub mod kpz;

use alloc::collections::BTreeMap;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

pub use bse1d::Bse1dProblem;
pub use bse2d::Bse2dProblem;
pub use buckmaster::BuckmasterProblem;
pub use generic::generic_chi_cost;
pub use kpz::KpzProblem;

use crate::ansatz::AnsatzSpec;
use crate::error::{bail, Result};
use crate::operators::{Dims, Factor, OperatorSum, OperatorWord};
use crate::state::{dot, norm_sq, sq_dist, Axis, ParamVector, ScaledState};
use crate::C64;

/// State referenced by a cost term.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Slot {
    /// The trial state being optimized.
    Psi,
    /// Previous-timestep solution `ũ`.
    Prev,
    /// Intermediate state `χ_k`.
    Chi(u8),
}

/// Factor of a symbolic word. `Diag` refers to the represented vector of a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymFactor {
    Adder {
        axis: Axis,
        power: i64,
    },
    Diag {
        slot: Slot,
        power: u32,
        conjugated: bool,
    },
}

impl SymFactor {
    pub fn adder(power: i64) -> Self {
        SymFactor::Adder {
            axis: Axis::X,
            power,
        }
    }

    pub fn adder_on(axis: Axis, power: i64) -> Self {
        SymFactor::Adder { axis, power }
    }

    pub fn diag(slot: Slot, power: u32) -> Self {
        SymFactor::Diag {
            slot,
            power,
            conjugated: false,
        }
    }
}

/// Real coefficient times an ordered factor product (rightmost acts first).
#[derive(Debug, Clone, PartialEq)]
pub struct SymWord {
    pub coeff: f64,
    pub factors: Vec<SymFactor>,
}

impl SymWord {
    pub fn new(coeff: f64, factors: Vec<SymFactor>) -> Self {
        SymWord { coeff, factors }
    }

    pub fn scalar(coeff: f64) -> Self {
        SymWord {
            coeff,
            factors: Vec::new(),
        }
    }

    /// Word product `self · other`.
    pub fn then(&self, other: &SymWord) -> SymWord {
        let mut factors = self.factors.clone();
        factors.extend_from_slice(&other.factors);
        SymWord {
            coeff: self.coeff * other.coeff,
            factors,
        }
    }
}

/// Product of two word sums.
pub fn compose(a: &[SymWord], b: &[SymWord]) -> Vec<SymWord> {
    a.iter()
        .flat_map(|x| b.iter().map(move |y| x.then(y)))
        .collect()
}

/// Scale every word of a sum.
pub fn scale(words: &[SymWord], c: f64) -> Vec<SymWord> {
    words
        .iter()
        .map(|w| SymWord {
            coeff: w.coeff * c,
            factors: w.factors.clone(),
        })
        .collect()
}

/// `(2^{n−1}/L)(Â − Â†)` along `axis`.
pub fn sym_d1(axis: Axis, n: u32, length: f64) -> Vec<SymWord> {
    let a = crate::operators::first_coeff(n, length);
    vec![
        SymWord::new(a, vec![SymFactor::adder_on(axis, 1)]),
        SymWord::new(-a, vec![SymFactor::adder_on(axis, -1)]),
    ]
}

/// `(4ⁿ/L²)(Â + Â† − 2)` along `axis`.
pub fn sym_d2(axis: Axis, n: u32, length: f64) -> Vec<SymWord> {
    let b = crate::operators::second_coeff(n, length);
    vec![
        SymWord::new(b, vec![SymFactor::adder_on(axis, 1)]),
        SymWord::new(b, vec![SymFactor::adder_on(axis, -1)]),
        SymWord::scalar(-2.0 * b),
    ]
}

/// Right-hand-side term `word |slot⟩`.
#[derive(Debug, Clone, PartialEq)]
pub struct TargetTerm {
    pub word: SymWord,
    pub slot: Slot,
}

impl TargetTerm {
    pub fn new(word: SymWord, slot: Slot) -> Self {
        TargetTerm { word, slot }
    }

    pub fn on(words: Vec<SymWord>, slot: Slot) -> Vec<TargetTerm> {
        words
            .into_iter()
            .map(|word| TargetTerm { word, slot })
            .collect()
    }
}

/// Frozen states available to a cost.
#[derive(Debug, Clone, Default)]
pub struct SlotStates {
    pub prev: Option<ScaledState>,
    pub chis: Vec<Option<ScaledState>>,
}

impl SlotStates {
    pub fn with_prev(prev: ScaledState) -> Self {
        SlotStates {
            prev: Some(prev),
            chis: Vec::new(),
        }
    }

    pub fn set_chi(&mut self, k: u8, state: ScaledState) {
        let k = k as usize;
        if self.chis.len() <= k {
            self.chis.resize(k + 1, None);
        }
        self.chis[k] = Some(state);
    }

    pub fn get(&self, slot: Slot) -> Result<&ScaledState> {
        match slot {
            Slot::Psi => bail!(
                State,
                "the trial state cannot be referenced as a frozen state"
            ),
            Slot::Prev => self
                .prev
                .as_ref()
                .ok_or_else(|| crate::Error::State("previous state missing".into())),
            Slot::Chi(k) => match self.chis.get(k as usize) {
                Some(Some(s)) => Ok(s),
                _ => bail!(State, "intermediate state χ_{k} has not been trained"),
            },
        }
    }
}

/// One expanded term `coeff · λ₀^p · Re⟨ψ|W|right⟩` with unit-norm states.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpTerm {
    pub coeff: f64,
    pub lambda_power: u8,
    pub right: Slot,
    pub factors: Vec<SymFactor>,
}

impl ExpTerm {
    /// Total power of Diagonal factors in the word.
    pub fn diag_power(&self) -> u32 {
        self.factors
            .iter()
            .map(|f| match f {
                SymFactor::Diag { power, .. } => *power,
                _ => 0,
            })
            .sum()
    }
}

/// Expanded cost: `λ₀²·psi_sq + fixed + Σ terms`.
#[derive(Debug, Clone, PartialEq)]
pub struct Expansion {
    pub terms: Vec<ExpTerm>,
    /// Coefficient of `λ₀²⟨ψ|ψ⟩`, exact because `⟨ψ|ψ⟩ = 1`.
    pub psi_sq: f64,
    /// Target norm `‖t‖²`.
    pub fixed: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum Mode {
    #[default]
    Direct,
    Expanded,
}

fn adjoint(f: &[SymFactor]) -> Vec<SymFactor> {
    f.iter()
        .rev()
        .map(|x| match *x {
            SymFactor::Adder { axis, power } => SymFactor::Adder {
                axis,
                power: -power,
            },
            SymFactor::Diag {
                slot,
                power,
                conjugated,
            } => SymFactor::Diag {
                slot,
                power,
                conjugated: !conjugated,
            },
        })
        .collect()
}

/// Word coefficient times the scales of its Diagonal factors.
fn fold_scales(w: &SymWord, states: &SlotStates) -> Result<f64> {
    let mut c = w.coeff;
    for f in &w.factors {
        if let SymFactor::Diag { slot, power, .. } = f {
            c *= crate::math::powi(states.get(*slot)?.scale, *power as i32);
        }
    }
    Ok(c)
}

enum Segment {
    Shift(i64, i64),
    Diags(BTreeMap<(Slot, bool), u32>),
}

/// Merge adjacent Adders and adjacent Diagonals; drop conjugation on real states.
fn canonical(f: &[SymFactor], real: &dyn Fn(Slot) -> bool) -> Vec<SymFactor> {
    let mut segs: Vec<Segment> = Vec::new();
    for x in f {
        match *x {
            SymFactor::Adder { axis, power } => {
                if !matches!(segs.last(), Some(Segment::Shift(..))) {
                    segs.push(Segment::Shift(0, 0));
                }
                if let Some(Segment::Shift(px, py)) = segs.last_mut() {
                    match axis {
                        Axis::X => *px += power,
                        Axis::Y => *py += power,
                    }
                }
            }
            SymFactor::Diag {
                slot,
                power,
                conjugated,
            } => {
                if matches!(segs.last(), Some(Segment::Shift(0, 0))) {
                    segs.pop();
                }
                if !matches!(segs.last(), Some(Segment::Diags(_))) {
                    segs.push(Segment::Diags(BTreeMap::new()));
                }
                if let Some(Segment::Diags(m)) = segs.last_mut() {
                    *m.entry((slot, conjugated && !real(slot))).or_insert(0) += power;
                }
            }
        }
    }
    let mut out = Vec::new();
    for s in segs {
        match s {
            Segment::Shift(px, py) => {
                if px != 0 {
                    out.push(SymFactor::Adder {
                        axis: Axis::X,
                        power: px,
                    });
                }
                if py != 0 {
                    out.push(SymFactor::Adder {
                        axis: Axis::Y,
                        power: py,
                    });
                }
            }
            Segment::Diags(m) => {
                for ((slot, conjugated), power) in m {
                    out.push(SymFactor::Diag {
                        slot,
                        power,
                        conjugated,
                    });
                }
            }
        }
    }
    out
}

/// Expand `‖M|u⟩ − Σ V_j|s_j⟩‖²`; coefficients absorb the scales of referenced states.
pub fn expand(
    op: &[SymWord],
    target: &[TargetTerm],
    states: &SlotStates,
    target_norm_sq: f64,
) -> Result<Expansion> {
    let fold = |w: &SymWord| fold_scales(w, states);
    let real = |slot: Slot| -> bool {
        states
            .get(slot)
            .map(|s| s.psi.iter().all(|z| z.im == 0.0))
            .unwrap_or(false)
    };

    let mut psi_sq = 0.0;
    let mut quad: BTreeMap<Vec<SymFactor>, f64> = BTreeMap::new();
    let mut cross: BTreeMap<(Slot, Vec<SymFactor>), f64> = BTreeMap::new();
    let op_c: Vec<f64> = op.iter().map(fold).collect::<Result<_>>()?;
    for (wi, ci) in op.iter().zip(&op_c) {
        let adj = adjoint(&wi.factors);
        for (wj, cj) in op.iter().zip(&op_c) {
            let mut f = adj.clone();
            f.extend_from_slice(&wj.factors);
            let w = canonical(&f, &real);
            if w.is_empty() {
                psi_sq += ci * cj;
                continue;
            }
            let wa = canonical(&adjoint(&w), &real);
            let key = if wa < w { wa } else { w };
            *quad.entry(key).or_insert(0.0) += ci * cj;
        }
        for t in target {
            let s = states.get(t.slot)?.scale;
            let mut f = adj.clone();
            f.extend_from_slice(&t.word.factors);
            let w = canonical(&f, &real);
            *cross.entry((t.slot, w)).or_insert(0.0) += -2.0 * ci * fold(&t.word)? * s;
        }
    }
    let mut terms = Vec::new();
    for (factors, coeff) in quad {
        if coeff != 0.0 {
            terms.push(ExpTerm {
                coeff,
                lambda_power: 2,
                right: Slot::Psi,
                factors,
            });
        }
    }
    for ((right, factors), coeff) in cross {
        if coeff != 0.0 {
            terms.push(ExpTerm {
                coeff,
                lambda_power: 1,
                right,
                factors,
            });
        }
    }
    Ok(Expansion {
        terms,
        psi_sq,
        fixed: target_norm_sq,
    })
}

/// Cached unit amplitudes of the frozen slots.
#[derive(Debug, Clone)]
struct Frozen {
    prev: Option<Arc<[C64]>>,
    chis: Vec<Option<Arc<[C64]>>>,
}

impl Frozen {
    fn of(states: &SlotStates) -> Self {
        Frozen {
            prev: states.prev.as_ref().map(|s| s.psi.clone().into()),
            chis: states
                .chis
                .iter()
                .map(|c| c.as_ref().map(|s| s.psi.clone().into()))
                .collect(),
        }
    }

    fn get(&self, slot: Slot) -> Result<&Arc<[C64]>> {
        let v = match slot {
            Slot::Psi => None,
            Slot::Prev => self.prev.as_ref(),
            Slot::Chi(k) => self.chis.get(k as usize).and_then(|c| c.as_ref()),
        };
        v.ok_or_else(|| crate::Error::State(alloc::format!("{slot:?} is not available")))
    }
}

fn numeric_word(coeff: f64, f: &[SymFactor], frozen: &Frozen) -> Result<OperatorWord> {
    let factors = f
        .iter()
        .map(|x| {
            Ok(match *x {
                SymFactor::Adder { axis, power } => Factor::Adder { axis, power },
                SymFactor::Diag {
                    slot,
                    power,
                    conjugated,
                } => Factor::Diag {
                    values: frozen.get(slot)?.clone(),
                    power,
                    conjugated,
                },
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OperatorWord::new(coeff, factors))
}

/// A cost function over the parameters of one ansatz.
#[derive(Debug, Clone)]
pub struct CostModel {
    pub ansatz: AnsatzSpec,
    pub dims: Dims,
    /// Scheme matrix `M` with Diagonal factors on unit states and folded scales.
    pub op: OperatorSum,
    /// Raw right-hand side `|t⟩`.
    pub target: Vec<C64>,
    pub expansion: Expansion,
    pub states: SlotStates,
    frozen: Frozen,
    term_words: Vec<OperatorWord>,
    identity_op: bool,
}

impl CostModel {
    pub fn new(
        ansatz: AnsatzSpec,
        dims: Dims,
        op: Vec<SymWord>,
        target: Vec<TargetTerm>,
        states: SlotStates,
    ) -> Result<Self> {
        if ansatz.qubits() != dims.nx + dims.ny {
            bail!(
                Dimension,
                "ansatz on {} qubits for a {}-qubit grid",
                ansatz.qubits(),
                dims.nx + dims.ny
            );
        }
        for s in [states.prev.as_ref()]
            .into_iter()
            .chain(states.chis.iter().map(|c| c.as_ref()))
            .flatten()
        {
            if s.len() != dims.len() {
                bail!(
                    Dimension,
                    "frozen state of length {} on a grid of {} points",
                    s.len(),
                    dims.len()
                );
            }
        }
        let frozen = Frozen::of(&states);
        let words = op
            .iter()
            .map(|w| numeric_word(fold_scales(w, &states)?, &w.factors, &frozen))
            .collect::<Result<Vec<_>>>()?;
        let op_sum = OperatorSum::from_words(dims, words);
        let mut t = vec![C64::new(0.0, 0.0); dims.len()];
        for term in &target {
            let st = states.get(term.slot)?;
            let w = numeric_word(
                fold_scales(&term.word, &states)?,
                &term.word.factors,
                &frozen,
            )?;
            let mut buf = st.vector();
            w.apply_factors(&mut buf, dims)?;
            for (o, b) in t.iter_mut().zip(&buf) {
                *o += w.coeff * b;
            }
        }
        let expansion = expand(&op, &target, &states, norm_sq(&t))?;
        let term_words = expansion
            .terms
            .iter()
            .map(|e| numeric_word(1.0, &e.factors, &frozen))
            .collect::<Result<Vec<_>>>()?;
        let identity_op = op.len() == 1 && op[0].factors.is_empty() && op[0].coeff == 1.0;
        Ok(CostModel {
            ansatz,
            dims,
            op: op_sum,
            target: t,
            expansion,
            states,
            frozen,
            term_words,
            identity_op,
        })
    }

    pub fn evaluate(&self, params: &ParamVector, mode: Mode) -> Result<f64> {
        let st = self.ansatz.amplitudes(params)?;
        match mode {
            Mode::Direct => self.direct_state(&st),
            Mode::Expanded => self.expanded_state(&st),
        }
    }

    pub fn direct(&self, params: &ParamVector) -> Result<f64> {
        self.evaluate(params, Mode::Direct)
    }

    /// Direct cost of an arbitrary represented state.
    pub fn direct_state(&self, st: &ScaledState) -> Result<f64> {
        if self.identity_op {
            if st.len() != self.target.len() {
                bail!(
                    Dimension,
                    "state of length {} for a cost on {}",
                    st.len(),
                    self.target.len()
                );
            }
            return Ok(st
                .psi
                .iter()
                .zip(&self.target)
                .map(|(p, t)| (p * st.scale - t).norm_sqr())
                .sum());
        }
        let v = self.op.apply(&st.vector())?;
        Ok(sq_dist(&v, &self.target))
    }

    /// Coefficients `(c₂, c₁, c₀)` of the cost `c₂λ₀² + c₁λ₀ + c₀` at fixed angles.
    pub fn quadratic(&self, angles: &[f64]) -> Result<(f64, f64, f64)> {
        let st = self.ansatz.amplitudes(&ParamVector {
            scale: 1.0,
            angles: angles.to_vec(),
        })?;
        let v = if self.identity_op {
            st.psi
        } else {
            self.op.apply(&st.psi)?
        };
        Ok((
            norm_sq(&v),
            -2.0 * dot(&v, &self.target).re,
            self.expansion.fixed,
        ))
    }

    /// Unit vector of a frozen slot, as used by the expanded terms.
    pub fn frozen_state(&self, slot: Slot) -> Result<&[C64]> {
        Ok(self.frozen.get(slot)?)
    }

    /// Normalized expectation values `⟨ψ|W|right⟩`, one per expanded term.
    pub fn expectations(&self, psi: &[C64]) -> Result<Vec<C64>> {
        if psi.len() != self.dims.len() {
            bail!(
                Dimension,
                "state of length {} for a cost on {}",
                psi.len(),
                self.dims.len()
            );
        }
        let mut out = Vec::with_capacity(self.term_words.len());
        let mut buf = vec![C64::new(0.0, 0.0); psi.len()];
        for (term, w) in self.expansion.terms.iter().zip(&self.term_words) {
            let right: &[C64] = match term.right {
                Slot::Psi => psi,
                s => self.frozen.get(s)?,
            };
            buf.copy_from_slice(right);
            w.apply_factors(&mut buf, self.dims)?;
            out.push(dot(psi, &buf));
        }
        Ok(out)
    }

    /// Combine expectation values (real parts) into the cost at scale `lambda`.
    pub fn combine(&self, lambda: f64, values: &[f64]) -> f64 {
        let e = &self.expansion;
        let mut c = e.psi_sq * lambda * lambda + e.fixed;
        for (t, v) in e.terms.iter().zip(values) {
            let l = if t.lambda_power == 2 {
                lambda * lambda
            } else {
                lambda
            };
            c += t.coeff * l * v;
        }
        c
    }

    pub fn expanded_state(&self, st: &ScaledState) -> Result<f64> {
        let vals: Vec<f64> = self.expectations(&st.psi)?.iter().map(|z| z.re).collect();
        Ok(self.combine(st.scale, &vals))
    }

    /// Number of distinct expectation values in expanded mode.
    pub fn expectation_count(&self) -> usize {
        self.expansion.terms.len()
    }

    /// Minimizer `M⁻¹|t⟩` by dense LU (small grids only).
    pub fn dense_solution(&self) -> Result<Vec<C64>> {
        let n = self.dims.len();
        if self.identity_op {
            return Ok(self.target.clone());
        }
        let m = self.op.to_dense()?;
        let mat = nalgebra::DMatrix::from_row_slice(n, n, &m);
        let rhs = nalgebra::DVector::from_column_slice(&self.target);
        match mat.lu().solve(&rhs) {
            Some(x) => Ok(x.iter().copied().collect()),
            None => bail!(Numeric, "scheme matrix is singular"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_merges_runs() {
        let real = |_s: Slot| true;
        let d = SymFactor::diag(Slot::Chi(0), 1);
        let w = canonical(&[d, SymFactor::adder(1), SymFactor::adder(-1), d], &real);
        assert_eq!(w, vec![SymFactor::diag(Slot::Chi(0), 2)]);
        let w = canonical(
            &[
                SymFactor::adder(2),
                SymFactor::adder_on(Axis::Y, 1),
                SymFactor::adder(-1),
            ],
            &real,
        );
        assert_eq!(
            w,
            vec![SymFactor::adder(1), SymFactor::adder_on(Axis::Y, 1)]
        );
        let conj = SymFactor::Diag {
            slot: Slot::Prev,
            power: 1,
            conjugated: true,
        };
        assert_eq!(
            canonical(&[conj], &real),
            vec![SymFactor::diag(Slot::Prev, 1)]
        );
        assert_eq!(canonical(&[conj], &|_| false), vec![conj]);
    }

    #[test]
    fn adjoint_reverses_and_negates() {
        let w = [SymFactor::adder(1), SymFactor::diag(Slot::Prev, 2)];
        assert_eq!(
            adjoint(&w),
            vec![
                SymFactor::Diag {
                    slot: Slot::Prev,
                    power: 2,
                    conjugated: true
                },
                SymFactor::adder(-1)
            ]
        );
    }

    #[test]
    fn missing_states_are_reported() {
        let s = SlotStates::default();
        assert!(matches!(s.get(Slot::Chi(1)), Err(crate::Error::State(_))));
        assert!(matches!(s.get(Slot::Psi), Err(crate::Error::State(_))));
    }
}
