//! Adder/Diagonal operator algebra and finite-difference operators.
//!
//! The Adder `Â` acts as `(Âᵖψ)_k = ψ_{k+p mod N}` along an axis; a Diagonal
//! factor multiplies pointwise by the represented amplitudes of a frozen state.
//! Words apply right to left.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::state::{dot, Axis, Grid, ScaledState};
use crate::C64;

/// Qubit layout `(n_x, n_y)`; `n_y = 0` for 1D.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Dims {
    pub nx: u32,
    pub ny: u32,
}

impl Dims {
    pub fn of(grid: &Grid) -> Dims {
        let (nx, ny) = grid.layout();
        Dims { nx, ny }
    }

    pub fn one(n: u32) -> Dims {
        Dims { nx: n, ny: 0 }
    }

    pub fn len(&self) -> usize {
        1 << (self.nx + self.ny)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    fn axis_len(&self, axis: Axis) -> Result<usize> {
        match axis {
            Axis::X => Ok(1 << self.nx),
            Axis::Y if self.ny > 0 => Ok(1 << self.ny),
            Axis::Y => bail!(Dimension, "y axis used on a 1D layout"),
        }
    }
}

/// Primitive factor of an operator word.
#[derive(Debug, Clone)]
pub enum Factor {
    Identity,
    /// `Âᵖ` along an axis; negative powers are adjoints.
    Adder {
        axis: Axis,
        power: i64,
    },
    /// `D̂ᵖ_β` with `values = β.scale·β.psi`, optionally conjugated.
    Diag {
        values: Arc<[C64]>,
        power: u32,
        conjugated: bool,
    },
}

impl Factor {
    pub fn adder(axis: Axis, power: i64) -> Factor {
        Factor::Adder { axis, power }
    }

    pub fn diag(state: &ScaledState, power: u32) -> Factor {
        Factor::Diag {
            values: state.vector().into(),
            power,
            conjugated: false,
        }
    }

    pub fn diag_values(values: Arc<[C64]>, power: u32) -> Factor {
        Factor::Diag {
            values,
            power,
            conjugated: false,
        }
    }
}

/// `coeff · f₁ f₂ … f_k` acting right to left.
#[derive(Debug, Clone)]
pub struct OperatorWord {
    pub coeff: C64,
    pub factors: Vec<Factor>,
}

impl OperatorWord {
    pub fn new(coeff: f64, factors: Vec<Factor>) -> Self {
        OperatorWord {
            coeff: C64::new(coeff, 0.0),
            factors,
        }
    }

    pub fn identity(coeff: f64) -> Self {
        OperatorWord::new(coeff, Vec::new())
    }

    /// Apply to `buf` in place, ignoring `coeff`.
    pub fn apply_factors(&self, buf: &mut [C64], dims: Dims) -> Result<()> {
        for f in self.factors.iter().rev() {
            match f {
                Factor::Identity => {}
                Factor::Adder { axis, power } => adder_in_place(buf, *power, *axis, dims)?,
                Factor::Diag {
                    values,
                    power,
                    conjugated,
                } => {
                    if values.len() != buf.len() {
                        bail!(
                            Dimension,
                            "diagonal factor of length {} on vector of length {}",
                            values.len(),
                            buf.len()
                        );
                    }
                    diag_in_place(buf, values, *power, *conjugated);
                }
            }
        }
        Ok(())
    }
}

/// Linear combination of words over one layout.
#[derive(Debug, Clone)]
pub struct OperatorSum {
    pub dims: Dims,
    pub words: Vec<OperatorWord>,
}

impl OperatorSum {
    pub fn zero(dims: Dims) -> Self {
        OperatorSum {
            dims,
            words: Vec::new(),
        }
    }

    pub fn identity(dims: Dims) -> Self {
        OperatorSum {
            dims,
            words: vec![OperatorWord::identity(1.0)],
        }
    }

    pub fn from_words(dims: Dims, words: Vec<OperatorWord>) -> Self {
        OperatorSum { dims, words }
    }

    /// `c·Dᵖ_β` as a single-word sum.
    pub fn diagonal(dims: Dims, values: Arc<[C64]>, power: u32, c: f64) -> Self {
        OperatorSum {
            dims,
            words: vec![OperatorWord::new(
                c,
                vec![Factor::diag_values(values, power)],
            )],
        }
    }

    pub fn scaled(mut self, c: f64) -> Self {
        for w in &mut self.words {
            w.coeff *= c;
        }
        self
    }

    pub fn plus(mut self, other: OperatorSum) -> Self {
        debug_assert_eq!(self.dims, other.dims);
        self.words.extend(other.words);
        self
    }

    /// Operator product `self · other` (other acts first).
    pub fn compose(&self, other: &OperatorSum) -> OperatorSum {
        let mut words = Vec::with_capacity(self.words.len() * other.words.len());
        for a in &self.words {
            for b in &other.words {
                let mut factors = a.factors.clone();
                factors.extend(b.factors.iter().cloned());
                words.push(OperatorWord {
                    coeff: a.coeff * b.coeff,
                    factors,
                });
            }
        }
        OperatorSum {
            dims: self.dims,
            words,
        }
    }

    /// Matrix-free application to a raw vector.
    pub fn apply(&self, v: &[C64]) -> Result<Vec<C64>> {
        if v.len() != self.dims.len() {
            bail!(
                Dimension,
                "operator on {} points applied to length {}",
                self.dims.len(),
                v.len()
            );
        }
        let mut out = vec![C64::new(0.0, 0.0); v.len()];
        let mut buf = vec![C64::new(0.0, 0.0); v.len()];
        for w in &self.words {
            buf.copy_from_slice(v);
            w.apply_factors(&mut buf, self.dims)?;
            for (o, b) in out.iter_mut().zip(&buf) {
                *o += w.coeff * b;
            }
        }
        Ok(out)
    }

    /// Dense matrix (row-major), built column by column from basis vectors.
    pub fn to_dense(&self) -> Result<Vec<C64>> {
        let n = self.dims.len();
        let mut m = vec![C64::new(0.0, 0.0); n * n];
        let mut e = vec![C64::new(0.0, 0.0); n];
        for j in 0..n {
            e[j] = C64::new(1.0, 0.0);
            let col = self.apply(&e)?;
            for i in 0..n {
                m[i * n + j] = col[i];
            }
            e[j] = C64::new(0.0, 0.0);
        }
        Ok(m)
    }
}

fn adder_in_place(buf: &mut [C64], power: i64, axis: Axis, dims: Dims) -> Result<()> {
    let len = dims.axis_len(axis)?;
    let shift = power.rem_euclid(len as i64) as usize;
    if shift == 0 {
        return Ok(());
    }
    match axis {
        Axis::X => buf.rotate_left(shift << dims.ny),
        Axis::Y => {
            for row in buf.chunks_exact_mut(len) {
                row.rotate_left(shift);
            }
        }
    }
    Ok(())
}

fn diag_in_place(buf: &mut [C64], values: &[C64], power: u32, conjugated: bool) {
    for (b, &d) in buf.iter_mut().zip(values) {
        let d = if conjugated { d.conj() } else { d };
        let mut f = d;
        for _ in 1..power {
            f *= d;
        }
        *b *= f;
    }
}

/// `Âᵖ` applied along `axis`.
pub fn apply_adder(state: &[C64], power: i64, axis: Axis, grid: &Grid) -> Result<Vec<C64>> {
    let dims = Dims::of(grid);
    if state.len() != dims.len() {
        bail!(
            Dimension,
            "{}",
            crate::state::fmt_len(dims.len(), state.len())
        );
    }
    let mut out = state.to_vec();
    adder_in_place(&mut out, power, axis, dims)?;
    Ok(out)
}

/// `(β.scale·β.psi_k)ᵖ · α_k`, conjugating the β factor if flagged.
pub fn apply_diagonal(
    beta: &ScaledState,
    alpha: &[C64],
    power: u32,
    conjugated: bool,
) -> Result<Vec<C64>> {
    if beta.len() != alpha.len() {
        bail!(
            Dimension,
            "{}",
            crate::state::fmt_len(beta.len(), alpha.len())
        );
    }
    if power == 0 {
        bail!(Parameter, "diagonal power must be at least 1");
    }
    let mut out = alpha.to_vec();
    diag_in_place(&mut out, &beta.vector(), power, conjugated);
    Ok(out)
}

/// `(2^{n−1}/L)(Â − Â†)` on one axis.
pub fn d_dx(grid: &Grid, axis: Axis) -> Result<OperatorSum> {
    let g = grid.axis(axis)?;
    let a = (1u64 << (g.n - 1)) as f64 / g.length;
    Ok(OperatorSum::from_words(
        Dims::of(grid),
        vec![
            OperatorWord::new(a, vec![Factor::adder(axis, 1)]),
            OperatorWord::new(-a, vec![Factor::adder(axis, -1)]),
        ],
    ))
}

/// `(4ⁿ/L²)(Â + Â† − 2)` on one axis.
pub fn d2_dx2(grid: &Grid, axis: Axis) -> Result<OperatorSum> {
    let g = grid.axis(axis)?;
    let b = second_coeff(g.n, g.length);
    Ok(OperatorSum::from_words(
        Dims::of(grid),
        vec![
            OperatorWord::new(b, vec![Factor::adder(axis, 1)]),
            OperatorWord::new(b, vec![Factor::adder(axis, -1)]),
            OperatorWord::identity(-2.0 * b),
        ],
    ))
}

/// Mixed derivative `∂x ∂y` as the product of the two first-derivative sums.
pub fn d2_dxdy(grid: &Grid) -> Result<OperatorSum> {
    if !matches!(grid, Grid::Two(_)) {
        bail!(Dimension, "mixed derivative needs a 2D grid");
    }
    Ok(d_dx(grid, Axis::X)?.compose(&d_dx(grid, Axis::Y)?))
}

/// First-derivative prefactor `2^{n−1}/L`.
pub fn first_coeff(n: u32, length: f64) -> f64 {
    (1u64 << (n - 1)) as f64 / length
}

/// Second-derivative prefactor `4ⁿ/L²`.
pub fn second_coeff(n: u32, length: f64) -> f64 {
    let two_n = (1u64 << n) as f64;
    two_n * two_n / (length * length)
}

/// `op` applied to the represented vector of `state`.
pub fn apply_sum(op: &OperatorSum, state: &ScaledState) -> Result<Vec<C64>> {
    op.apply(&state.vector())
}

/// `⟨left|word|right⟩` including both scales and the word coefficient.
pub fn expectation(
    word: &OperatorWord,
    dims: Dims,
    left: &ScaledState,
    right: &ScaledState,
) -> Result<C64> {
    if left.len() != right.len() || left.len() != dims.len() {
        bail!(
            Dimension,
            "expectation over lengths {} and {}",
            left.len(),
            right.len()
        );
    }
    let mut buf = right.psi.clone();
    word.apply_factors(&mut buf, dims)?;
    Ok(dot(&left.psi, &buf) * word.coeff * (left.scale * right.scale))
}
