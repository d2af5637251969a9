//! Grids, scaled states and parameter vectors.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::sqrt;
use crate::C64;

/// Uniform periodic grid on `[x0, x0 + L)` with `2ⁿ` points.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid1D {
    pub n: u32,
    pub length: f64,
    pub x0: f64,
    pub reflected: bool,
}

impl Grid1D {
    pub fn new(n: u32, length: f64, x0: f64, reflected: bool) -> Result<Self> {
        if n == 0 || n > 30 {
            bail!(Domain, "qubit count {n} out of range");
        }
        if !(length > 0.0 && length.is_finite()) || !x0.is_finite() {
            bail!(
                Domain,
                "grid length must be finite and positive, got {length}"
            );
        }
        Ok(Grid1D {
            n,
            length,
            x0,
            reflected,
        })
    }

    pub fn points(&self) -> usize {
        1 << self.n
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points() as f64
    }

    pub fn x(&self, k: usize) -> f64 {
        self.x0 + k as f64 * self.spacing()
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..self.points()).map(|k| self.x(k)).collect()
    }

    /// Number of points carrying the physical (unreflected) domain.
    pub fn physical_points(&self) -> usize {
        if self.reflected {
            self.points() / 2
        } else {
            self.points()
        }
    }
}

/// Tensor-product grid; the flattened index is `kx·2^{ny} + ky`.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Self {
        Grid2D { x, y }
    }

    pub fn points(&self) -> usize {
        self.x.points() * self.y.points()
    }

    pub fn flatten(&self, kx: usize, ky: usize) -> usize {
        (kx << self.y.n) | ky
    }

    pub fn unflatten(&self, k: usize) -> (usize, usize) {
        (k >> self.y.n, k & (self.y.points() - 1))
    }

    /// Flattened indices of the physical quadrant.
    pub fn physical_indices(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for kx in 0..self.x.physical_points() {
            for ky in 0..self.y.physical_points() {
                out.push(self.flatten(kx, ky));
            }
        }
        out
    }
}

/// Spatial axis of a (possibly 2D) grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Axis {
    X,
    Y,
}

/// A 1D or 2D grid.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Grid {
    One(Grid1D),
    Two(Grid2D),
}

impl Grid {
    pub fn points(&self) -> usize {
        match self {
            Grid::One(g) => g.points(),
            Grid::Two(g) => g.points(),
        }
    }

    pub fn qubits(&self) -> u32 {
        match self {
            Grid::One(g) => g.n,
            Grid::Two(g) => g.x.n + g.y.n,
        }
    }

    /// Per-axis grid, or a dimension error for `Y` on a 1D grid.
    pub fn axis(&self, axis: Axis) -> Result<&Grid1D> {
        match (self, axis) {
            (Grid::One(g), Axis::X) => Ok(g),
            (Grid::One(_), Axis::Y) => bail!(Dimension, "y axis requested on a 1D grid"),
            (Grid::Two(g), Axis::X) => Ok(&g.x),
            (Grid::Two(g), Axis::Y) => Ok(&g.y),
        }
    }

    /// `(n_x, n_y)` with `n_y = 0` for 1D grids.
    pub fn layout(&self) -> (u32, u32) {
        match self {
            Grid::One(g) => (g.n, 0),
            Grid::Two(g) => (g.x.n, g.y.n),
        }
    }

    /// Mask selecting the physical (unreflected) part of the domain.
    pub fn physical_mask(&self) -> Vec<bool> {
        match self {
            Grid::One(g) => (0..g.points()).map(|k| k < g.physical_points()).collect(),
            Grid::Two(g) => (0..g.points())
                .map(|k| {
                    let (kx, ky) = g.unflatten(k);
                    kx < g.x.physical_points() && ky < g.y.physical_points()
                })
                .collect(),
        }
    }
}

impl From<Grid1D> for Grid {
    fn from(g: Grid1D) -> Self {
        Grid::One(g)
    }
}

impl From<Grid2D> for Grid {
    fn from(g: Grid2D) -> Self {
        Grid::Two(g)
    }
}

/// Unnormalized vector `scale·psi` with `‖psi‖ = 1`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScaledState {
    pub scale: f64,
    pub psi: Vec<C64>,
}

impl ScaledState {
    /// Checked constructor: `psi` must be unit-norm unless `scale` is zero.
    pub fn new(scale: f64, psi: Vec<C64>) -> Result<Self> {
        if scale != 0.0 {
            let nrm = norm_sq(&psi);
            if (nrm - 1.0).abs() > 1e-12 {
                bail!(Domain, "state norm² {nrm} is not 1");
            }
        }
        Ok(ScaledState { scale, psi })
    }

    pub fn len(&self) -> usize {
        self.psi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.psi.is_empty()
    }

    /// Represented vector `scale·psi`.
    pub fn vector(&self) -> Vec<C64> {
        self.psi.iter().map(|z| z * self.scale).collect()
    }

    /// Same direction with unit scale.
    pub fn unit(&self) -> ScaledState {
        ScaledState {
            scale: 1.0,
            psi: self.psi.clone(),
        }
    }

    /// Real parts of the represented vector.
    pub fn real_values(&self) -> Vec<f64> {
        self.psi.iter().map(|z| z.re * self.scale).collect()
    }
}

/// Scale parameter plus rotation angles.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ParamVector {
    pub scale: f64,
    pub angles: Vec<f64>,
}

impl ParamVector {
    pub fn new(scale: f64, angles: Vec<f64>) -> Self {
        ParamVector { scale, angles }
    }

    pub fn zeros(scale: f64, count: usize) -> Self {
        ParamVector {
            scale,
            angles: vec![0.0; count],
        }
    }

    /// `[scale, angles...]`, the layout seen by optimizers.
    pub fn to_flat(&self) -> Vec<f64> {
        let mut v = Vec::with_capacity(self.angles.len() + 1);
        v.push(self.scale);
        v.extend_from_slice(&self.angles);
        v
    }

    pub fn from_flat(x: &[f64]) -> Self {
        ParamVector {
            scale: x[0],
            angles: x[1..].to_vec(),
        }
    }

    /// Total count including the scale.
    pub fn len(&self) -> usize {
        self.angles.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

/// `⟨a|b⟩` with the left argument conjugated.
pub fn dot(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm_sq(a: &[C64]) -> f64 {
    a.iter().map(|z| z.norm_sqr()).sum()
}

/// `‖a − b‖²` for raw vectors.
pub fn sq_dist(a: &[C64], b: &[C64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum()
}

fn check_len(a: usize, b: usize) -> Result<()> {
    if a != b {
        bail!(Dimension, "lengths {a} and {b} differ");
    }
    Ok(())
}

/// `a.scale·b.scale·⟨a.psi|b.psi⟩`.
pub fn inner(a: &ScaledState, b: &ScaledState) -> Result<C64> {
    check_len(a.len(), b.len())?;
    Ok(dot(&a.psi, &b.psi) * (a.scale * b.scale))
}

/// `‖a.scale·a.psi − b.scale·b.psi‖²`.
pub fn sq_distance(a: &ScaledState, b: &ScaledState) -> Result<f64> {
    check_len(a.len(), b.len())?;
    Ok(a.psi
        .iter()
        .zip(&b.psi)
        .map(|(x, y)| (x * a.scale - y * b.scale).norm_sqr())
        .sum())
}

/// Split a raw vector into norm and direction; the zero vector maps to `(0, e₀)`.
pub fn normalize(v: &[C64]) -> ScaledState {
    let nrm = sqrt(norm_sq(v));
    if nrm == 0.0 || !nrm.is_finite() {
        let mut psi = vec![C64::new(0.0, 0.0); v.len()];
        if let Some(first) = psi.first_mut() {
            *first = C64::new(1.0, 0.0);
        }
        return ScaledState { scale: 0.0, psi };
    }
    ScaledState {
        scale: nrm,
        psi: v.iter().map(|z| z / nrm).collect(),
    }
}

/// Sample `f` at every gridpoint of a 1D grid.
pub fn sample_1d<F: Fn(f64) -> f64>(grid: &Grid1D, f: F) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(grid.points());
    for k in 0..grid.points() {
        let x = grid.x(k);
        let v = f(x);
        if !v.is_finite() {
            bail!(Domain, "non-finite sample at x = {x}");
        }
        out.push(C64::new(v, 0.0));
    }
    Ok(out)
}

/// Sample `f(x, y)` on a 2D grid in flattened order.
pub fn sample_2d<F: Fn(f64, f64) -> f64>(grid: &Grid2D, f: F) -> Result<Vec<C64>> {
    let mut out = Vec::with_capacity(grid.points());
    for kx in 0..grid.x.points() {
        for ky in 0..grid.y.points() {
            let (x, y) = (grid.x.x(kx), grid.y.x(ky));
            let v = f(x, y);
            if !v.is_finite() {
                bail!(Domain, "non-finite sample at ({x}, {y})");
            }
            out.push(C64::new(v, 0.0));
        }
    }
    Ok(out)
}

/// Real parts of a complex vector.
pub fn re(v: &[C64]) -> Vec<f64> {
    v.iter().map(|z| z.re).collect()
}

/// Lift a real vector into complex storage.
pub fn complexify(v: &[f64]) -> Vec<C64> {
    v.iter().map(|&x| C64::new(x, 0.0)).collect()
}

pub(crate) fn fmt_len(expected: usize, got: usize) -> alloc::string::String {
    format!("expected length {expected}, got {got}")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn e(k: usize, n: usize) -> Vec<C64> {
        let mut v = vec![C64::new(0.0, 0.0); n];
        v[k] = C64::new(1.0, 0.0);
        v
    }

    #[test]
    fn inner_basics() {
        let a = ScaledState::new(1.0, e(0, 4)).unwrap();
        assert_eq!(inner(&a, &a).unwrap(), C64::new(1.0, 0.0));
        let a = ScaledState::new(2.0, e(0, 4)).unwrap();
        let b = ScaledState::new(3.0, e(1, 4)).unwrap();
        assert_eq!(inner(&a, &b).unwrap(), C64::new(0.0, 0.0));
        let c = ScaledState::new(1.0, e(0, 8)).unwrap();
        assert!(matches!(inner(&a, &c), Err(crate::Error::Dimension(_))));
    }

    #[test]
    fn sq_distance_antipodal() {
        let a = ScaledState::new(1.0, e(0, 2)).unwrap();
        let b = ScaledState::new(-1.0, e(0, 2)).unwrap();
        assert!((sq_distance(&a, &b).unwrap() - 4.0).abs() < 1e-15);
        assert_eq!(sq_distance(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn normalize_examples() {
        let v = complexify(&[3.0, 4.0, 0.0, 0.0]);
        let s = normalize(&v);
        assert!((s.scale - 5.0).abs() < 1e-15);
        assert!((s.psi[0].re - 0.6).abs() < 1e-15 && (s.psi[1].re - 0.8).abs() < 1e-15);
        let z = normalize(&[C64::new(0.0, 0.0); 4]);
        assert_eq!(z.scale, 0.0);
        assert_eq!(z.psi[0], C64::new(1.0, 0.0));
    }

    #[test]
    fn sampling_conventions() {
        let g = Grid1D::new(2, 1.0, 0.0, false).unwrap();
        assert_eq!(re(&sample_1d(&g, |_| 1.0).unwrap()), vec![1.0; 4]);
        assert!(sample_1d(&g, |x| 1.0 / x).is_err());

        let gx = Grid1D::new(1, 2.0, 0.0, false).unwrap();
        let gy = Grid1D::new(1, 4.0, 1.0, false).unwrap();
        let g2 = Grid2D::new(gx, gy);
        let v = re(&sample_2d(&g2, |x, y| x * y).unwrap());
        let mut oracle = Vec::new();
        for x in [0.0, 1.0] {
            for y in [1.0, 3.0] {
                oracle.push(x * y);
            }
        }
        assert_eq!(v, oracle);
    }

    #[test]
    fn put_payoff_kink() {
        let l = 4.0 * 135f64.ln();
        let g = Grid1D::new(8, l, -135f64.ln(), true).unwrap();
        let v = re(&sample_1d(&g, |x| (50.0 - x.exp()).max(0.0)).unwrap());
        let kink = (0..g.points()).find(|&k| v[k] == 0.0).unwrap();
        assert!(g.x(kink - 1) < 50f64.ln() && g.x(kink) >= 50f64.ln());
    }

    #[test]
    fn flatten_bijection_exhaustive() {
        for nx in 1..=4 {
            for ny in 1..=4 {
                let g = Grid2D::new(
                    Grid1D::new(nx, 1.0, 0.0, false).unwrap(),
                    Grid1D::new(ny, 1.0, 0.0, false).unwrap(),
                );
                for k in 0..g.points() {
                    let (kx, ky) = g.unflatten(k);
                    assert_eq!(ky, k % (1 << ny));
                    assert_eq!(kx, k / (1 << ny));
                    assert_eq!(g.flatten(kx, ky), k);
                }
            }
        }
    }
}
