//! Universal layered ansatz: staggered bricks of SO(4) blocks.
//!
//! Each layer is sub-column A on pairs `(0,1),(2,3),…` followed by sub-column
//! B on `(1,2),(3,4),…`. A block with angles `θ₁…θ₆` applies
//! `Ry(θ₁)⊗Ry(θ₂)`, CNOT (top controls bottom), `Ry(θ₃)⊗Ry(θ₄)`, CNOT,
//! `Ry(θ₅)⊗Ry(θ₆)`. Qubit 0 is the most significant bit.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{bail, Result};
use crate::math::sincos;
use crate::state::{ParamVector, ScaledState};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct UlaSpec {
    pub n: u32,
    pub d: u32,
}

impl UlaSpec {
    pub fn new(n: u32, d: u32) -> Result<Self> {
        if n < 2 {
            bail!(Parameter, "ULA needs at least two qubits");
        }
        Ok(UlaSpec { n, d })
    }

    pub fn angle_count(&self) -> usize {
        6 * (self.n as usize - 1) * self.d as usize
    }

    /// Top qubits of the blocks of one layer, in parameter order.
    pub fn block_tops(&self) -> Vec<u32> {
        let n = self.n;
        (0..n - 1).step_by(2).chain((1..n - 1).step_by(2)).collect()
    }

    /// Real amplitudes of the unscaled state.
    pub fn real_amplitudes(&self, angles: &[f64]) -> Result<Vec<f64>> {
        if angles.len() != self.angle_count() {
            bail!(
                Parameter,
                "ULA expects {} angles, got {}",
                self.angle_count(),
                angles.len()
            );
        }
        let mut v = vec![0.0; 1 << self.n];
        v[0] = 1.0;
        let tops = self.block_tops();
        for (b, th) in angles.chunks_exact(6).enumerate() {
            let top = tops[b % tops.len()];
            apply_block(&mut v, self.n, top, &block_matrix(th));
        }
        Ok(v)
    }

    pub fn amplitudes(&self, params: &ParamVector) -> Result<ScaledState> {
        let v = self.real_amplitudes(&params.angles)?;
        Ok(ScaledState {
            scale: params.scale,
            psi: v.into_iter().map(|x| C64::new(x, 0.0)).collect(),
        })
    }
}

fn ry(theta: f64) -> [[f64; 2]; 2] {
    let (s, c) = sincos(0.5 * theta);
    [[c, -s], [s, c]]
}

/// `a ⊗ b` with `a` on the more significant qubit.
fn kron(a: [[f64; 2]; 2], b: [[f64; 2]; 2]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = a[i >> 1][j >> 1] * b[i & 1][j & 1];
        }
    }
    m
}

fn matmul(a: &[[f64; 4]; 4], b: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    let mut m = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            m[i][j] = (0..4).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    m
}

/// CNOT with the top (more significant) qubit as control: swaps rows 2 and 3.
fn cnot_left(m: &[[f64; 4]; 4]) -> [[f64; 4]; 4] {
    [m[0], m[1], m[3], m[2]]
}

/// 4×4 matrix of one SO(4) block, basis order `|top bottom⟩`.
pub fn block_matrix(th: &[f64]) -> [[f64; 4]; 4] {
    let mut m = kron(ry(th[0]), ry(th[1]));
    m = cnot_left(&m);
    m = matmul(&kron(ry(th[2]), ry(th[3])), &m);
    m = cnot_left(&m);
    matmul(&kron(ry(th[4]), ry(th[5])), &m)
}

fn apply_block(v: &mut [f64], n: u32, top: u32, m: &[[f64; 4]; 4]) {
    let hi = 1usize << (n - 1 - top);
    let lo = hi >> 1;
    for base in 0..v.len() {
        if base & (hi | lo) != 0 {
            continue;
        }
        let idx = [base, base | lo, base | hi, base | hi | lo];
        let x = [v[idx[0]], v[idx[1]], v[idx[2]], v[idx[3]]];
        for (r, &i) in idx.iter().enumerate() {
            v[i] = m[r][0] * x[0] + m[r][1] * x[1] + m[r][2] * x[2] + m[r][3] * x[3];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_match_brick_layout() {
        assert_eq!(UlaSpec::new(8, 6).unwrap().angle_count() + 1, 253);
        assert_eq!(UlaSpec::new(5, 1).unwrap().block_tops(), vec![0, 2, 1, 3]);
        assert_eq!(
            UlaSpec::new(8, 1).unwrap().block_tops(),
            vec![0, 2, 4, 6, 1, 3, 5]
        );
    }

    #[test]
    fn zero_angles_leave_ground_state() {
        let spec = UlaSpec::new(5, 3).unwrap();
        let v = spec
            .real_amplitudes(&vec![0.0; spec.angle_count()])
            .unwrap();
        assert_eq!(v[0], 1.0);
        assert!(v[1..].iter().all(|&x| x == 0.0));
    }

    #[test]
    fn two_qubit_block_matches_matrix_chain() {
        // explicit chain with dense 4×4 gates
        let th = [0.3, -1.1, 0.7, 2.2, -0.4, 0.9];
        let spec = UlaSpec::new(2, 1).unwrap();
        let got = spec.real_amplitudes(&th).unwrap();
        let cnot = [
            [1.0, 0.0, 0.0, 0.0],
            [0.0, 1.0, 0.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
            [0.0, 0.0, 1.0, 0.0],
        ];
        let mut u = kron(ry(th[0]), ry(th[1]));
        u = matmul(&cnot, &u);
        u = matmul(&kron(ry(th[2]), ry(th[3])), &u);
        u = matmul(&cnot, &u);
        u = matmul(&kron(ry(th[4]), ry(th[5])), &u);
        for i in 0..4 {
            assert!((got[i] - u[i][0]).abs() < 1e-12);
        }
    }

    #[test]
    fn bottom_qubit_is_least_significant() {
        // Ry(π) on the bottom qubit only flips the last bit
        let mut th = [0.0; 6];
        th[1] = core::f64::consts::PI;
        let v = UlaSpec::new(2, 1).unwrap().real_amplitudes(&th).unwrap();
        assert!((v[1] - 1.0).abs() < 1e-12);
    }
}
