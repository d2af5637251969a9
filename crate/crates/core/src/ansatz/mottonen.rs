//! Uniformly-controlled rotation cascade (Möttönen state preparation).
//!
//! Angles are stored level by level: level `j` rotates qubit `j` (qubit 0 is
//! the most significant bit) conditioned on the `j`-bit prefix, so it holds
//! `2^j` angles starting at offset `2^j − 1`.

use alloc::vec;
use alloc::vec::Vec;

use crate::math::{atan2, sincos, sqrt};
use crate::C64;

/// Amplitudes produced by the cascade on `q` qubits with global phase `alpha`.
pub fn prepare(ry: &[f64], rz: &[f64], alpha: f64, q: u32) -> Vec<C64> {
    let size = 1usize << q;
    debug_assert_eq!(ry.len(), size - 1);
    debug_assert_eq!(rz.len(), size - 1);
    let (s, c) = sincos(alpha);
    let mut amps = vec![C64::new(0.0, 0.0); size];
    amps[0] = C64::new(c, s);
    for j in 0..q as usize {
        let nodes = 1usize << j;
        let off = nodes - 1;
        // expand in place from the back so parents are read before overwrite
        for p in (0..nodes).rev() {
            let parent = amps[p];
            let (sb, cb) = sincos(0.5 * ry[off + p]);
            let (sz, cz) = sincos(0.5 * rz[off + p]);
            amps[2 * p] = parent * C64::new(cb * cz, -cb * sz);
            amps[2 * p + 1] = parent * C64::new(sb * cz, sb * sz);
        }
    }
    amps
}

/// Inverse map: angles reproducing `state` exactly (up to its norm).
///
/// Returns `(ry, rz, alpha)`; phases of zero amplitudes are taken as 0.
pub fn angles(state: &[C64]) -> (Vec<f64>, Vec<f64>, f64) {
    let size = state.len();
    assert!(size.is_power_of_two());
    let q = size.trailing_zeros() as usize;
    let mut ry = vec![0.0; size - 1];
    let mut rz = vec![0.0; size - 1];
    let mut norms: Vec<f64> = state.iter().map(|z| z.norm_sqr()).collect();
    let mut phases: Vec<f64> = state
        .iter()
        .map(|z| {
            if z.norm_sqr() > 0.0 {
                atan2(z.im, z.re)
            } else {
                0.0
            }
        })
        .collect();
    for j in (0..q).rev() {
        let nodes = 1usize << j;
        let off = nodes - 1;
        let mut next_norms = vec![0.0; nodes];
        let mut next_phases = vec![0.0; nodes];
        for p in 0..nodes {
            let (l, r) = (norms[2 * p], norms[2 * p + 1]);
            ry[off + p] = 2.0 * atan2(sqrt(r), sqrt(l));
            rz[off + p] = phases[2 * p + 1] - phases[2 * p];
            next_norms[p] = l + r;
            next_phases[p] = 0.5 * (phases[2 * p] + phases[2 * p + 1]);
        }
        norms = next_norms;
        phases = next_phases;
    }
    (ry, rz, phases[0])
}

/// Phase `Σ_j rz_j(0)/2` that cancels the cascade's phase on `|0…0⟩`.
pub fn zero_phase_alpha(rz: &[f64], q: u32) -> f64 {
    (0..q).map(|j| 0.5 * rz[(1usize << j) - 1]).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::norm_sq;

    #[test]
    fn zero_angles_give_ground_state() {
        let a = prepare(&[0.0; 7], &[0.0; 7], 0.0, 3);
        assert_eq!(a[0], C64::new(1.0, 0.0));
        assert!(a[1..].iter().all(|z| z.norm() == 0.0));
    }

    #[test]
    fn round_trip_random_states() {
        let mut seed = 12345u64;
        let mut next = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        for q in 1..=5 {
            let size = 1 << q;
            let mut s: Vec<C64> = (0..size).map(|_| C64::new(next(), next())).collect();
            let nrm = norm_sq(&s).sqrt();
            s.iter_mut().for_each(|z| *z /= nrm);
            let (ry, rz, alpha) = angles(&s);
            let back = prepare(&ry, &rz, alpha, q);
            for (a, b) in s.iter().zip(&back) {
                assert!((a - b).norm() < 1e-12, "q={q}");
            }
        }
    }

    #[test]
    fn conjugate_by_negating_phases() {
        let ry = [0.3, -1.1, 0.7];
        let rz = [0.4, 1.3, -0.2];
        let a = prepare(&ry, &rz, 0.25, 2);
        let b = prepare(&ry, &rz.map(|x| -x), -0.25, 2);
        for (x, y) in a.iter().zip(&b) {
            assert!((x.conj() - y).norm() < 1e-15);
        }
    }

    #[test]
    fn zero_phase_alpha_makes_first_amplitude_real() {
        let ry = [0.3, -1.1, 0.7];
        let rz = [0.4, 1.3, -0.2];
        let a = prepare(&ry, &rz, zero_phase_alpha(&rz, 2), 2);
        assert!(a[0].im.abs() < 1e-15);
    }
}
