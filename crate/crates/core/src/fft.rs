//! Radix-2 FFT used by the Fourier ansatz and spectral oracles.
//!
//! `forward` computes `X_k = Σ_j x_j e^{-2πi jk/N}`, `inverse` the
//! unnormalized transform with the opposite sign.

use alloc::vec::Vec;

use crate::math::{sincos, PI};
use crate::C64;

#[derive(Debug, Clone)]
pub struct FftPlan {
    n: usize,
    twiddles: Vec<C64>,
    rev: Vec<u32>,
}

impl FftPlan {
    /// Plan for length `n`, which must be a power of two.
    pub fn new(n: usize) -> Self {
        assert!(n.is_power_of_two(), "fft length must be a power of two");
        let bits = n.trailing_zeros();
        let twiddles = (0..n / 2)
            .map(|k| {
                let (s, c) = sincos(-2.0 * PI * k as f64 / n as f64);
                C64::new(c, s)
            })
            .collect();
        let rev = (0..n as u32)
            .map(|i| {
                if bits == 0 {
                    0
                } else {
                    i.reverse_bits() >> (32 - bits)
                }
            })
            .collect();
        FftPlan { n, twiddles, rev }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn forward(&self, data: &mut [C64]) {
        self.run(data, false);
    }

    pub fn inverse(&self, data: &mut [C64]) {
        self.run(data, true);
    }

    /// Transform `data` viewed as `count` contiguous rows of length `n`.
    pub fn forward_rows(&self, data: &mut [C64]) {
        for row in data.chunks_exact_mut(self.n) {
            self.run(row, false);
        }
    }

    fn run(&self, data: &mut [C64], inverse: bool) {
        let n = self.n;
        debug_assert_eq!(data.len(), n);
        for i in 0..n {
            let j = self.rev[i] as usize;
            if i < j {
                data.swap(i, j);
            }
        }
        let mut half = 1;
        while half < n {
            let stride = n / (2 * half);
            for start in (0..n).step_by(2 * half) {
                for k in 0..half {
                    let mut w = self.twiddles[k * stride];
                    if inverse {
                        w = w.conj();
                    }
                    let a = data[start + k];
                    let b = data[start + k + half] * w;
                    data[start + k] = a + b;
                    data[start + k + half] = a - b;
                }
            }
            half *= 2;
        }
    }
}

/// 2D forward transform of a row-major `nx × ny` array (x most significant).
pub fn forward_2d(data: &mut [C64], plan_x: &FftPlan, plan_y: &FftPlan) {
    let (nx, ny) = (plan_x.len(), plan_y.len());
    plan_y.forward_rows(data);
    let mut col = alloc::vec![C64::new(0.0, 0.0); nx];
    for ky in 0..ny {
        for kx in 0..nx {
            col[kx] = data[kx * ny + ky];
        }
        plan_x.forward(&mut col);
        for kx in 0..nx {
            data[kx * ny + ky] = col[kx];
        }
    }
}

/// 2D unnormalized inverse transform.
pub fn inverse_2d(data: &mut [C64], plan_x: &FftPlan, plan_y: &FftPlan) {
    for v in data.iter_mut() {
        *v = v.conj();
    }
    forward_2d(data, plan_x, plan_y);
    for v in data.iter_mut() {
        *v = v.conj();
    }
}
