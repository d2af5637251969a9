//! ZGR-QFT Fourier ansatz: a coefficient register prepared by the Möttönen
//! cascade, embedded into the frequency grid and mapped to real space by an
//! inverse QFT.
//!
//! Angle layout (register of `q` qubits): `2^q − 1` Ry angles, `2^q − 1` Rz
//! angles, the global phase α, and one padding slot. The reported count is
//! therefore `2^{q+1}`. For `Real1d` the register holds `c₀/√2, c₁, …, c_{M−1}`
//! and α is pinned to the value making the `|0⟩` amplitude real, so both α and
//! the padding slot are inert.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use super::mottonen;
use crate::error::{bail, Result};
use crate::fft::{forward_2d, inverse_2d, FftPlan};
use crate::math::{sqrt, SQRT_2};
use crate::state::{norm_sq, ParamVector, ScaledState};
use crate::C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "snake_case"))]
pub enum ZgrKind {
    /// Real-valued 1D series with frequencies `0..M`.
    Real1d,
    /// Complex 1D series with frequencies `−M..M`.
    Complex1d,
    /// Complex 2D series with frequencies `−Mx..Mx × −My..My`.
    Complex2d { nx: u32, mx: u32, ny: u32, my: u32 },
}

/// Fourier coefficients in register order.
///
/// `Real1d`: `c_0 … c_{M−1}`. `Complex1d`: index `j` holds frequency `j` for
/// `j < M`, else `j − 2M`. `Complex2d`: row-major over the two registers.
#[derive(Debug, Clone, PartialEq)]
pub struct FourierCoefficients {
    pub c: Vec<C64>,
}

#[derive(Debug)]
struct Plans {
    x: FftPlan,
    y: Option<FftPlan>,
}

#[derive(Debug, Clone)]
pub struct ZgrQftSpec {
    pub n: u32,
    pub m: u32,
    pub kind: ZgrKind,
    plans: Arc<Plans>,
}

impl PartialEq for ZgrQftSpec {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.m == other.m && self.kind == other.kind
    }
}

impl ZgrQftSpec {
    pub fn real_1d(n: u32, m: u32) -> Result<Self> {
        if n < 2 || m + 2 > n {
            bail!(Parameter, "real ZGR-QFT needs m ≤ n − 2 (n={n}, m={m})");
        }
        Ok(Self::build(n, m, ZgrKind::Real1d))
    }

    pub fn complex_1d(n: u32, m: u32) -> Result<Self> {
        if m + 1 > n {
            bail!(Parameter, "complex ZGR-QFT needs m + 1 ≤ n (n={n}, m={m})");
        }
        Ok(Self::build(n, m, ZgrKind::Complex1d))
    }

    pub fn complex_2d(nx: u32, mx: u32, ny: u32, my: u32) -> Result<Self> {
        if mx + 1 > nx || my + 1 > ny {
            bail!(Parameter, "2D ZGR-QFT needs m + 1 ≤ n per axis");
        }
        Ok(Self::build(
            nx + ny,
            mx + my,
            ZgrKind::Complex2d { nx, mx, ny, my },
        ))
    }

    fn build(n: u32, m: u32, kind: ZgrKind) -> Self {
        let plans = match kind {
            ZgrKind::Complex2d { nx, ny, .. } => Plans {
                x: FftPlan::new(1 << nx),
                y: Some(FftPlan::new(1 << ny)),
            },
            _ => Plans {
                x: FftPlan::new(1 << n),
                y: None,
            },
        };
        ZgrQftSpec {
            n,
            m,
            kind,
            plans: Arc::new(plans),
        }
    }

    /// Qubits of the coefficient register.
    pub fn register_qubits(&self) -> u32 {
        match self.kind {
            ZgrKind::Real1d => self.m,
            ZgrKind::Complex1d => self.m + 1,
            ZgrKind::Complex2d { mx, my, .. } => mx + my + 2,
        }
    }

    pub fn angle_count(&self) -> usize {
        2 << self.register_qubits()
    }

    fn rotations(&self) -> usize {
        (1 << self.register_qubits()) - 1
    }

    pub fn alpha_index(&self) -> usize {
        2 * self.rotations()
    }

    /// Angle slots that carry no degree of freedom.
    pub fn inert_slots(&self) -> Vec<usize> {
        let a = self.alpha_index();
        match self.kind {
            ZgrKind::Real1d => vec![a, a + 1],
            _ => vec![a + 1],
        }
    }

    fn check(&self, angles: &[f64]) -> Result<()> {
        if angles.len() != self.angle_count() {
            bail!(
                Parameter,
                "ZGR-QFT expects {} angles, got {}",
                self.angle_count(),
                angles.len()
            );
        }
        Ok(())
    }

    /// Unit register state produced by the cascade.
    fn register_state(&self, angles: &[f64]) -> Vec<C64> {
        let q = self.register_qubits();
        let r = self.rotations();
        let (ry, rz) = (&angles[..r], &angles[r..2 * r]);
        let alpha = match self.kind {
            ZgrKind::Real1d => mottonen::zero_phase_alpha(rz, q),
            _ => angles[2 * r],
        };
        mottonen::prepare(ry, rz, alpha, q)
    }

    /// Fourier coefficients encoded by `angles` (normalized so `𝒩_c = 1`).
    pub fn coeffs_from_params(&self, angles: &[f64]) -> Result<FourierCoefficients> {
        self.check(angles)?;
        let mut c = self.register_state(angles);
        if self.kind == ZgrKind::Real1d {
            c[0] = C64::new(SQRT_2 * c[0].re, 0.0);
        }
        Ok(FourierCoefficients { c })
    }

    /// Angles encoding `coeffs` and the sign that must multiply the scale.
    ///
    /// For `Real1d` a negative `c₀` is absorbed by flipping every coefficient.
    pub fn params_from_coeffs(&self, coeffs: &FourierCoefficients) -> Result<(Vec<f64>, f64)> {
        let q = self.register_qubits();
        if coeffs.c.len() != 1 << q {
            bail!(
                Parameter,
                "expected {} coefficients, got {}",
                1 << q,
                coeffs.c.len()
            );
        }
        let mut s = coeffs.c.clone();
        let mut sign = 1.0;
        if self.kind == ZgrKind::Real1d {
            if s[0].re < 0.0 {
                sign = -1.0;
                s.iter_mut().for_each(|z| *z = -*z);
            }
            s[0] = C64::new(s[0].re / SQRT_2, 0.0);
        }
        let nrm = sqrt(norm_sq(&s));
        if nrm == 0.0 {
            return Ok((vec![0.0; self.angle_count()], 1.0));
        }
        s.iter_mut().for_each(|z| *z /= nrm);
        let (ry, rz, alpha) = mottonen::angles(&s);
        let mut angles = ry;
        angles.extend(rz);
        angles.push(alpha);
        angles.push(0.0);
        Ok((angles, sign))
    }

    /// Embed register amplitudes into the frequency grid (`|ψ_f⟩`).
    fn embed(&self, c: &[C64]) -> Vec<C64> {
        let zero = C64::new(0.0, 0.0);
        match self.kind {
            ZgrKind::Real1d => {
                let n = 1usize << self.n;
                let mut v = vec![zero; n];
                v[0] = c[0];
                for k in 1..c.len() {
                    v[k] = c[k];
                    v[n - k] = c[k].conj();
                }
                v
            }
            ZgrKind::Complex1d => {
                let n = 1usize << self.n;
                let mm = 1usize << self.m;
                let mut v = vec![zero; n];
                for (j, z) in c.iter().enumerate() {
                    let k = if j < mm { j } else { n + j - 2 * mm };
                    v[k] = *z;
                }
                v
            }
            ZgrKind::Complex2d { nx, mx, ny, my } => {
                let (gx, gy) = (1usize << nx, 1usize << ny);
                let (mxx, myy) = (1usize << mx, 1usize << my);
                let mut v = vec![zero; gx * gy];
                for jx in 0..2 * mxx {
                    let kx = if jx < mxx { jx } else { gx + jx - 2 * mxx };
                    for jy in 0..2 * myy {
                        let ky = if jy < myy { jy } else { gy + jy - 2 * myy };
                        v[kx * gy + ky] = c[jx * 2 * myy + jy];
                    }
                }
                v
            }
        }
    }

    /// `Σ_k ψ_f(k) e^{−2πi kj/N}` (unnormalized real-space amplitudes).
    fn to_real_space(&self, mut v: Vec<C64>) -> Vec<C64> {
        match &self.plans.y {
            None => self.plans.x.forward(&mut v),
            Some(py) => forward_2d(&mut v, &self.plans.x, py),
        }
        v
    }

    /// Normalized amplitudes times `params.scale`.
    pub fn amplitudes(&self, params: &ParamVector) -> Result<ScaledState> {
        self.check(&params.angles)?;
        let c = self.coeffs_from_params(&params.angles)?;
        let mut f = self.to_real_space(self.embed(&c.c));
        if self.kind == ZgrKind::Real1d {
            // Hermitian symmetry of |ψ_f⟩ leaves only round-off here
            f.iter_mut().for_each(|z| z.im = 0.0);
        }
        let nrm = sqrt(norm_sq(&f));
        f.iter_mut().for_each(|z| *z /= nrm);
        Ok(ScaledState {
            scale: params.scale,
            psi: f,
        })
    }

    /// Unnormalized Fourier coefficients `(1/N) Σ_j f_j e^{+2πi kj/N}` of `samples`.
    fn spectrum(&self, samples: &[C64]) -> Vec<C64> {
        let mut v = samples.to_vec();
        match &self.plans.y {
            None => self.plans.x.inverse(&mut v),
            Some(py) => inverse_2d(&mut v, &self.plans.x, py),
        }
        let n = v.len() as f64;
        v.iter_mut().for_each(|z| *z /= n);
        v
    }

    /// Coefficients of the best truncation of `samples` representable by this spec.
    pub fn truncated_coeffs(&self, samples: &[C64]) -> Result<FourierCoefficients> {
        let n = 1usize << self.n;
        if samples.len() != n {
            bail!(Dimension, "expected {} samples, got {}", n, samples.len());
        }
        let spec = self.spectrum(samples);
        let c = match self.kind {
            ZgrKind::Real1d => {
                let mm = 1usize << self.m;
                let mut c: Vec<C64> = (0..mm).map(|k| spec[k]).collect();
                c[0].im = 0.0;
                c
            }
            ZgrKind::Complex1d => {
                let mm = 1usize << self.m;
                (0..2 * mm)
                    .map(|j| {
                        if j < mm {
                            spec[j]
                        } else {
                            spec[n + j - 2 * mm]
                        }
                    })
                    .collect()
            }
            ZgrKind::Complex2d { nx, mx, ny, my } => {
                let (gx, gy) = (1usize << nx, 1usize << ny);
                let (mxx, myy) = (1usize << mx, 1usize << my);
                let mut c = Vec::with_capacity(4 * mxx * myy);
                for jx in 0..2 * mxx {
                    let kx = if jx < mxx { jx } else { gx + jx - 2 * mxx };
                    for jy in 0..2 * myy {
                        let ky = if jy < myy { jy } else { gy + jy - 2 * myy };
                        c.push(spec[kx * gy + ky]);
                    }
                }
                c
            }
        };
        Ok(FourierCoefficients { c })
    }

    /// Best truncation of `samples` as a raw vector.
    pub fn truncate(&self, samples: &[C64]) -> Result<Vec<C64>> {
        let c = self.truncated_coeffs(samples)?;
        let mut f = self.to_real_space(self.embed(&c.c));
        if self.kind == ZgrKind::Real1d {
            f.iter_mut().for_each(|z| z.im = 0.0);
        }
        Ok(f)
    }

    /// Read-in: parameters reproducing the best truncation of `samples`.
    pub fn params_from_function(&self, samples: &[C64]) -> Result<ParamVector> {
        let coeffs = self.truncated_coeffs(samples)?;
        let (angles, sign) = self.params_from_coeffs(&coeffs)?;
        let nrm = sqrt(norm_sq(&self.truncate(samples)?));
        Ok(ParamVector {
            scale: sign * nrm,
            angles,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::{sincos, PI};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_angles(spec: &ZgrQftSpec, rng: &mut ChaCha8Rng) -> Vec<f64> {
        (0..spec.angle_count())
            .map(|_| rng.random_range(-PI..PI))
            .collect()
    }

    fn close(a: &[C64], b: &[C64], tol: f64) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).norm() < tol)
    }

    #[test]
    fn angle_counts() {
        assert_eq!(ZgrQftSpec::real_1d(8, 6).unwrap().angle_count() + 1, 129);
        assert_eq!(
            ZgrQftSpec::complex_2d(6, 3, 6, 3).unwrap().angle_count(),
            512
        );
        assert!(ZgrQftSpec::real_1d(5, 4).is_err());
    }

    #[test]
    fn dc_only_is_constant() {
        let spec = ZgrQftSpec::real_1d(6, 3).unwrap();
        let st = spec
            .amplitudes(&ParamVector::zeros(2.0, spec.angle_count()))
            .unwrap();
        let want = 1.0 / 8.0;
        assert!(st
            .psi
            .iter()
            .all(|z| (z.re - want).abs() < 1e-12 && z.im == 0.0));
        assert_eq!(st.scale, 2.0);
    }

    #[test]
    fn matches_partial_series_and_dense_dft() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let spec = ZgrQftSpec::real_1d(6, 3).unwrap();
        let angles = random_angles(&spec, &mut rng);
        let c = spec.coeffs_from_params(&angles).unwrap().c;
        let n = 64;
        // direct series: c₀ + Σ c_k e^{−2πikx} + c.c. at x = j/N
        let series: Vec<C64> = (0..n)
            .map(|j| {
                let mut f = c[0];
                for (k, ck) in c.iter().enumerate().skip(1) {
                    let (s, co) = sincos(-2.0 * PI * (k * j) as f64 / n as f64);
                    let e = C64::new(co, s);
                    f += ck * e + ck.conj() * e.conj();
                }
                f
            })
            .collect();
        let nrm = sqrt(norm_sq(&series));
        let want: Vec<C64> = series.iter().map(|z| z / nrm).collect();
        let got = spec.amplitudes(&ParamVector::new(1.0, angles)).unwrap();
        assert!(close(&got.psi, &want, 1e-12));

        // dense DFT matrix applied to the embedded register
        let mut psi_f = vec![C64::new(0.0, 0.0); n];
        psi_f[0] = c[0];
        for k in 1..8 {
            psi_f[k] = c[k];
            psi_f[n - k] = c[k].conj();
        }
        let dense: Vec<C64> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let (s, co) = sincos(-2.0 * PI * ((j * k) % n) as f64 / n as f64);
                        psi_f[k] * C64::new(co, s)
                    })
                    .sum()
            })
            .collect();
        let nrm = sqrt(norm_sq(&dense));
        let dense: Vec<C64> = dense.iter().map(|z| z / nrm).collect();
        assert!(close(&got.psi, &dense, 1e-12));
    }

    #[test]
    fn negated_phases_conjugate_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for spec in [
            ZgrQftSpec::real_1d(6, 3).unwrap(),
            ZgrQftSpec::complex_1d(6, 3).unwrap(),
        ] {
            let angles = random_angles(&spec, &mut rng);
            let r = (spec.angle_count() - 2) / 2;
            let mut neg = angles.clone();
            for a in &mut neg[r..2 * r + 1] {
                *a = -*a;
            }
            let c = spec.coeffs_from_params(&angles).unwrap().c;
            let cn = spec.coeffs_from_params(&neg).unwrap().c;
            let conj: Vec<C64> = c.iter().map(|z| z.conj()).collect();
            assert!(close(&cn, &conj, 1e-12));
        }
    }

    #[test]
    fn coefficient_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for m in 1..=4 {
            let spec = ZgrQftSpec::complex_1d(m + 2, m).unwrap();
            let c: Vec<C64> = (0..2 << m)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let (angles, sign) = spec
                .params_from_coeffs(&FourierCoefficients { c: c.clone() })
                .unwrap();
            assert_eq!(sign, 1.0);
            let back = spec.coeffs_from_params(&angles).unwrap().c;
            let nrm = sqrt(norm_sq(&c));
            let want: Vec<C64> = c.iter().map(|z| z / nrm).collect();
            assert!(close(&back, &want, 1e-12));
        }
    }

    #[test]
    fn pure_series_reads_in_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for spec in [
            ZgrQftSpec::real_1d(7, 3).unwrap(),
            ZgrQftSpec::complex_1d(7, 3).unwrap(),
            ZgrQftSpec::complex_2d(4, 2, 3, 1).unwrap(),
        ] {
            let angles = random_angles(&spec, &mut rng);
            let want = spec.amplitudes(&ParamVector::new(-3.5, angles)).unwrap();
            let p = spec.params_from_function(&want.vector()).unwrap();
            let got = spec.amplitudes(&p).unwrap();
            assert!(
                close(&got.vector(), &want.vector(), 1e-10),
                "{:?}",
                spec.kind
            );
        }
    }

    #[test]
    fn read_in_equals_fft_truncation() {
        let spec = ZgrQftSpec::real_1d(7, 4).unwrap();
        let n = 128;
        let f: Vec<C64> = (0..n)
            .map(|j| C64::new((j as f64 / 20.0).sin().exp(), 0.0))
            .collect();
        // naive DFT truncation oracle
        let coef = |k: usize| -> C64 {
            (0..n)
                .map(|j| {
                    let (s, co) = sincos(2.0 * PI * ((j * k) % n) as f64 / n as f64);
                    f[j] * C64::new(co, s)
                })
                .sum::<C64>()
                / n as f64
        };
        let cs: Vec<C64> = (0..16).map(coef).collect();
        let oracle: Vec<C64> = (0..n)
            .map(|j| {
                let mut v = C64::new(cs[0].re, 0.0);
                for (k, ck) in cs.iter().enumerate().skip(1) {
                    let (s, co) = sincos(-2.0 * PI * ((j * k) % n) as f64 / n as f64);
                    v += 2.0 * (ck * C64::new(co, s)).re;
                }
                v
            })
            .collect();
        let got = spec
            .amplitudes(&spec.params_from_function(&f).unwrap())
            .unwrap();
        assert!(close(&got.vector(), &oracle, 1e-10));
    }

    #[test]
    fn negative_mean_flips_scale() {
        let spec = ZgrQftSpec::real_1d(6, 2).unwrap();
        let f: Vec<C64> = (0..64)
            .map(|j| C64::new(-2.0 + (j as f64 * PI / 32.0).cos(), 0.0))
            .collect();
        let p = spec.params_from_function(&f).unwrap();
        assert!(p.scale < 0.0);
        assert!(close(&spec.amplitudes(&p).unwrap().vector(), &f, 1e-10));
    }
}
