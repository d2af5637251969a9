//! Fit error versus parameter count.
//!
//! Errors are relative L2, `‖fit − target‖/‖target‖`. For the Fourier ansatz
//! two versions are reported: on the grid samples, and in function space
//! (Parseval over the exact Fourier series of a continuous target). The
//! second depends only on the retained modes, hence not on `n`.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use super::{AnsatzSpec, FourierCoefficients, UlaSpec, ZgrQftSpec};
use crate::error::{bail, Result};
use crate::math::{cos, exp, floor, ln, sin, sqrt, TAU};
use crate::optimize::{timestep_optimize, StageConfig};
use crate::state::{complexify, dot, norm_sq, sq_dist, Grid1D, ParamVector};
use crate::C64;

/// `Σ c·e^{r x}` on `[a, b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub a: f64,
    pub b: f64,
    /// `(c, r)` pairs.
    pub terms: Vec<(f64, f64)>,
}

/// Periodic function on `[x0, x0 + length)` built from exponential
/// segments; zero outside them.
#[derive(Debug, Clone, PartialEq)]
pub struct ExpSegments {
    pub x0: f64,
    pub length: f64,
    pub segments: Vec<Segment>,
}

/// `∫_a^b e^{s x} dx` for complex `s = r − iκ`.
fn exp_integral(r: f64, kappa: f64, a: f64, b: f64) -> C64 {
    if r == 0.0 && kappa == 0.0 {
        return C64::new(b - a, 0.0);
    }
    let at = |x: f64| C64::new(exp(r * x) * cos(kappa * x), -exp(r * x) * sin(kappa * x));
    (at(b) - at(a)) / C64::new(r, -kappa)
}

impl ExpSegments {
    /// Put payoff `max(K − eˣ, 0)` on the physical half, mirrored about the
    /// domain midpoint.
    pub fn reflected_put(strike: f64, grid: &Grid1D) -> Self {
        let (x0, len) = (grid.x0, grid.length);
        let mid = x0 + 0.5 * len;
        let lk = ln(strike);
        let mut segments = Vec::new();
        if lk > x0 {
            segments.push(Segment {
                a: x0,
                b: lk.min(mid),
                terms: vec![(strike, 0.0), (-1.0, 1.0)],
            });
            segments.push(Segment {
                a: (2.0 * mid - lk).max(mid),
                b: x0 + len,
                terms: vec![(strike, 0.0), (-exp(2.0 * mid), -1.0)],
            });
        }
        ExpSegments {
            x0,
            length: len,
            segments,
        }
    }

    pub fn eval(&self, x: f64) -> f64 {
        let t = (x - self.x0) / self.length;
        let x = self.x0 + (t - floor(t)) * self.length;
        self.segments
            .iter()
            .filter(|s| s.a <= x && x < s.b)
            .map(|s| s.terms.iter().map(|&(c, r)| c * exp(r * x)).sum::<f64>())
            .sum()
    }

    /// `c_k = (1/L)∫ f(x) e^{−ikω(x − x0)} dx`, `ω = 2π/L`.
    pub fn fourier(&self, k: i64) -> C64 {
        let kappa = TAU * k as f64 / self.length;
        let shift = C64::new(cos(kappa * self.x0), sin(kappa * self.x0));
        let mut acc = C64::new(0.0, 0.0);
        for s in &self.segments {
            for &(c, r) in &s.terms {
                acc += c * exp_integral(r, kappa, s.a, s.b);
            }
        }
        acc * shift / self.length
    }

    /// `(1/L)∫ f² dx`.
    pub fn mean_square(&self) -> f64 {
        let mut acc = 0.0;
        for s in &self.segments {
            for &(ci, ri) in &s.terms {
                for &(cj, rj) in &s.terms {
                    acc += ci * cj * exp_integral(ri + rj, 0.0, s.a, s.b).re;
                }
            }
        }
        acc / self.length
    }
}

/// One point of an expressibility curve.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct FitRow {
    pub family: String,
    pub n: u32,
    /// `m` for the Fourier ansatz, `d` for the layered one.
    pub config: u32,
    /// Angles plus the scale.
    pub parameters: usize,
    pub sampled_error: f64,
    pub function_error: Option<f64>,
    pub evaluations: usize,
}

fn rel_error(fit: &[C64], target: &[C64]) -> Result<f64> {
    let t = norm_sq(target);
    if t == 0.0 {
        bail!(Numeric, "zero target");
    }
    Ok(sqrt(sq_dist(fit, target) / t))
}

/// Weighted inner product of real-series registers (`c_k` stands for `±k`).
fn real_series_dot(a: &[C64], b: &[C64]) -> f64 {
    a.iter()
        .zip(b)
        .enumerate()
        .map(|(k, (x, y))| if k == 0 { 1.0 } else { 2.0 } * (x.conj() * y).re)
        .sum()
}

/// Function-space error of the real Fourier ansatz with `m` register qubits.
///
/// The register is loaded with the exact coefficients, passed through the
/// angle round trip, and rescaled optimally.
pub fn zgr_function_error(target: &ExpSegments, spec: &ZgrQftSpec) -> Result<f64> {
    if spec.kind != super::ZgrKind::Real1d {
        bail!(
            Parameter,
            "function-space error is defined for the real 1D ansatz"
        );
    }
    let modes = 1i64 << spec.m;
    let exact: Vec<C64> = (0..modes).map(|k| target.fourier(k)).collect();
    let (angles, sign) = spec.params_from_coeffs(&FourierCoefficients { c: exact.clone() })?;
    let fit: Vec<C64> = spec
        .coeffs_from_params(&angles)?
        .c
        .iter()
        .map(|z| z * sign)
        .collect();
    let ff = real_series_dot(&fit, &fit);
    let total = target.mean_square();
    if total <= 0.0 || ff <= 0.0 {
        bail!(Numeric, "degenerate target");
    }
    let s = real_series_dot(&fit, &exact) / ff;
    let err2 = total - 2.0 * s * real_series_dot(&fit, &exact) + s * s * ff;
    Ok(sqrt(err2.max(0.0) / total))
}

/// Read-in fits of real samples for each `m`; adds the function-space error
/// when the continuous target is known.
pub fn zgr_sweep(
    samples: &[f64],
    n: u32,
    ms: &[u32],
    continuum: Option<&ExpSegments>,
) -> Result<Vec<FitRow>> {
    if samples.len() != 1usize << n {
        bail!(
            Dimension,
            "expected {} samples, got {}",
            1usize << n,
            samples.len()
        );
    }
    let target = complexify(samples);
    ms.iter()
        .map(|&m| {
            let spec = ZgrQftSpec::real_1d(n, m)?;
            let wrapped = AnsatzSpec::Zgr(spec.clone());
            let params = wrapped.read_in(&target)?;
            let fit = wrapped.amplitudes(&params)?.vector();
            Ok(FitRow {
                family: "zgr_qft".into(),
                n,
                config: m,
                parameters: wrapped.param_count(),
                sampled_error: rel_error(&fit, &target)?,
                function_error: continuum
                    .map(|c| zgr_function_error(c, &spec))
                    .transpose()?,
                evaluations: 0,
            })
        })
        .collect()
}

/// Optimized fits of the layered ansatz for each depth, scale profiled out.
pub fn ula_sweep(
    target: &[C64],
    n: u32,
    depths: &[u32],
    config: &StageConfig,
) -> Result<Vec<FitRow>> {
    if target.len() != 1usize << n {
        bail!(
            Dimension,
            "expected {} samples, got {}",
            1usize << n,
            target.len()
        );
    }
    let tt = norm_sq(target);
    depths
        .iter()
        .map(|&d| {
            let spec = AnsatzSpec::Ula(UlaSpec::new(n, d)?);
            let cost = |p: &ParamVector| Ok(sq_dist(&spec.amplitudes(p)?.vector(), target));
            let quad = |a: &[f64]| {
                let st = spec.amplitudes(&ParamVector {
                    scale: 1.0,
                    angles: a.to_vec(),
                })?;
                Ok((1.0, -2.0 * dot(&st.psi, target).re, tt))
            };
            let r = timestep_optimize(
                &cost,
                Some(&quad),
                &spec.zeros(1.0),
                &spec.half_widths_with(config.half_width),
                config,
            )?;
            let fit = spec.amplitudes(&r.best_params())?.vector();
            Ok(FitRow {
                family: "ula".into(),
                n,
                config: d,
                parameters: spec.param_count(),
                sampled_error: rel_error(&fit, target)?,
                function_error: None,
                evaluations: r.evaluations_used,
            })
        })
        .collect()
}
