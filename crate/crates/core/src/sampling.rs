//! Shot-noise simulation of Hadamard-test expectation values.
//!
//! A Hadamard test on a normalized expectation `v ∈ [−1, 1]` yields outcome 0
//! with probability `(1 + v)/2`; `M` shots give a binomial count. Under the
//! synthetic noise model every circuit's signal is multiplied by a damping
//! factor before sampling.

use alloc::vec::Vec;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Binomial, Distribution};

use crate::ansatz::AnsatzKind;
use crate::costfn::{BuckmasterProblem, CostModel};
use crate::error::{bail, Result};
use crate::math::{exp, ln, median, sin, sqrt, PI};
use crate::state::{complexify, Grid1D, ParamVector};
use crate::C64;

/// `2k/M − 1` with `k ~ Binomial(M, (1 + v)/2)`.
pub fn hadamard_estimate<R: Rng + ?Sized>(true_value: f64, shots: u64, rng: &mut R) -> Result<f64> {
    if !(true_value.abs() <= 1.0 + 1e-12) {
        bail!(Domain, "expectation {true_value} outside [−1, 1]");
    }
    if shots == 0 {
        bail!(Parameter, "at least one shot is required");
    }
    let p = (0.5 * (1.0 + true_value)).clamp(0.0, 1.0);
    let k = Binomial::new(shots, p)
        .map_err(|e| crate::Error::Numeric(alloc::format!("{e}")))?
        .sample(rng);
    Ok(2.0 * k as f64 / shots as f64 - 1.0)
}

/// Shot budget and noise channel for expectation estimates.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ShotEstimator {
    /// Shots per expectation; `None` substitutes exact values.
    pub shots: Option<u64>,
    /// Multiplicative signal damping (1 = noiseless).
    pub damping: f64,
}

impl ShotEstimator {
    pub fn exact() -> Self {
        ShotEstimator {
            shots: None,
            damping: 1.0,
        }
    }

    pub fn with_shots(shots: u64) -> Self {
        ShotEstimator {
            shots: Some(shots),
            damping: 1.0,
        }
    }

    /// Estimate of a real normalized expectation.
    pub fn estimate<R: Rng + ?Sized>(&self, true_value: f64, rng: &mut R) -> Result<f64> {
        let v = self.damping * true_value;
        match self.shots {
            Some(m) => hadamard_estimate(v, m, rng),
            None => Ok(v),
        }
    }

    /// Real and imaginary parts from two independent tests (the second with
    /// an `S†` phase on the control).
    pub fn estimate_complex<R: Rng + ?Sized>(&self, z: C64, rng: &mut R) -> Result<C64> {
        Ok(C64::new(
            self.estimate(z.re, rng)?,
            self.estimate(z.im, rng)?,
        ))
    }
}

/// Per-trial generator derived from `(seed, trial)`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(trial);
    r
}

/// Cost with every expectation replaced by a shot estimate.
///
/// The expectations are those of the expanded model, measured on normalized
/// states; prefactors and scales are applied afterwards.
pub fn estimate_cost_sampled<R: Rng + ?Sized>(
    model: &CostModel,
    params: &ParamVector,
    estimator: &ShotEstimator,
    rng: &mut R,
) -> Result<f64> {
    let st = model.ansatz.amplitudes(params)?;
    let exact = model.expectations(&st.psi)?;
    let sampled = exact
        .iter()
        .map(|z| estimator.estimate(z.re, rng))
        .collect::<Result<Vec<_>>>()?;
    Ok(model.combine(st.scale, &sampled))
}

/// Damping estimated on a calibration circuit with known value, divided out
/// of the target estimate.
pub fn damping_mitigated_estimate<R: Rng + ?Sized>(
    estimator: &ShotEstimator,
    calibration_value: f64,
    target_value: f64,
    rng: &mut R,
) -> Result<f64> {
    if calibration_value == 0.0 {
        bail!(Mitigation, "calibration expectation must be nonzero");
    }
    let cal = estimator.estimate(calibration_value, rng)?;
    let floor = estimator.shots.map_or(0.0, |m| 3.0 / sqrt(m as f64));
    let damping = cal / calibration_value;
    if cal.abs() <= floor || damping.abs() < 1e-12 {
        bail!(
            Mitigation,
            "calibration estimate {cal} is indistinguishable from zero"
        );
    }
    Ok(estimator.estimate(target_value, rng)? / damping)
}

/// Settings of the shot-scaling study.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingConfig {
    pub qubits: Vec<u32>,
    pub shots: Vec<u64>,
    pub trials: u64,
    pub seed: u64,
    /// Fourier register size of the ansatz.
    pub m: u32,
}

impl Default for ScalingConfig {
    fn default() -> Self {
        ScalingConfig {
            qubits: alloc::vec![3, 4, 5, 6],
            shots: alloc::vec![10_000, 100_000, 1_000_000, 10_000_000, 100_000_000],
            trials: 100,
            seed: 8,
            m: 3,
        }
    }
}

/// One sampled cost estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingRow {
    pub n: u32,
    pub shots: u64,
    pub trial: u64,
    pub estimate: f64,
    pub exact: f64,
    pub fractional_error: f64,
}

/// Log-log fit `ln(mean error) = slope·ln(shots) + intercept` for one `n`.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ScalingFit {
    pub n: u32,
    pub slope: f64,
    pub intercept: f64,
    /// Mean fractional error per shot count, in `shots` order.
    pub mean_errors: Vec<f64>,
    /// Median fractional error at the largest shot count.
    pub median_at_max: f64,
}

impl ScalingFit {
    /// Error prefactor `e^{intercept}`.
    pub fn prefactor(&self) -> f64 {
        exp(self.intercept)
    }
}

/// First-step Buckmaster cost at `n` qubits, evaluated at the read-in
/// initial condition (the warm start of the first step). The Fourier
/// register is capped at `n − 2`.
pub fn buckmaster_scaling_model(n: u32, m: u32) -> Result<(CostModel, ParamVector)> {
    let m = m.min(n.saturating_sub(2)).max(1);
    let grid = Grid1D::new(n, 2.0 * PI, -PI, false)?;
    let spec = AnsatzKind::ZgrReal { m }.build(&grid.into())?;
    let samples: Vec<f64> = grid
        .xs()
        .into_iter()
        .map(|x| (2.0 - sin(x)) / 3.0)
        .collect();
    let params = spec.read_in(&complexify(&samples))?;
    let prev = spec.amplitudes(&params)?;
    let model = BuckmasterProblem {
        alpha: 1.0,
        tau: 0.008,
        grid,
    }
    .cost(&prev, spec)?;
    Ok((model, params))
}

/// The variable part of the cost (without the constant `‖t‖²`) from
/// expectation values.
fn variable_cost(model: &CostModel, scale: f64, values: &[f64]) -> f64 {
    model.combine(scale, values) - model.expansion.fixed
}

/// Sampled-versus-exact Buckmaster cost over qubit counts, shot counts and
/// trials, with per-`n` log-log fits.
///
/// The cost compared is the printed form without the constant term; each
/// trial uses its own generator derived from `(seed, trial)`.
pub fn scaling_experiment(cfg: &ScalingConfig) -> Result<(Vec<ScalingRow>, Vec<ScalingFit>)> {
    if cfg.trials == 0 || cfg.shots.is_empty() {
        bail!(Config, "scaling experiment needs trials and shot counts");
    }
    let mut rows = Vec::new();
    let mut fits = Vec::new();
    for &n in &cfg.qubits {
        let (model, params) = buckmaster_scaling_model(n, cfg.m)?;
        let st = model.ansatz.amplitudes(&params)?;
        let values: Vec<f64> = model.expectations(&st.psi)?.iter().map(|z| z.re).collect();
        let exact = variable_cost(&model, st.scale, &values);
        if exact == 0.0 {
            bail!(Numeric, "exact cost vanishes at n = {n}");
        }
        let mut means = Vec::with_capacity(cfg.shots.len());
        let mut last = Vec::new();
        for (si, &shots) in cfg.shots.iter().enumerate() {
            let est = ShotEstimator::with_shots(shots);
            let mut errs = Vec::with_capacity(cfg.trials as usize);
            for trial in 0..cfg.trials {
                let mut rng = trial_rng(cfg.seed ^ ((n as u64) << 48) ^ ((si as u64) << 40), trial);
                let sampled = values
                    .iter()
                    .map(|&v| est.estimate(v, &mut rng))
                    .collect::<Result<Vec<_>>>()?;
                let estimate = variable_cost(&model, st.scale, &sampled);
                let fe = ((estimate - exact) / exact).abs();
                errs.push(fe);
                rows.push(ScalingRow {
                    n,
                    shots,
                    trial,
                    estimate,
                    exact,
                    fractional_error: fe,
                });
            }
            means.push(errs.iter().sum::<f64>() / errs.len() as f64);
            last = errs;
        }
        let xs: Vec<f64> = cfg.shots.iter().map(|&s| ln(s as f64)).collect();
        let ys: Vec<f64> = means.iter().map(|&e| ln(e)).collect();
        let (slope, intercept) = crate::math::linear_fit(&xs, &ys);
        fits.push(ScalingFit {
            n,
            slope,
            intercept,
            mean_errors: means,
            median_at_max: median(&last),
        });
    }
    Ok((rows, fits))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certain_outcome_is_exact() {
        let mut rng = trial_rng(1, 0);
        for m in [1, 7, 10_000] {
            assert_eq!(hadamard_estimate(1.0, m, &mut rng).unwrap(), 1.0);
            assert_eq!(hadamard_estimate(-1.0, m, &mut rng).unwrap(), -1.0);
        }
        assert!(hadamard_estimate(1.5, 10, &mut rng).is_err());
    }

    #[test]
    fn unbiased_with_binomial_variance() {
        for v in [0.0, 0.5, 0.9] {
            let mut rng = trial_rng(3, 0);
            let m = 10_000u64;
            let trials = 100_000;
            let xs: Vec<f64> = (0..trials)
                .map(|_| hadamard_estimate(v, m, &mut rng).unwrap())
                .collect();
            let mean = xs.iter().sum::<f64>() / trials as f64;
            let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (trials - 1) as f64;
            let want = (1.0 - v * v) / m as f64;
            assert!(
                (mean - v).abs() < 3.0 * sqrt(want / trials as f64),
                "v={v} mean={mean}"
            );
            assert!(
                (var / want - 1.0).abs() < 0.2,
                "v={v} var={var} want={want}"
            );
        }
    }

    #[test]
    fn zero_signal_tail() {
        // P(|estimate| ≥ 0.05) at M = 10⁴ is ~6e-7 by the normal tail
        let bad = (0..1000)
            .filter(|&s| {
                hadamard_estimate(0.0, 10_000, &mut trial_rng(s, 0))
                    .unwrap()
                    .abs()
                    >= 0.05
            })
            .count();
        assert!(bad <= 10);
    }

    #[test]
    fn mitigation_examples() {
        let mut rng = trial_rng(5, 0);
        let noiseless = ShotEstimator::exact();
        assert_eq!(
            damping_mitigated_estimate(&noiseless, 1.0, 0.3, &mut rng).unwrap(),
            0.3
        );
        let dead = ShotEstimator {
            shots: Some(1_000_000),
            damping: 0.0,
        };
        assert!(matches!(
            damping_mitigated_estimate(&dead, 1.0, 0.3, &mut rng),
            Err(crate::Error::Mitigation(_))
        ));
        assert!(matches!(
            damping_mitigated_estimate(&noiseless, 0.0, 0.3, &mut rng),
            Err(crate::Error::Mitigation(_))
        ));
    }

    #[test]
    fn exact_substitution_reproduces_cost() {
        let (model, params) = buckmaster_scaling_model(4, 3).unwrap();
        assert_eq!(model.ansatz.qubits(), 4);
        let mut rng = trial_rng(0, 0);
        let a = estimate_cost_sampled(&model, &params, &ShotEstimator::exact(), &mut rng).unwrap();
        let b = model
            .evaluate(&params, crate::costfn::Mode::Expanded)
            .unwrap();
        assert_eq!(a, b);
    }
}
