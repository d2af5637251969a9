//! End-to-end acceptance checks, one line per criterion.
//!
//! `QVPDE_ACCEPTANCE=1,4,7` runs a subset. The process fails when a
//! criterion outside `TRACKED_RED` fails.

use std::f64::consts::{E, FRAC_PI_2, PI};
use std::time::Instant;

use qvpde_core::ansatz::expressibility::{zgr_function_error, zgr_sweep, ExpSegments};
use qvpde_core::ansatz::ula::block_matrix;
use qvpde_core::ansatz::{mottonen, AnsatzSpec, UlaSpec, ZgrQftSpec};
use qvpde_core::circuits::{
    build_adder_circuit, hadamard_value, toy_adder_test, toy_diagonal_test, unitarity_defect,
    verify_shortcut, AdderVariant, Circuit, Prep,
};
use qvpde_core::classical::{physical_grid, put_payoff, solve_bse1d_classical, BoundaryMode};
use qvpde_core::costfn::{CostModel, Mode};
use qvpde_core::evolve::{physical_part, reflect_for_dirichlet, run, Evolver, PdeProblem};
use qvpde_core::presets::{self, bse_grid};
use qvpde_core::sampling::{
    damping_mitigated_estimate, scaling_experiment, trial_rng, ScalingConfig, ShotEstimator,
};
use qvpde_core::state::{norm_sq, re};
use qvpde_core::{ParamVector, C64};
use rand::Rng;

/// Criteria that are known to miss their targets; analysis in the notes.
const TRACKED_RED: &[u32] = &[5];

type Check = Result<(bool, String), String>;

fn fmt_err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn criterion_1() -> Check {
    let r = run(&presets::bse1d_nonlinear()).map_err(fmt_err)?;
    let ok = r.final_error <= 0.05 && (r.read_in_error - 0.0013).abs() <= 0.0005;
    Ok((
        ok,
        format!(
            "final error {:.3}% (≤ 5%), read-in error {:.4}% (0.13% ± 0.05%)",
            100.0 * r.final_error,
            100.0 * r.read_in_error
        ),
    ))
}

fn criterion_2() -> Check {
    let plan = presets::bse1d_nonlinear();
    let PdeProblem::Bse1d(p) = plan.problem else {
        unreachable!()
    };
    let ev = Evolver::new(&plan).map_err(fmt_err)?;
    let s0 = ev.initial_state().map_err(fmt_err)?;
    let (s1, _) = ev.step(&s0, 0).map_err(fmt_err)?;
    let mut linear = p;
    linear.nonlinearity = 0.0;
    let read_in = re(&s0.u.vector());
    let lin = solve_bse1d_classical(&linear, BoundaryMode::PeriodicReflected, 1, Some(&read_in))
        .map_err(fmt_err)?;
    let grid = plan.problem.grid();
    let q = physical_part(&re(&s1.u.vector()), &grid);
    let l = physical_part(lin.last(), &grid);
    let xs = physical_part(&p.grid.xs(), &grid);
    let excess: Vec<f64> = q.iter().zip(&l).map(|(a, b)| a - b).collect();
    let (k, peak) = excess
        .iter()
        .copied()
        .enumerate()
        .fold((0, f64::MIN), |a, (i, v)| if v > a.1 { (i, v) } else { a });
    let s_peak = xs[k].exp();
    let at_strike = xs
        .iter()
        .enumerate()
        .min_by(|a, b| {
            (a.1.exp() - p.strike)
                .abs()
                .total_cmp(&(b.1.exp() - p.strike).abs())
        })
        .unwrap()
        .0;
    let ok = peak > 0.0 && excess[at_strike] > 0.0 && (s_peak / p.strike).ln().abs() <= 0.25;
    Ok((
        ok,
        format!(
            "excess peak {peak:.4e} at S = {s_peak:.2}, excess at S ≈ K {:.4e}",
            excess[at_strike]
        ),
    ))
}

fn criterion_3() -> Check {
    let r = run(&presets::bse2d()).map_err(fmt_err)?;
    Ok((
        r.final_error <= 0.05,
        format!("final error {:.3}% (≤ 5%)", 100.0 * r.final_error),
    ))
}

fn criterion_4() -> Check {
    let b = run(&presets::buckmaster()).map_err(fmt_err)?;
    let k = run(&presets::kpz()).map_err(fmt_err)?;
    let ok = b.final_error <= 0.10 && k.final_error <= 0.02;
    Ok((
        ok,
        format!(
            "Buckmaster {:.3}% (≤ 10%), KPZ {:.3}% (≤ 2%)",
            100.0 * b.final_error,
            100.0 * k.final_error
        ),
    ))
}

fn criterion_5() -> Check {
    let (_, fits) = scaling_experiment(&ScalingConfig::default()).map_err(fmt_err)?;
    let slopes_ok = fits.iter().all(|f| (f.slope + 0.5).abs() <= 0.05);
    let increasing = fits.windows(2).all(|w| w[1].intercept > w[0].intercept);
    let ratios: Vec<f64> = fits
        .windows(2)
        .map(|w| (w[1].intercept - w[0].intercept).exp())
        .collect();
    let ratio_ok = ratios.iter().all(|r| *r >= E / 1.5 && *r <= E * 1.5);
    let last = fits.iter().find(|f| f.n == 6).ok_or("no n = 6 fit")?;
    let median_ok = (0.002..=0.05).contains(&last.median_at_max);
    let slopes: Vec<String> = fits.iter().map(|f| format!("{:.3}", f.slope)).collect();
    let rs: Vec<String> = ratios.iter().map(|r| format!("{r:.2}")).collect();
    Ok((
        slopes_ok && increasing && ratio_ok && median_ok,
        format!(
            "slopes [{}] {}; intercepts increasing {}; prefactor ratios [{}] vs e {}; n=6 median {:.2}% {}",
            slopes.join(", "),
            if slopes_ok { "ok" } else { "FAIL" },
            increasing,
            rs.join(", "),
            if ratio_ok { "ok" } else { "FAIL" },
            100.0 * last.median_at_max,
            if median_ok { "ok" } else { "FAIL" }
        ),
    ))
}

fn random_params(n: usize, rng: &mut impl Rng) -> ParamVector {
    ParamVector {
        scale: rng.random_range(0.5..2.0),
        angles: (0..n).map(|_| rng.random_range(-PI..PI)).collect(),
    }
}

fn mode_gap(model: &CostModel, p: &ParamVector) -> Result<f64, String> {
    let d = model.evaluate(p, Mode::Direct).map_err(fmt_err)?;
    let e = model.evaluate(p, Mode::Expanded).map_err(fmt_err)?;
    Ok((d - e).abs() / d.abs().max(1.0))
}

fn modes(draws: u64) -> Result<f64, String> {
    let mut worst = 0.0f64;
    for (i, name) in presets::NAMES.iter().enumerate() {
        let plan = presets::by_name(name).map_err(fmt_err)?;
        let ev = Evolver::new(&plan).map_err(fmt_err)?;
        let s0 = ev.initial_state().map_err(fmt_err)?;
        let problem = plan.problem.at_time(s0.t);
        for d in 0..draws {
            let mut rng = trial_rng(61, i as u64 * draws + d);
            let mut chi = None;
            if let Some(spec) = &ev.chi_spec {
                if let Some(m) = problem.chi_model(&s0.u, spec.clone()).map_err(fmt_err)? {
                    worst = worst.max(mode_gap(&m, &random_params(spec.angle_count(), &mut rng))?);
                    chi = Some(
                        spec.amplitudes(&random_params(spec.angle_count(), &mut rng))
                            .map_err(fmt_err)?,
                    );
                }
            }
            let m = problem
                .u_model(&s0.u, chi.as_ref(), ev.u_spec.clone())
                .map_err(fmt_err)?;
            worst = worst.max(mode_gap(
                &m,
                &random_params(ev.u_spec.angle_count(), &mut rng),
            )?);
        }
    }
    Ok(worst)
}

fn shortcut() -> Result<f64, String> {
    let kpz = presets::resized(presets::kpz(), 4).map_err(fmt_err)?;
    let buck = presets::resized(presets::buckmaster(), 4).map_err(fmt_err)?;
    let mut worst = 0.0f64;
    for (plan, steps) in [(kpz, 2), (buck, 1)] {
        for v in [AdderVariant::QftPhase, AdderVariant::ToffoliAncilla] {
            worst = worst.max(
                verify_shortcut(&plan, steps, v)
                    .map_err(fmt_err)?
                    .max_deviation,
            );
        }
    }
    Ok(worst)
}

/// Largest deviation from the shift permutation over both variants.
fn adders() -> Result<f64, String> {
    let mut worst = 0.0f64;
    for w in 1..=4usize {
        let n = 1usize << w;
        for v in [AdderVariant::QftPhase, AdderVariant::ToffoliAncilla] {
            let c = build_adder_circuit(w, v).map_err(fmt_err)?;
            let u = c.unitary().map_err(fmt_err)?;
            worst = worst.max(unitarity_defect(&u));
            let shift = c.qubits - w;
            for k in 0..n {
                let col = &u[k << shift];
                let want = ((k + n - 1) % n) << shift;
                for (row, z) in col.iter().enumerate() {
                    let e = if row == want { 1.0 } else { 0.0 };
                    worst = worst.max((z - C64::new(e, 0.0)).norm());
                }
            }
        }
    }
    Ok(worst)
}

fn mottonen_round_trip() -> Result<f64, String> {
    let mut worst = 0.0f64;
    let mut rng = trial_rng(62, 0);
    for q in 1..=5u32 {
        for _ in 0..20 {
            let mut s: Vec<C64> = (0..1usize << q)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            let nrm = norm_sq(&s).sqrt();
            s.iter_mut().for_each(|z| *z /= nrm);
            let (ry, rz, alpha) = mottonen::angles(&s);
            let back = mottonen::prepare(&ry, &rz, alpha, q);
            let mut c = Circuit::new(q as usize);
            Prep::Amplitudes(s.clone())
                .append(&mut c, &(0..q as usize).collect::<Vec<_>>(), &[])
                .map_err(fmt_err)?;
            let sim = c.simulate(None).map_err(fmt_err)?;
            for ((a, b), g) in s.iter().zip(&back).zip(&sim) {
                worst = worst.max((a - b).norm()).max((a - g).norm());
            }
        }
    }
    Ok(worst)
}

fn ula_identity() -> Result<f64, String> {
    let mut worst = 0.0f64;
    let eye = block_matrix(&[0.0; 6]);
    for (i, row) in eye.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            worst = worst.max((x - if i == j { 1.0 } else { 0.0 }).abs());
        }
    }
    for n in 2..=6 {
        for d in 1..=4 {
            let spec = UlaSpec::new(n, d).map_err(fmt_err)?;
            let v = spec
                .real_amplitudes(&vec![0.0; spec.angle_count()])
                .map_err(fmt_err)?;
            worst = worst
                .max((v[0] - 1.0).abs())
                .max(v[1..].iter().fold(0.0f64, |a, x| a.max(x.abs())));
        }
    }
    Ok(worst)
}

fn zgr_realness(draws: u64) -> Result<f64, String> {
    let spec = AnsatzSpec::Zgr(ZgrQftSpec::real_1d(6, 3).map_err(fmt_err)?);
    let mut worst = 0.0f64;
    for t in 0..draws {
        let p = random_params(spec.angle_count(), &mut trial_rng(63, t));
        let v = spec.amplitudes(&p).map_err(fmt_err)?.vector();
        worst = worst.max(v.iter().fold(0.0f64, |a, z| a.max(z.im.abs())));
    }
    Ok(worst)
}

fn deterministic() -> Result<bool, String> {
    let mut plan = presets::kpz();
    plan.steps = 2;
    let a = run(&plan).map_err(fmt_err)?;
    let b = run(&plan).map_err(fmt_err)?;
    Ok(a.quantum == b.quantum
        && a.steps
            .iter()
            .zip(&b.steps)
            .all(|(x, y)| x.u_params == y.u_params && x.chi_params == y.chi_params))
}

fn criterion_6() -> Check {
    let m = modes(200)?;
    let s = shortcut()?;
    let a = adders()?;
    let t = mottonen_round_trip()?;
    let u = ula_identity()?;
    let z = zgr_realness(1000)?;
    let d = deterministic()?;
    let ok = m <= 1e-10 && s <= 1e-10 && a <= 1e-10 && t <= 1e-10 && u == 0.0 && z <= 1e-12 && d;
    Ok((
        ok,
        format!(
            "modes {m:.1e}, circuits {s:.1e}, adders {a:.1e}, Mottonen {t:.1e}, ULA identity {u:.1e}, ZGR imag {z:.1e}, deterministic {d}"
        ),
    ))
}

fn criterion_7() -> Check {
    let strike = 50.0;
    let mut worst = 0.0f64;
    let mut sampled = 0.0f64;
    for m in 1..=4u32 {
        let mut f = Vec::new();
        let mut s = Vec::new();
        for n in [6u32, 8, 10] {
            let g = bse_grid(n);
            let put = ExpSegments::reflected_put(strike, &g);
            f.push(
                zgr_function_error(&put, &ZgrQftSpec::real_1d(n, m).map_err(fmt_err)?)
                    .map_err(fmt_err)?,
            );
            let samples = reflect_for_dirichlet(&put_payoff(&physical_grid(&g), strike), &g)
                .map_err(fmt_err)?;
            s.push(zgr_sweep(&samples, n, &[m], None).map_err(fmt_err)?[0].sampled_error);
        }
        let spread = |v: &[f64]| {
            v.iter().cloned().fold(f64::MIN, f64::max) - v.iter().cloned().fold(f64::MAX, f64::min)
        };
        worst = worst.max(spread(&f));
        sampled = sampled.max(spread(&s));
    }
    Ok((worst <= 1e-9, format!("function-space spread {worst:.1e} (≤ 1e-9) for m = 1..4; grid-sampled spread {sampled:.1e}")))
}

fn criterion_8() -> Check {
    let cal_a = hadamard_value(&toy_adder_test(&[FRAC_PI_2, FRAC_PI_2, 0.0, 0.0, 0.0, 0.0]))
        .map_err(fmt_err)?;
    let cal_d = hadamard_value(&toy_diagonal_test(0.0, 0.0)).map_err(fmt_err)?;
    let tgt_a =
        hadamard_value(&toy_adder_test(&[0.3, 1.1, -0.4, 0.7, 0.2, -0.9])).map_err(fmt_err)?;
    let tgt_d = hadamard_value(&toy_diagonal_test(1.0, 0.6)).map_err(fmt_err)?;
    let est = ShotEstimator {
        shots: Some(1_000_000),
        damping: 0.8,
    };
    let mut ok = true;
    let mut parts = Vec::new();
    for (name, cal, tgt, seed) in [
        ("adder", cal_a, tgt_a, 81u64),
        ("diagonal", cal_d, tgt_d, 82),
    ] {
        let (mut raw, mut fixed) = (0.0, 0.0);
        let trials = 200;
        for t in 0..trials {
            let mut rng = trial_rng(seed, t);
            raw += (est.estimate(tgt, &mut rng).map_err(fmt_err)? - tgt).abs();
            fixed += (damping_mitigated_estimate(&est, cal, tgt, &mut rng).map_err(fmt_err)? - tgt)
                .abs();
        }
        let ratio = raw / fixed;
        ok &= ratio >= 5.0;
        parts.push(format!(
            "{name} ⟨·⟩ = {tgt:.4}: unmitigated {:.2e}, mitigated {:.2e}, ratio {ratio:.0}",
            raw / trials as f64,
            fixed / trials as f64
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn main() {
    let selected: Option<Vec<u32>> = std::env::var("QVPDE_ACCEPTANCE")
        .ok()
        .map(|s| s.split(',').filter_map(|x| x.trim().parse().ok()).collect());
    let criteria: [(u32, &str, fn() -> Check); 8] = [
        (1, "1D nonlinear Black–Scholes", criterion_1),
        (2, "nonlinearity signature", criterion_2),
        (3, "2D Black–Scholes", criterion_3),
        (4, "Buckmaster and KPZ", criterion_4),
        (5, "shot-noise scaling", criterion_5),
        (6, "property suites", criterion_6),
        (7, "expressibility invariance", criterion_7),
        (8, "damping mitigation", criterion_8),
    ];
    let mut unexpected = 0;
    for (id, name, f) in criteria {
        if selected.as_ref().is_some_and(|s| !s.contains(&id)) {
            continue;
        }
        let t = Instant::now();
        let (pass, detail) = match f() {
            Ok(r) => r,
            Err(e) => (false, format!("error: {e}")),
        };
        let tag = match (pass, TRACKED_RED.contains(&id)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (tracked)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!(
            "criterion {id} {tag}: {name}: {detail} [{:.1} s]",
            t.elapsed().as_secs_f64()
        );
    }
    if unexpected > 0 {
        eprintln!("{unexpected} acceptance criteria failed");
        std::process::exit(1);
    }
}
