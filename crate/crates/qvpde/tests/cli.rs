use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qvpde(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qvpde"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("QVPDE_THREADS")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn csv_rows(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut r = csv::Reader::from_path(path).unwrap();
    let head = r.headers().unwrap().iter().map(String::from).collect();
    let rows = r
        .records()
        .map(|x| x.unwrap().iter().map(String::from).collect())
        .collect();
    (head, rows)
}

#[test]
fn solve_writes_table_manifest_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let o = qvpde(
        &["solve", "--preset", "kpz", "--steps", "2", "--netlist"],
        dir.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let (head, rows) = csv_rows(&dir.path().join("solution.csv"));
    assert_eq!(
        head,
        ["step", "t", "gridpoint", "x", "y", "quantum", "classical"]
    );
    assert_eq!(rows.len(), 3 * 32);
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(m["steps"].as_array().unwrap().len(), 2);
    assert!(m["steps"][0]["wall_time_s"].as_f64().is_some());
    assert_eq!(m["config"]["plan"]["u_stage"]["seed"], 1);
    assert!(m["versions"]["qvpde_core"].is_string());
    assert!(
        fs::read_to_string(dir.path().join("final_state.netlist"))
            .unwrap()
            .lines()
            .count()
            > 0
    );
}

#[test]
fn zero_steps_reports_read_in_only() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&qvpde(
            &["solve", "--preset", "bse1d-linear", "--steps", "0"],
            dir.path()
        )),
        0
    );
    let s: qvpde::commands::SolveSummary =
        serde_json::from_str(&fs::read_to_string(dir.path().join("summary.json")).unwrap())
            .unwrap();
    assert_eq!(s.steps, 0);
    assert!(s.read_in_error > 0.0 && s.read_in_error < 0.01);
}

#[test]
fn saved_config_replays_the_run() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&qvpde(
            &[
                "solve",
                "--preset",
                "buckmaster",
                "--steps",
                "2",
                "--seed",
                "4"
            ],
            a.path()
        )),
        0
    );
    let cfg = a.path().join("config.toml");
    assert_eq!(
        code(&qvpde(
            &["solve", "--config", cfg.to_str().unwrap()],
            b.path()
        )),
        0
    );
    let read = |d: &Path| fs::read(d.join("solution.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qvpde(&["solve"], dir.path())), 2);
    assert_eq!(code(&qvpde(&["solve", "--preset", "heat"], dir.path())), 2);
    assert_eq!(code(&qvpde(&["solve", "--bogus"], dir.path())), 2);
    assert_eq!(
        code(&qvpde(&["optimizer-bench", "--preset", "kpz"], dir.path())),
        2
    );
    let bad = dir.path().join("bad.toml");
    let text = qvpde::ExperimentConfig::preset("kpz")
        .unwrap()
        .to_toml()
        .unwrap()
        .replacen("family = \"zgr_real\"", "family = \"zzz\"", 1);
    fs::write(&bad, text).unwrap();
    let o = qvpde(&["solve", "--config", bad.to_str().unwrap()], dir.path());
    assert_eq!(code(&o), 2);
    assert!(
        String::from_utf8_lossy(&o.stderr).contains("plan.u_ansatz.family"),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let o = Command::new(env!("CARGO_BIN_EXE_qvpde"))
        .args(["verify", "--suite"])
        .env("QVPDE_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn thread_cap_is_honoured() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_qvpde"))
        .args(["solve", "--preset", "kpz", "--steps", "1", "--out"])
        .arg(dir.path())
        .env("QVPDE_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(code(&o), 0);
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("manifest.json")).unwrap())
            .unwrap();
    assert_eq!(m["threads"], 2);
}

#[test]
fn verify_suites() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&qvpde(&["verify", "--suite"], dir.path())), 0);
    let o = qvpde(&["verify"], dir.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r: qvpde::commands::VerifyReport =
        serde_json::from_str(&fs::read_to_string(dir.path().join("verify.json")).unwrap()).unwrap();
    assert_eq!(r.suites.len(), 2);
    assert!(r
        .suites
        .iter()
        .all(|s| s.checks > 0 && s.max_deviation < 1e-10));
    assert_eq!(
        code(&qvpde(
            &["verify", "--suite", "modes", "--perturb", "1e-6"],
            dir.path()
        )),
        4
    );
}

#[test]
fn optimizer_bench_is_deterministic_and_monotone() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        assert_eq!(
            code(&qvpde(&["optimizer-bench", "--budget", "400"], d.path())),
            0
        );
    }
    let read = |d: &Path| fs::read(d.join("optimizer_bench.csv")).unwrap();
    assert_eq!(read(a.path()), read(b.path()));
    let (head, rows) = csv_rows(&a.path().join("optimizer_bench.csv"));
    assert_eq!(head, ["ansatz", "algorithm", "budget", "best_cost"]);
    for w in rows.windows(2).filter(|w| w[0][..2] == w[1][..2]) {
        let (c0, c1): (f64, f64) = (w[0][3].parse().unwrap(), w[1][3].parse().unwrap());
        assert!(c1 <= c0);
    }
    assert!(rows.iter().any(|r| r[2] == "400"));
}

#[test]
fn shot_scaling_tables() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&qvpde(
            &["shot-scaling", "--trials", "3", "--seed", "5"],
            dir.path()
        )),
        0
    );
    let (head, rows) = csv_rows(&dir.path().join("shot_scaling.csv"));
    assert_eq!(
        head,
        [
            "n",
            "shots",
            "trial",
            "estimate",
            "exact",
            "fractional_error"
        ]
    );
    assert_eq!(rows.len(), 4 * 5 * 3);
    let s: qvpde::commands::ScalingSummary = serde_json::from_str(
        &fs::read_to_string(dir.path().join("shot_scaling_fits.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(s.fits.len(), 4);
    assert!(s.fits.iter().all(|f| f.slope < 0.0));
}

#[test]
fn expressibility_table() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(
        code(&qvpde(&["expressibility", "--budget", "300"], dir.path())),
        0
    );
    let (head, rows) = csv_rows(&dir.path().join("expressibility.csv"));
    assert_eq!(head[..3], ["family", "n", "config"]);
    assert_eq!(rows.iter().filter(|r| r[0] == "zgr_qft").count(), 4 + 6 + 6);
    assert_eq!(rows.iter().filter(|r| r[0] == "ula").count(), 6);
}
