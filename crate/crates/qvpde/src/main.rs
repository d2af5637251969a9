use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use qvpde::commands::{self, Overrides, SolveOptions};
use qvpde::config::Suite;
use qvpde::{CliError, ExperimentConfig};

#[derive(Parser)]
#[command(name = "qvpde", version, about = "Variational PDE solver experiments")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// Named configuration (bse1d-nonlinear, bse1d-linear, bse2d, buckmaster, kpz).
    #[arg(long, global = true, conflicts_with = "config")]
    preset: Option<String>,
    /// TOML experiment config.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Seed for every optimizer and sampler.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Number of timesteps.
    #[arg(long, global = true)]
    steps: Option<usize>,
    /// Cost evaluations per optimizer run.
    #[arg(long, global = true)]
    budget: Option<usize>,
    /// Print the resolved config as TOML and exit.
    #[arg(long, global = true)]
    print_config: bool,
}

#[derive(Subcommand)]
enum Command {
    /// Time evolution with per-step CSV and a JSON manifest.
    Solve {
        /// Also write the final state's preparation circuit.
        #[arg(long)]
        netlist: bool,
    },
    /// Best cost versus budget on the first nonlinear Black–Scholes step.
    OptimizerBench,
    /// Fractional cost error versus shots.
    ShotScaling {
        #[arg(long)]
        trials: Option<u64>,
    },
    /// Fit error versus parameter count for both ansatz families.
    Expressibility,
    /// Circuit and cost-mode consistency checks.
    Verify {
        /// Suites to run; pass the flag without values to run none.
        #[arg(long, value_enum, num_args = 0.., value_delimiter = ',')]
        suite: Option<Vec<Suite>>,
        /// Relative perturbation of the expanded coefficients (negative control).
        #[arg(long)]
        perturb: Option<f64>,
        #[arg(long)]
        tolerance: Option<f64>,
    },
}

fn fallback(c: &Command) -> Option<&'static str> {
    match c {
        Command::Solve { .. } => None,
        _ => Some("bse1d-nonlinear"),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    if let Some(n) = qvpde::threads_from_env(std::env::var("QVPDE_THREADS").ok().as_deref())? {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Usage(e.to_string()))?;
    }
    let c = &cli.common;
    let ov = Overrides {
        seed: c.seed,
        steps: c.steps,
        budget: c.budget,
        out: c.out.clone(),
    };
    let mut cfg: ExperimentConfig = commands::resolve(
        c.preset.as_deref(),
        c.config.as_deref(),
        fallback(&cli.command),
        &ov,
    )?;
    match &cli.command {
        Command::ShotScaling { trials: Some(t) } => cfg.shot_scaling.trials = *t,
        Command::Verify {
            suite,
            perturb,
            tolerance,
        } => {
            if let Some(s) = suite {
                cfg.verify.suites = s.clone();
            }
            if let Some(p) = perturb {
                cfg.verify.perturbation = *p;
            }
            if let Some(t) = tolerance {
                cfg.verify.tolerance = *t;
            }
        }
        _ => {}
    }
    cfg.validate()?;
    if c.print_config {
        print!("{}", cfg.to_toml()?);
        return Ok(());
    }
    let dir = cfg.output_dir.display().to_string();
    match cli.command {
        Command::Solve { netlist } => {
            let s = commands::solve(&cfg, SolveOptions { netlist })?;
            println!(
                "{}: {} steps, read-in error {:.4}%, final error {:.4}% ({:.1} s) -> {dir}",
                s.experiment,
                s.steps,
                100.0 * s.read_in_error,
                100.0 * s.final_error,
                s.wall_time_s
            );
        }
        Command::OptimizerBench => {
            let (_, s) = commands::optimizer_bench(&cfg)?;
            println!("dense minimum {:.6e}", s.dense_minimum);
            for r in &s.runs {
                println!(
                    "{} {}: best {:.6e} after {} evaluations",
                    r.ansatz, r.algorithm, r.best_cost, r.evaluations
                );
            }
            println!("-> {dir}");
        }
        Command::ShotScaling { .. } => {
            let (_, s) = commands::shot_scaling(&cfg)?;
            for f in &s.fits {
                println!(
                    "n={} slope {:.4} intercept {:.4} median at max shots {:.4e}",
                    f.n, f.slope, f.intercept, f.median_at_max
                );
            }
            println!("-> {dir}");
        }
        Command::Expressibility => {
            let s = commands::expressibility(&cfg)?;
            for r in &s.rows {
                println!(
                    "{} n={} config={} params={} error {:.4e}",
                    r.family, r.n, r.config, r.parameters, r.sampled_error
                );
            }
            println!("-> {dir}");
        }
        Command::Verify { .. } => {
            let r = commands::verify(&cfg)?;
            for s in &r.suites {
                println!(
                    "{:?}: {} checks, max deviation {:.3e}",
                    s.suite, s.checks, s.max_deviation
                );
            }
            println!("verification passed ({} suites)", r.suites.len());
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
