//! Command-line driver for the coupled-scallop experiments.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use scallop_core::experiments::{
    lambda_study, null_tests, phase_sweep, single_trajectory, theory_vs_numeric_report, write_trajectory,
    ConfigError, ExperimentError, RunConfig, StrokeKind,
};
use scallop_core::LengthConvention;

#[derive(Parser)]
#[command(name = "scallops", version, about = "Two hydrodynamically coupled scallops")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    /// JSON run configuration; missing fields take the validation defaults.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir` from the config).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Integration step in seconds.
    #[arg(long, global = true)]
    dt: Option<f64>,
    /// Number of stroke periods.
    #[arg(long, global = true)]
    periods: Option<usize>,
    #[arg(long, global = true, value_enum)]
    convention: Option<Convention>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    /// Lengths scaled by `L`.
    Paper,
    /// Lengths in micrometres as given.
    Dimensional,
}

#[derive(Clone, Copy, ValueEnum)]
enum Stroke {
    Sinusoidal,
    Square,
}

#[derive(Subcommand)]
enum Command {
    /// Net displacement against phase; writes phase_sweep.csv and .svg.
    PhaseSweep,
    /// Theory against numerics at phi = pi/2; writes report.json.
    Report,
    /// C~(lambda) and its bounds; writes lambda_study.csv and .svg.
    LambdaStudy {
        #[arg(long, default_value_t = 10.0)]
        kappa: f64,
    },
    /// Decoupled and synchronized strokes must not swim; exits 4 otherwise.
    NullTests,
    /// One trajectory; writes trajectory.csv.
    Integrate {
        #[arg(long, default_value_t = std::f64::consts::FRAC_PI_2)]
        phi: f64,
        #[arg(long, value_enum, default_value_t = Stroke::Sinusoidal)]
        stroke: Stroke,
    },
}

const EXIT_CONFIG: u8 = 2;
const EXIT_SINGULAR: u8 = 3;
const EXIT_NULL_FAILED: u8 = 4;

fn load_config(common: &Common) -> Result<RunConfig, ExperimentError> {
    let mut cfg = match &common.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &common.out {
        cfg.output_dir = out.clone();
    }
    if let Some(dt) = common.dt {
        cfg.dt = Some(dt);
    }
    if let Some(n) = common.periods {
        cfg.n_periods = n;
    }
    if let Some(c) = common.convention {
        cfg.length_convention = match c {
            Convention::Paper => LengthConvention::Nondimensional,
            Convention::Dimensional => LengthConvention::Dimensional,
        };
    }
    cfg.validate()?;
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<u8, ExperimentError> {
    let cfg = load_config(&cli.common)?;
    let out = cfg.output_dir.clone();
    match cli.command {
        Command::PhaseSweep => {
            let sweep = phase_sweep(&cfg)?;
            for path in sweep.write(&out)? {
                println!("wrote {}", path.display());
            }
            println!(
                "argmax phi = {:?}, R^2(sin^2) = {:.4}, R^2(|sin|^3) = {:.4}",
                sweep.argmax_phi, sweep.sin2_fit.r_squared, sweep.sin3_fit.r_squared
            );
            for (phi, msg) in &sweep.failures {
                eprintln!("phi = {phi}: {msg}");
            }
            if sweep.any_singular {
                return Ok(EXIT_SINGULAR);
            }
        }
        Command::Report => {
            let report = theory_vs_numeric_report(&cfg)?;
            println!("wrote {}", report.write(&out)?.display());
            println!(
                "delta_m theory = {:.6e}, numeric = {:.6e}, rel err = {:?}",
                report.delta_m_theory, report.delta_m_numeric, report.relative_error
            );
        }
        Command::LambdaStudy { kappa } => {
            let study = lambda_study(&cfg, kappa)?;
            for path in study.write(&out)? {
                println!("wrote {}", path.display());
            }
            println!(
                "lambda in ({:.6}, {:.6}), C~ in ({:.6}, {:.6})",
                study.bounds.lower, study.bounds.upper, study.c_tilde_lower, study.c_tilde_upper
            );
        }
        Command::NullTests => {
            let report = null_tests(&cfg)?;
            println!("wrote {}", report.write(&out)?.display());
            println!(
                "decoupled drift {:.3e} (tol {:.3e}), synchronized ratio {:.3e}",
                report.single_scallop_drift, report.single_scallop_tolerance, report.synchronized_ratio
            );
            if !report.passed {
                eprintln!("null tests failed");
                return Ok(EXIT_NULL_FAILED);
            }
        }
        Command::Integrate { phi, stroke } => {
            let kind = match stroke {
                Stroke::Sinusoidal => StrokeKind::Sinusoidal,
                Stroke::Square => StrokeKind::Square,
            };
            let traj = single_trajectory(&cfg, phi, kind)?;
            println!("wrote {}", write_trajectory(&traj, &out)?.display());
            println!("delta_m = {:.6e}", traj.summary.delta_m);
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    env_logger::init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            let code = match &e {
                ExperimentError::Config(ConfigError::Model(m)) | ExperimentError::Model(m) if m.is_singular() => {
                    EXIT_SINGULAR
                }
                ExperimentError::Config(_) => EXIT_CONFIG,
                _ => 1,
            };
            ExitCode::from(code)
        }
    }
}
