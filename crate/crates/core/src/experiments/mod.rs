//! Batch experiments: phase sweeps, theory-vs-numerics reports, interaction
//! studies and null tests, each with CSV/JSON/SVG emission.
//!
//! Sweep points run concurrently; results are collected and sorted by phase
//! before anything is written, so identical configurations produce
//! byte-identical files.

mod config;

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

pub use config::{standard_phases, ConfigError, RunConfig, ValidatedRun};

use crate::dynamics::{constant_c_tilde, initial_state, lambda_bounds, theoretical_midpoint_displacement, LambdaBounds};
use crate::error::ModelError;
use crate::integrator::{integrate, square_vs_smooth_area_report, AreaReport, ControlStroke, Trajectory};
use crate::plot::{LineChart, Series};

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Model(#[from] ModelError),
    #[error("cannot write {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
}

impl ExperimentError {
    pub fn is_singular(&self) -> bool {
        matches!(self, ExperimentError::Model(e) if e.is_singular())
    }
}

pub type ExperimentResult<T> = std::result::Result<T, ExperimentError>;

const REL_ERR_FLOOR: f64 = 1e-300;

fn relative_error(numeric: f64, theory: f64) -> f64 {
    (numeric - theory).abs() / theory.max(REL_ERR_FLOOR)
}

/// Integrates the sinusoidal stroke with phase `phi` from the perturbed
/// aligned configuration.
pub fn run_sinusoidal(run: &ValidatedRun, phi: f64) -> Result<Trajectory, ModelError> {
    let state0 = initial_state(run.theta0, run.eps, phi, run.params.distance);
    integrate(&state0, &run.params, &run.sinusoidal(phi), run.n_periods, run.dt)
}

/// Leading-order midpoint displacement of the square stroke matched to the
/// sinusoid (`gamma1 = gamma2 = eps omega`, `tau = pi / (2 omega)`),
/// accumulated over `n_periods`.
pub fn matched_theory(run: &ValidatedRun, phi: f64) -> Result<f64, ModelError> {
    let per_period = theoretical_midpoint_displacement(phi, run.eps, run.gamma(), run.gamma(), run.tau(), &run.params)?;
    Ok(per_period * run.n_periods as f64)
}

/// One phase of a sweep.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRecord {
    pub phi: f64,
    pub delta_m_numeric: f64,
    pub delta_m_theory: f64,
    pub relative_error: f64,
    /// Net rotation of scallop one.
    pub rotation_net: f64,
    /// Wall time of the run; not written to the CSV.
    pub runtime: f64,
}

/// Least-squares fit of `y = A |sin(phi)|^power` through the origin.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SineFit {
    pub power: f64,
    pub amplitude: f64,
    /// Coefficient of determination `1 - SS_res / SS_tot` with the total sum
    /// of squares taken about the mean.
    pub r_squared: f64,
}

pub fn fit_sine_power(phases: &[f64], values: &[f64], power: f64) -> SineFit {
    let basis: Vec<f64> = phases.iter().map(|p| p.sin().abs().powf(power)).collect();
    let sxx: f64 = basis.iter().map(|b| b * b).sum();
    let sxy: f64 = basis.iter().zip(values).map(|(b, y)| b * y).sum();
    let amplitude = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let mean = values.iter().sum::<f64>() / values.len().max(1) as f64;
    let ss_res: f64 = basis.iter().zip(values).map(|(b, y)| (y - amplitude * b).powi(2)).sum();
    let ss_tot: f64 = values.iter().map(|y| (y - mean).powi(2)).sum();
    SineFit {
        power,
        amplitude,
        r_squared: if ss_tot > 0.0 { 1.0 - ss_res / ss_tot } else { f64::NAN },
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PhaseSweep {
    pub lambda: f64,
    pub records: Vec<SweepRecord>,
    /// Phases whose run failed, with the error message.
    pub failures: Vec<(f64, String)>,
    pub argmax_phi: Option<f64>,
    pub sin2_fit: SineFit,
    pub sin3_fit: SineFit,
    #[serde(skip)]
    pub any_singular: bool,
}

fn sweep_point(run: &ValidatedRun, phi: f64) -> Result<SweepRecord, ModelError> {
    let start = Instant::now();
    let traj = run_sinusoidal(run, phi)?;
    let theory = matched_theory(run, phi)?;
    let numeric = traj.summary.delta_m;
    Ok(SweepRecord {
        phi,
        delta_m_numeric: numeric,
        delta_m_theory: theory,
        relative_error: relative_error(numeric, theory),
        rotation_net: traj.summary.rotations[0],
        runtime: start.elapsed().as_secs_f64(),
    })
}

/// Net midpoint displacement of the sinusoidal stroke for every configured
/// phase, against the leading-order square-stroke theory.
pub fn phase_sweep(config: &RunConfig) -> ExperimentResult<PhaseSweep> {
    let run = config.validate()?;
    let mut outcomes: Vec<(f64, Result<SweepRecord, ModelError>)> =
        run.phases.par_iter().map(|&phi| (phi, sweep_point(&run, phi))).collect();
    outcomes.sort_by(|a, b| a.0.total_cmp(&b.0));

    let mut records = Vec::new();
    let mut failures = Vec::new();
    let mut any_singular = false;
    for (phi, outcome) in outcomes {
        match outcome {
            Ok(r) => records.push(r),
            Err(e) => {
                any_singular |= e.is_singular();
                log::warn!("phase {phi}: {e}");
                failures.push((phi, e.to_string()));
            }
        }
    }
    let argmax_phi = records
        .iter()
        .max_by(|a, b| a.delta_m_numeric.total_cmp(&b.delta_m_numeric))
        .map(|r| r.phi);
    let phases: Vec<f64> = records.iter().map(|r| r.phi).collect();
    let values: Vec<f64> = records.iter().map(|r| r.delta_m_numeric).collect();
    Ok(PhaseSweep {
        lambda: run.params.lambda(),
        sin2_fit: fit_sine_power(&phases, &values, 2.0),
        sin3_fit: fit_sine_power(&phases, &values, 3.0),
        records,
        failures,
        argmax_phi,
        any_singular,
    })
}

fn write_file(dir: &Path, name: &str, contents: &str) -> ExperimentResult<PathBuf> {
    let path = dir.join(name);
    fs::create_dir_all(dir)
        .and_then(|_| fs::write(&path, contents))
        .map_err(|source| ExperimentError::Io {
            path: path.clone(),
            source,
        })?;
    Ok(path)
}

impl PhaseSweep {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("phi,delta_m_numeric,delta_m_theory,rel_err\n");
        for r in &self.records {
            let _ = writeln!(
                out,
                "{:.16e},{:.16e},{:.16e},{:.16e}",
                r.phi, r.delta_m_numeric, r.delta_m_theory, r.relative_error
            );
        }
        out
    }

    pub fn to_svg(&self) -> String {
        let numeric = self.records.iter().map(|r| (r.phi, r.delta_m_numeric)).collect();
        let theory = (0..=200)
            .map(|k| {
                let phi = PI * k as f64 / 200.0;
                let peak = self
                    .records
                    .iter()
                    .find(|r| r.phi.sin() != 0.0)
                    .map(|r| r.delta_m_theory / r.phi.sin().powi(2))
                    .unwrap_or(0.0);
                (phi, peak * phi.sin().powi(2))
            })
            .collect();
        LineChart {
            title: format!("Net midpoint displacement vs phase (lambda = {:.6})", self.lambda),
            x_label: "phase difference phi [rad]".into(),
            y_label: "delta_m".into(),
            series: vec![
                Series {
                    name: "numerical (sinusoidal stroke)".into(),
                    points: numeric,
                    color: "#1f4fd1",
                    dashed: false,
                },
                Series {
                    name: "leading-order theory (sin^2)".into(),
                    points: theory,
                    color: "#d12a1f",
                    dashed: true,
                },
            ],
            markers: vec![(FRAC_PI_2, "pi/2".into())],
            y_max: None,
        }
        .render()
    }

    /// Writes `phase_sweep.csv` and `phase_sweep.svg`.
    pub fn write(&self, dir: &Path) -> ExperimentResult<Vec<PathBuf>> {
        Ok(vec![
            write_file(dir, "phase_sweep.csv", &self.to_csv())?,
            write_file(dir, "phase_sweep.svg", &self.to_svg())?,
        ])
    }
}

/// Effect of running the same stroke at twice the frequency.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RateDoubling {
    pub omega_freq: f64,
    /// The matched square stroke has `gamma = eps omega` at the new
    /// frequency but `tau` halves, so the leading-order value is unchanged
    /// per stroke; at fixed `tau` it would quadruple.
    pub delta_m_theory: f64,
    /// Leading-order value with `gamma` doubled and `tau` kept.
    pub delta_m_theory_fixed_tau: f64,
    pub theory_fixed_tau_ratio: f64,
    pub delta_m_numeric: f64,
    /// `|numeric(2 omega) - numeric(omega)| / numeric(omega)`.
    pub numeric_relative_change: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TheoryReport {
    pub phi: f64,
    pub lambda: f64,
    pub length: f64,
    pub eps: f64,
    pub omega_freq: f64,
    pub gamma: f64,
    pub tau: f64,
    pub constant_c: f64,
    pub delta_m_theory: f64,
    pub delta_m_numeric: f64,
    /// `None` when the theoretical value vanishes.
    pub relative_error: Option<f64>,
    pub midpoint_displacement: [f64; 2],
    pub rotations: [f64; 2],
    pub richardson_error: Option<f64>,
    pub areas: AreaReport,
    pub rate_doubling: RateDoubling,
}

/// Leading-order theory against numerical integration at `phi = pi / 2`.
pub fn theory_vs_numeric_report(config: &RunConfig) -> ExperimentResult<TheoryReport> {
    let run = config.validate()?;
    let phi = FRAC_PI_2;
    let traj = run_sinusoidal(&run, phi)?;
    let theory = matched_theory(&run, phi)?;
    let numeric = traj.summary.delta_m;

    let fast = RunConfig {
        omega_freq: 2.0 * config.omega_freq,
        dt: config.dt.map(|dt| dt / 2.0),
        ..config.clone()
    }
    .validate()?;
    let fast_traj = run_sinusoidal(&fast, phi)?;
    let fast_theory = matched_theory(&fast, phi)?;
    let fixed_tau = theoretical_midpoint_displacement(phi, run.eps, fast.gamma(), fast.gamma(), run.tau(), &run.params)?
        * run.n_periods as f64;

    Ok(TheoryReport {
        phi,
        lambda: run.params.lambda(),
        length: run.params.length,
        eps: run.eps,
        omega_freq: run.omega_freq,
        gamma: run.gamma(),
        tau: run.tau(),
        constant_c: crate::dynamics::constant_c(&run.params)?,
        delta_m_theory: theory,
        delta_m_numeric: numeric,
        relative_error: (theory > REL_ERR_FLOOR).then(|| relative_error(numeric, theory)),
        midpoint_displacement: traj.summary.midpoint_displacement,
        rotations: traj.summary.rotations,
        richardson_error: traj.summary.richardson_error,
        areas: square_vs_smooth_area_report(run.eps, run.omega_freq),
        rate_doubling: RateDoubling {
            omega_freq: fast.omega_freq,
            delta_m_theory: fast_theory,
            delta_m_theory_fixed_tau: fixed_tau,
            theory_fixed_tau_ratio: fixed_tau / theory.max(REL_ERR_FLOOR),
            delta_m_numeric: fast_traj.summary.delta_m,
            numeric_relative_change: relative_error(fast_traj.summary.delta_m, numeric),
        },
    })
}

impl TheoryReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `report.json`.
    pub fn write(&self, dir: &Path) -> ExperimentResult<PathBuf> {
        write_file(dir, "report.json", &self.to_json())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LambdaStudy {
    pub kappa: f64,
    pub length: f64,
    pub bounds: LambdaBounds,
    pub c_tilde_lower: f64,
    pub c_tilde_upper: f64,
    pub config_lambda: f64,
    /// `(lambda, C~(lambda))` on a uniform grid of `(0, 1)`.
    pub grid: Vec<(f64, f64)>,
    pub strictly_increasing: bool,
    /// `C~(lower) < C~(lambda) < C~(upper)` for every grid point strictly inside the band.
    pub band_bounds_hold: bool,
}

const LAMBDA_GRID: usize = 400;

/// Tabulates `C~(lambda)` and the bounds implied by `kappa a < h < L / kappa`.
pub fn lambda_study(config: &RunConfig, kappa: f64) -> ExperimentResult<LambdaStudy> {
    let run = config.validate()?;
    let bounds = lambda_bounds(kappa, config.thickness_um, config.length_um).map_err(ConfigError::from)?;
    if !bounds.kappa_admissible(kappa) {
        return Err(ConfigError::Invalid(format!(
            "kappa = {kappa} outside the admissible window ({}, {})",
            bounds.kappa_window.0, bounds.kappa_window.1
        ))
        .into());
    }
    let length = run.params.length;
    let grid: Vec<(f64, f64)> = (1..LAMBDA_GRID)
        .map(|k| {
            let lambda = k as f64 / LAMBDA_GRID as f64;
            constant_c_tilde(lambda, length).map(|c| (lambda, c))
        })
        .collect::<Result<_, _>>()?;
    let c_lower = constant_c_tilde(bounds.lower, length)?;
    let c_upper = constant_c_tilde(bounds.upper, length)?;
    let strictly_increasing = grid.windows(2).all(|w| w[1].1 > w[0].1);
    let band_bounds_hold = grid
        .iter()
        .filter(|(l, _)| *l > bounds.lower && *l < bounds.upper)
        .all(|&(_, c)| c_lower < c && c < c_upper);
    Ok(LambdaStudy {
        kappa,
        length,
        bounds,
        c_tilde_lower: c_lower,
        c_tilde_upper: c_upper,
        config_lambda: run.params.lambda(),
        grid,
        strictly_increasing,
        band_bounds_hold,
    })
}

impl LambdaStudy {
    pub fn to_csv(&self) -> String {
        let mut out = String::from("lambda,c_tilde\n");
        for (l, c) in &self.grid {
            let _ = writeln!(out, "{l:.16e},{c:.16e}");
        }
        out
    }

    pub fn to_svg(&self) -> String {
        LineChart {
            title: format!("C~(lambda), kappa = {}", self.kappa),
            x_label: "interaction strength lambda".into(),
            y_label: "C~".into(),
            series: vec![Series {
                name: "C~(lambda)".into(),
                points: self.grid.clone(),
                color: "#1f4fd1",
                dashed: false,
            }],
            markers: vec![
                (self.bounds.lower, "lambda_*".into()),
                (self.bounds.upper, "lambda^*".into()),
                (1.0, "pole".into()),
            ],
            y_max: Some(4.0 * self.c_tilde_upper),
        }
        .render()
    }

    /// Writes `lambda_study.csv` and `lambda_study.svg`.
    pub fn write(&self, dir: &Path) -> ExperimentResult<Vec<PathBuf>> {
        Ok(vec![
            write_file(dir, "lambda_study.csv", &self.to_csv())?,
            write_file(dir, "lambda_study.svg", &self.to_svg())?,
        ])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NullTestReport {
    /// Largest `|Delta(x, y, theta)|` of either scallop with the
    /// interaction switched off.
    pub single_scallop_drift: f64,
    pub single_scallop_tolerance: f64,
    pub single_scallop_passed: bool,
    /// Midpoint displacement of the synchronized stroke (`phi = 0`).
    pub synchronized_displacement: f64,
    /// The same at `phi = pi / 2`.
    pub quadrature_displacement: f64,
    pub synchronized_ratio: f64,
    pub synchronized_passed: bool,
    pub eps_values: Vec<f64>,
    pub eps_quadrature: Vec<f64>,
    pub eps_synchronized: Vec<f64>,
    /// Log-log slope of the `phi = pi / 2` displacement against `eps`.
    pub quadrature_eps_slope: f64,
    /// Same for `phi = 0`; `None` when every residual sits at the noise floor.
    pub synchronized_eps_slope: Option<f64>,
    pub eps_order_passed: bool,
    pub passed: bool,
}

/// Fraction of the out-of-phase displacement the synchronized stroke may reach.
pub const SYNCHRONIZED_RATIO_LIMIT: f64 = 1e-2;
/// Hard ceiling on the decoupled drift, in units of `L`.
pub const SINGLE_SCALLOP_LIMIT: f64 = 1e-9;

pub fn log_log_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = lx.len() as f64;
    let mx = lx.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    sxy / sxx
}

/// Scallop-theorem checks: decoupled scallops and synchronized strokes must
/// not move. Tolerances derive from the step-halving error estimate of each
/// run (times ten), capped at `1e-9 L` for the decoupled case.
pub fn null_tests(config: &RunConfig) -> ExperimentResult<NullTestReport> {
    let run = config.validate()?;
    let length = run.params.length;

    let decoupled = ValidatedRun {
        params: run.params.with_interaction(0.0)?,
        ..run.clone()
    };
    let single = run_sinusoidal(&decoupled, FRAC_PI_2)?;
    let change = single.net_change();
    let single_drift = change.rows(0, 6).iter().map(|v| v.abs()).fold(0.0, f64::max);
    let estimate = single.summary.richardson_error.unwrap_or(0.0);
    let single_tol = (10.0 * estimate).max(1e-12 * length).min(SINGLE_SCALLOP_LIMIT * length);

    let sync = run_sinusoidal(&run, 0.0)?;
    let quad = run_sinusoidal(&run, FRAC_PI_2)?;
    let ratio = sync.summary.delta_m / quad.summary.delta_m.max(REL_ERR_FLOOR);

    let eps_values: Vec<f64> = [0.25, 0.5, 1.0].iter().map(|f| f * run.eps).collect();
    let mut eps_quadrature = Vec::new();
    let mut eps_synchronized = Vec::new();
    let mut noise_floor = 0.0f64;
    for &eps in &eps_values {
        let scaled = ValidatedRun { eps, ..run.clone() };
        let q = run_sinusoidal(&scaled, FRAC_PI_2)?;
        let s = run_sinusoidal(&scaled, 0.0)?;
        noise_floor = noise_floor.max(10.0 * s.summary.richardson_error.unwrap_or(0.0));
        eps_quadrature.push(q.summary.delta_m);
        eps_synchronized.push(s.summary.delta_m);
    }
    noise_floor = noise_floor.max(1e-14 * length);
    let quadrature_eps_slope = log_log_slope(&eps_values, &eps_quadrature);
    let at_floor = eps_synchronized.iter().all(|d| *d <= noise_floor);
    let synchronized_eps_slope = (!at_floor).then(|| log_log_slope(&eps_values, &eps_synchronized));
    let eps_order_passed = synchronized_eps_slope.is_none_or(|s| s > quadrature_eps_slope);

    let single_scallop_passed = single_drift <= single_tol;
    let synchronized_passed = ratio <= SYNCHRONIZED_RATIO_LIMIT;
    Ok(NullTestReport {
        single_scallop_drift: single_drift,
        single_scallop_tolerance: single_tol,
        single_scallop_passed,
        synchronized_displacement: sync.summary.delta_m,
        quadrature_displacement: quad.summary.delta_m,
        synchronized_ratio: ratio,
        synchronized_passed,
        eps_values,
        eps_quadrature,
        eps_synchronized,
        quadrature_eps_slope,
        synchronized_eps_slope,
        eps_order_passed,
        passed: single_scallop_passed && synchronized_passed && eps_order_passed,
    })
}

impl NullTestReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes") + "\n"
    }

    /// Writes `null_tests.json`.
    pub fn write(&self, dir: &Path) -> ExperimentResult<PathBuf> {
        write_file(dir, "null_tests.json", &self.to_json())
    }
}

/// Which stroke to integrate for a single trajectory export.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StrokeKind {
    Sinusoidal,
    /// Square stroke matched to the sinusoid: `gamma = eps omega`, `tau = pi / (2 omega)`.
    Square,
}

/// Single trajectory of the configured stroke at phase `phi`.
pub fn single_trajectory(config: &RunConfig, phi: f64, kind: StrokeKind) -> ExperimentResult<Trajectory> {
    let run = config.validate()?;
    let state0 = initial_state(run.theta0, run.eps, phi, run.params.distance);
    let stroke = match kind {
        StrokeKind::Sinusoidal => run.sinusoidal(phi),
        StrokeKind::Square => ControlStroke::Square {
            gamma1: run.gamma(),
            gamma2: run.gamma(),
            tau: run.tau(),
        },
    };
    Ok(integrate(&state0, &run.params, &stroke, run.n_periods, run.dt)?)
}

/// Writes `trajectory.csv`.
pub fn write_trajectory(traj: &Trajectory, dir: &Path) -> ExperimentResult<PathBuf> {
    let mut buf = Vec::new();
    traj.write_csv(&mut buf).expect("writing to memory");
    write_file(dir, "trajectory.csv", &String::from_utf8(buf).expect("ascii csv"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn sine_fit_exact_data() {
        let phases = standard_phases();
        let values: Vec<f64> = phases.iter().map(|p| 3.0 * p.sin().powi(2)).collect();
        let fit = fit_sine_power(&phases, &values, 2.0);
        assert_relative_eq!(fit.amplitude, 3.0, max_relative = 1e-14);
        assert_relative_eq!(fit.r_squared, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn slope_of_power_law() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 5.0 * x.powf(2.5)).collect();
        assert_relative_eq!(log_log_slope(&xs, &ys), 2.5, epsilon = 1e-12);
    }

    #[test]
    fn relative_error_floor() {
        assert_eq!(relative_error(1.0, 0.0), 1.0 / REL_ERR_FLOOR);
        assert_relative_eq!(relative_error(1.15, 1.0), 0.15, epsilon = 1e-15);
    }

    #[test]
    fn lambda_study_rejects_inadmissible_kappa() {
        let cfg = RunConfig::default();
        assert!(matches!(lambda_study(&cfg, 5.0), Err(ExperimentError::Config(_))));
        assert!(matches!(lambda_study(&cfg, 45.0), Err(ExperimentError::Config(_))));
    }

    #[test]
    fn lambda_study_values() {
        let study = lambda_study(&RunConfig::default(), 10.0).unwrap();
        assert!(study.strictly_increasing);
        assert!(study.band_bounds_hold);
        assert_relative_eq!(study.c_tilde_lower, 0.0043, epsilon = 5e-5);
        assert_relative_eq!(study.c_tilde_upper, 0.0140, epsilon = 5e-5);
        let csv = study.to_csv();
        assert!(csv.starts_with("lambda,c_tilde\n"));
        assert_eq!(csv.lines().count(), LAMBDA_GRID);
        // the curve blows up towards the pole
        assert!(study.grid.last().unwrap().1 > 100.0 * study.c_tilde_upper);
    }
}
