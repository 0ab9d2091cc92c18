//! Integrates three periods of the sinusoidal stroke and streams the
//! trajectory as CSV to stdout.
//!
//! `cargo run --example trajectory_export > trajectory.csv`

use std::io;

use scallop_core::experiments::{single_trajectory, RunConfig, StrokeKind};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig {
        n_periods: 3,
        ..RunConfig::default()
    };
    let traj = single_trajectory(&config, std::f64::consts::FRAC_PI_2, StrokeKind::Sinusoidal)?;
    traj.write_csv(io::stdout().lock())?;
    eprintln!(
        "delta_m = {:.6e} over {} samples, min |det R| = {:.4e}",
        traj.summary.delta_m,
        traj.times.len(),
        traj.summary.min_abs_det
    );
    Ok(())
}
