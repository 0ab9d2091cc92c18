//! Leading-order theory against the integrated sinusoidal stroke at the
//! optimal phase, with the loop-area comparison and the rate-doubling check.
//!
//! `cargo run --example theory_vs_numerics [config.json]`

use scallop_core::experiments::{theory_vs_numeric_report, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = match std::env::args().nth(1) {
        Some(path) => RunConfig::load(path.as_ref())?,
        None => RunConfig::default(),
    };
    let report = theory_vs_numeric_report(&config)?;
    println!("{}", report.to_json());
    println!(
        "numeric {:.5e} vs theory {:.5e}: the smooth loop overshoots by {:.1}%",
        report.delta_m_numeric,
        report.delta_m_theory,
        100.0 * report.relative_error.unwrap_or(f64::NAN)
    );
    Ok(())
}
