//! Admissible interaction strengths for a separation band `kappa a < h < L / kappa`
//! and the corresponding range of the displacement constant.

use scallop_core::experiments::{lambda_study, RunConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let config = RunConfig::default();
    for kappa in [7.0, 10.0, 20.0, 39.0] {
        let study = lambda_study(&config, kappa)?;
        println!(
            "kappa = {kappa:>4}: lambda in ({:.4}, {:.4}), C~ in ({:.5}, {:.5}), monotone = {}",
            study.bounds.lower, study.bounds.upper, study.c_tilde_lower, study.c_tilde_upper, study.strictly_increasing
        );
    }
    match lambda_study(&config, 3.0) {
        Err(e) => println!("kappa = 3: {e}"),
        Ok(_) => unreachable!("kappa below sqrt(L/a) is rejected"),
    }
    Ok(())
}
