//! The two control vector fields and their Lie bracket at the perturbed
//! aligned state, numerically and from the small-amplitude expansion.

use std::f64::consts::FRAC_PI_2;

use scallop_core::dynamics::{
    control_vector_fields, expansion_coefficients, initial_state, lie_bracket_numeric, DEFAULT_BRACKET_STEP,
};
use scallop_core::experiments::RunConfig;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = RunConfig::default().validate()?.params;
    let labels = ["x1", "y1", "theta1", "x2", "y2", "theta2", "sigma1", "sigma2"];
    for eps in [0.08, 0.04, 0.02] {
        let state = initial_state(0.0, eps, FRAC_PI_2, params.distance);
        let [v1, v2] = control_vector_fields(&state, &params)?;
        let bracket = lie_bracket_numeric(&state, &params, DEFAULT_BRACKET_STEP)?;
        let expansion = expansion_coefficients(FRAC_PI_2, 0.0, &params).bracket(eps);
        println!("eps = {eps}");
        println!("  {:>7} {:>13} {:>13} {:>13} {:>13}", "", "v1", "v2", "[v1,v2]", "expansion");
        for k in 0..8 {
            println!(
                "  {:>7} {:>13.5e} {:>13.5e} {:>13.5e} {:>13.5e}",
                labels[k], v1[k], v2[k], bracket[k], expansion[k]
            );
        }
    }
    Ok(())
}
