//! Net motion after one square stroke in the control plane against the
//! leading-order prediction `-gamma1 gamma2 tau^2 [v1, v2]`, as the loop shrinks.

use std::f64::consts::FRAC_PI_2;

use scallop_core::dynamics::{initial_state, square_stroke_displacement_prediction};
use scallop_core::experiments::RunConfig;
use scallop_core::integrator::integrate;
use scallop_core::ControlStroke;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let params = RunConfig::default().validate()?.params;
    let (eps, phi) = (0.04, FRAC_PI_2);
    println!("{:>8} {:>13} {:>13} {:>13} {:>13}", "tau", "dx_m", "predicted", "dtheta1", "predicted");
    for tau in [0.02, 0.01, 0.005, 0.0025] {
        let stroke = ControlStroke::Square {
            gamma1: 1.0,
            gamma2: 1.0,
            tau,
        };
        let state0 = initial_state(0.0, eps, phi, params.distance);
        let traj = integrate(&state0, &params, &stroke, 1, tau / 100.0)?;
        let d = traj.net_change();
        let p = square_stroke_displacement_prediction(1.0, 1.0, tau, eps, phi, 0.0, &params);
        println!(
            "{tau:>8} {:>13.5e} {:>13.5e} {:>13.5e} {:>13.5e}",
            traj.summary.midpoint_displacement[0],
            (p[0] + p[3]) / 2.0,
            d[2],
            p[2]
        );
    }
    Ok(())
}
