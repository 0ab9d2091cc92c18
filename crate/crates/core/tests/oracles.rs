//! Values frozen from an independent implementation that rebuilds `R` and
//! `Phi` by Gauss-Legendre quadrature of the force densities and integrates
//! with RK4 at `period / 2000`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4};

use approx::assert_relative_eq;
use nalgebra::Matrix3;
use scallop_core::dynamics::{constant_c, theoretical_midpoint_displacement};
use scallop_core::experiments::{run_sinusoidal, RunConfig};
use scallop_core::hydrodynamics::assemble;
use scallop_core::{Scallop, SystemState};

// (phi, delta_m, delta_theta1)
const SINUSOIDAL_ORACLE: [(f64, f64, f64); 3] = [
    (FRAC_PI_2, 2.0345260655e-6, 1.6276188465e-4),
    (FRAC_PI_4, 7.2038546126e-7, 3.3760243859e-5),
    (FRAC_PI_3, 1.3231693747e-6, 7.0573931356e-5),
];

#[test]
fn sinusoidal_stroke_matches_independent_oracle() {
    let run = RunConfig::default().validate().unwrap();
    for (phi, delta_m, dtheta) in SINUSOIDAL_ORACLE {
        let traj = run_sinusoidal(&run, phi).unwrap();
        assert_relative_eq!(traj.summary.delta_m, delta_m, max_relative = 1e-9);
        assert_relative_eq!(traj.summary.rotations[0], dtheta, max_relative = 1e-9);
        assert_relative_eq!(traj.summary.rotations[1], dtheta, max_relative = 1e-9);
    }
}

#[test]
fn validation_constants() {
    let run = RunConfig::default().validate().unwrap();
    assert_relative_eq!(run.params.lambda(), 0.6241963505817848, max_relative = 1e-14);
    assert_relative_eq!(constant_c(&run.params).unwrap(), 0.01396853038468368, max_relative = 1e-12);
    let theory = theoretical_midpoint_displacement(FRAC_PI_2, run.eps, run.gamma(), run.gamma(), run.tau(), &run.params).unwrap();
    assert_relative_eq!(theory, 1.7232983620178062e-6, max_relative = 1e-12);
}

#[test]
fn aligned_determinant_closed_form() {
    let run = RunConfig::default().validate().unwrap();
    let state = SystemState::aligned(0.7, run.params.distance);
    let asm = assemble(&state, &run.params).unwrap();
    let r11: Matrix3<f64> = asm.block(Scallop::One, Scallop::One);
    let lambda = run.params.lambda();
    let expected = r11.determinant().powi(2) * (1.0 - lambda * lambda).powi(3);
    assert_relative_eq!(asm.det, expected, max_relative = 1e-12);
}
