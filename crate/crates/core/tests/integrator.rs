mod common;

use std::f64::consts::{FRAC_PI_2, PI};

use approx::assert_relative_eq;
use scallop_core::dynamics::{estimate_lambda0, initial_state};
use scallop_core::experiments::{log_log_slope, run_sinusoidal, RunConfig, ValidatedRun};
use scallop_core::integrator::{integrate, integrate_fixed};
use scallop_core::{ControlPair, ControlStroke, ModelError, SystemState};

use common::unit_params;

fn validation_run() -> ValidatedRun {
    RunConfig::default().validate().unwrap()
}

#[test]
fn reversed_stroke_retraces_the_path() {
    let run = validation_run();
    let params = run.params;
    for stroke in [
        run.sinusoidal(1.1),
        ControlStroke::Square {
            gamma1: 2.0,
            gamma2: 1.5,
            tau: 0.05,
        },
    ] {
        let state0 = initial_state(0.4, 0.1, 1.1, params.distance);
        let dt = stroke.period() / 2000.0;
        let forward = integrate(&state0, &params, &stroke, 1, dt).unwrap();
        let back = integrate(forward.last(), &params, &stroke.reversed(), 1, dt).unwrap();
        let gap = (back.last().to_coords() - state0.to_coords()).amax();
        assert!(gap < 1e-8, "gap {gap:e}");
    }
}

#[test]
fn fourth_order_on_switched_controls() {
    let params = unit_params(0.6);
    let stroke = ControlStroke::Square {
        gamma1: 6.0,
        gamma2: 4.0,
        tau: 0.1,
    };
    let state0 = initial_state(0.2, 0.3, FRAC_PI_2, params.distance);
    let period = stroke.period();
    let end = |n: usize| {
        integrate_fixed(&state0, &params, &stroke, n, period / n as f64, false)
            .unwrap()
            .last()
            .to_coords()
    };
    let reference = end(2560);
    let ns = [8usize, 16, 32];
    let dts: Vec<f64> = ns.iter().map(|&n| period / n as f64).collect();
    let errors: Vec<f64> = ns.iter().map(|&n| (end(n) - reference).norm()).collect();
    let slope = log_log_slope(&dts, &errors);
    assert!((slope - 4.0).abs() < 0.3, "slope {slope} errors {errors:?}");
}

#[test]
fn square_stroke_rate_independent() {
    let params = unit_params(0.6);
    let state0 = initial_state(0.0, 0.1, FRAC_PI_2, params.distance);
    let slow = ControlStroke::Square {
        gamma1: 1.0,
        gamma2: 1.0,
        tau: 0.1,
    };
    let fast = ControlStroke::Square {
        gamma1: 2.0,
        gamma2: 2.0,
        tau: 0.05,
    };
    let a = integrate(&state0, &params, &slow, 1, 0.1 / 200.0).unwrap();
    let b = integrate(&state0, &params, &fast, 1, 0.05 / 200.0).unwrap();
    let change = (a.net_change() - b.net_change()).norm() / a.net_change().norm();
    assert!(change <= 1e-10, "{change:e}");
}

#[test]
fn shapes_close_after_whole_periods() {
    let run = validation_run();
    let traj = integrate(
        &initial_state(0.0, run.eps, 0.7, run.params.distance),
        &run.params,
        &run.sinusoidal(0.7),
        3,
        run.dt,
    )
    .unwrap();
    assert!(traj.summary.shape_closure_error < 1e-12);
    assert_eq!(traj.times.len(), 3 * 2000 + 1);
    assert!(traj.summary.richardson_error.unwrap() < 1e-3 * traj.summary.delta_m);
}

#[test]
fn displacement_rotates_with_the_frame() {
    let run = validation_run();
    let base = run_sinusoidal(&run, FRAC_PI_2).unwrap().midpoint_displacement();
    for theta0 in [0.5, 2.0, -1.2] {
        let turned = ValidatedRun { theta0, ..run.clone() };
        let d = run_sinusoidal(&turned, FRAC_PI_2).unwrap().midpoint_displacement();
        let angle = d.y.atan2(d.x) - base.y.atan2(base.x);
        let wrapped = (angle - theta0 + PI).rem_euclid(2.0 * PI) - PI;
        assert!(wrapped.abs() < 1e-2, "theta0 {theta0}: off by {wrapped}");
        assert_relative_eq!(d.norm(), base.norm(), max_relative = 1e-6);
    }
}

#[test]
fn rotations_agree_to_leading_order() {
    let run = validation_run();
    let mut ratios = Vec::new();
    for eps in [0.1, 0.05, 0.025] {
        let traj = run_sinusoidal(&ValidatedRun { eps, ..run.clone() }, FRAC_PI_2).unwrap();
        let [r1, r2] = traj.summary.rotations;
        ratios.push((r1 - r2).abs() / r1.abs());
    }
    assert!(ratios.windows(2).all(|w| w[1] <= w[0] || w[1] < 1e-9), "{ratios:?}");
}

#[test]
fn rejects_misaligned_or_coarse_steps() {
    let params = unit_params(0.5);
    let state0 = initial_state(0.0, 0.1, 1.0, params.distance);
    let square = ControlStroke::Square {
        gamma1: 1.0,
        gamma2: 1.0,
        tau: 0.1,
    };
    for dt in [0.1 / 333.3, 0.4 / 100.0, 0.0, -1e-3, f64::NAN] {
        assert!(matches!(
            integrate(&state0, &params, &square, 1, dt),
            Err(ModelError::InvalidStep(_))
        ));
    }
    assert!(matches!(
        integrate(&state0, &params, &square, 0, 1e-3),
        Err(ModelError::InvalidStep(_))
    ));
    let bad = SystemState { sigma1: 7.0, ..state0 };
    assert!(matches!(
        integrate(&bad, &params, &square, 1, 1e-3),
        Err(ModelError::InvalidState(_))
    ));
}

#[test]
fn near_contact_aborts_as_singular() {
    let params = unit_params(0.999_999);
    let state0 = SystemState::aligned(0.0, params.distance);
    let stroke = ControlStroke::Piecewise {
        segments: vec![(0.1, ControlPair::new(1.0, 0.0)), (0.1, ControlPair::new(-1.0, 0.0))],
    };
    let err = integrate(&state0, &params, &stroke, 1, 1e-3).unwrap_err();
    assert!(matches!(err, ModelError::SingularAt { time, .. } if time == 0.0), "{err}");
    assert!(err.is_singular());
}

#[test]
fn lambda0_estimate_monotone_in_resolution() {
    let template = unit_params(0.5);
    let sampler = |k: usize| {
        let t = k as f64 * 0.37;
        SystemState {
            x1: 0.0,
            y1: 0.0,
            theta1: t.sin(),
            x2: 0.05 * t.cos(),
            y2: 0.03,
            theta2: (1.3 * t).cos(),
            sigma1: PI + 0.8 * (0.7 * t).sin(),
            sigma2: PI - 0.8 * (1.1 * t).cos(),
        }
    };
    let coarse = estimate_lambda0(sampler, &template, 8);
    let fine = estimate_lambda0(sampler, &template, 32);
    assert!(fine <= coarse);
    assert!(fine > 0.0 && fine <= 1.0);
    // below the estimate, every sampled configuration is invertible
    let below = template.with_interaction(0.99 * fine).unwrap();
    for k in 0..32 {
        let asm = scallop_core::hydrodynamics::assemble(&sampler(k), &below).unwrap();
        assert!(!asm.is_singular());
    }
}
