#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{Matrix6, Vector2};
use rand::Rng;
use scallop_core::geometry::{point_on_link, Coords};
use scallop_core::hydrodynamics::{force_density, Matrix6x2};
use scallop_core::{Link, Scallop, ScallopPairParams, StateRates, SystemState};

pub fn unit_params(lambda: f64) -> ScallopPairParams {
    ScallopPairParams::with_lambda(1.0, 0.025, 1.0, 2.0, lambda).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R) -> SystemState {
    SystemState {
        x1: rng.gen_range(-1.0..1.0),
        y1: rng.gen_range(-1.0..1.0),
        theta1: rng.gen_range(-PI..PI),
        x2: rng.gen_range(-1.0..1.0),
        y2: rng.gen_range(-1.0..1.0),
        theta2: rng.gen_range(-PI..PI),
        sigma1: rng.gen_range(0.3..2.0 * PI - 0.3),
        sigma2: rng.gen_range(0.3..2.0 * PI - 0.3),
    }
}

pub fn random_params<R: Rng>(rng: &mut R) -> ScallopPairParams {
    let length = rng.gen_range(0.5..3.0);
    let c_par = rng.gen_range(0.5..2.0);
    let c_perp = c_par * rng.gen_range(1.2..2.5);
    ScallopPairParams::with_lambda(length, 0.025 * length, c_par, c_perp, rng.gen_range(0.02..0.9)).unwrap()
}

/// Composite Simpson rule with `n` (even) intervals.
pub fn simpson<F: Fn(f64) -> Vector2<f64>>(f: F, a: f64, b: f64, n: usize) -> Vector2<f64> {
    assert!(n.is_multiple_of(2));
    let h = (b - a) / n as f64;
    let mut acc = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += f(a + k as f64 * h) * w;
    }
    acc * (h / 3.0)
}

pub const QUADRATURE_INTERVALS: usize = 1000;

/// Force and torque on scallop `i` (torque about its hinge) for the given
/// rates, by quadrature of the force density.
pub fn integrated_load(state: &SystemState, rates: &StateRates, params: &ScallopPairParams, i: Scallop) -> (Vector2<f64>, f64) {
    let hinge = state.hinge(i);
    let mut force = Vector2::zeros();
    let mut torque = 0.0;
    for j in Link::BOTH {
        let f = simpson(
            |s| force_density(state, rates, params, i, j, s).unwrap(),
            0.0,
            params.length,
            QUADRATURE_INTERVALS,
        );
        let t = simpson(
            |s| {
                let arm = point_on_link(state, i, j, s, params.length).unwrap() - hinge;
                let f = force_density(state, rates, params, i, j, s).unwrap();
                Vector2::new(arm.x * f.y - arm.y * f.x, 0.0)
            },
            0.0,
            params.length,
            QUADRATURE_INTERVALS,
        );
        force += f;
        torque += t.x;
    }
    (force, torque)
}

/// `-Lambda (F1, T1, F2, T2)` for unit rate `k` of the eight coordinates.
pub fn load_column(state: &SystemState, params: &ScallopPairParams, k: usize) -> [f64; 6] {
    let mut q = Coords::zeros();
    q[k] = 1.0;
    let rates = StateRates::from_coords(&q);
    let scale = -params.big_lambda();
    let (f1, t1) = integrated_load(state, &rates, params, Scallop::One);
    let (f2, t2) = integrated_load(state, &rates, params, Scallop::Two);
    [f1.x, f1.y, t1, f2.x, f2.y, t2].map(|v| v * scale)
}

/// `R` and `Phi` rebuilt column by column from quadrature.
pub fn quadrature_matrices(state: &SystemState, params: &ScallopPairParams) -> (Matrix6<f64>, Matrix6x2) {
    let mut r = Matrix6::zeros();
    let mut phi = Matrix6x2::zeros();
    for k in 0..6 {
        r.set_column(k, &nalgebra::Vector6::from(load_column(state, params, k)));
    }
    for c in 0..2 {
        phi.set_column(c, &nalgebra::Vector6::from(load_column(state, params, 6 + c)));
    }
    (r, phi)
}

pub fn rel_err(measured: f64, expected: f64) -> f64 {
    (measured - expected).abs() / expected.abs()
}
