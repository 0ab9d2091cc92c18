//! Equations of motion as a drift-less affine control system
//! `q' = u1 v1(q) + u2 v2(q)`, the Lie bracket `[v1, v2]`, its small-stroke
//! expansion and the displacement constants derived from it.

use std::f64::consts::PI;

use nalgebra::{Vector2, Vector6};
use rayon::prelude::*;

use crate::error::{ModelError, Result};
use crate::geometry::{perp, Coords, ScallopPairParams, StateRates, SystemState};
use crate::hydrodynamics::{assemble, ResistanceAssembly};

/// Shape angular velocities `(u1, u2) = (sigma1', sigma2')`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlPair {
    pub u1: f64,
    pub u2: f64,
}

impl ControlPair {
    pub fn new(u1: f64, u2: f64) -> Self {
        ControlPair { u1, u2 }
    }

    pub fn as_vector(&self) -> Vector2<f64> {
        Vector2::new(self.u1, self.u2)
    }
}

impl std::ops::Neg for ControlPair {
    type Output = ControlPair;

    fn neg(self) -> ControlPair {
        ControlPair::new(-self.u1, -self.u2)
    }
}

fn checked_assembly(state: &SystemState, params: &ScallopPairParams) -> Result<ResistanceAssembly> {
    let asm = assemble(state, params)?;
    if asm.is_singular() {
        return Err(ModelError::SingularResistance {
            det: asm.det,
            floor: asm.singularity_floor(),
        });
    }
    Ok(asm)
}

/// Position and orientation rates `-R^{-1} Phi u` together with the
/// prescribed shape rates.
pub fn solve_rates(state: &SystemState, params: &ScallopPairParams, controls: ControlPair) -> Result<StateRates> {
    let asm = checked_assembly(state, params)?;
    let rhs = -(asm.coupling * controls.as_vector());
    let lu = asm.resistance.lu();
    let rigid: Vector6<f64> = lu.solve(&rhs).ok_or(ModelError::SingularResistance {
        det: asm.det,
        floor: asm.singularity_floor(),
    })?;
    Ok(StateRates {
        xdot1: rigid[0],
        ydot1: rigid[1],
        thetadot1: rigid[2],
        xdot2: rigid[3],
        ydot2: rigid[4],
        thetadot2: rigid[5],
        sigmadot1: controls.u1,
        sigmadot2: controls.u2,
    })
}

/// Both control vector fields `v1`, `v2` at `state`, from a single
/// factorization of `R`.
pub fn control_vector_fields(state: &SystemState, params: &ScallopPairParams) -> Result<[Coords; 2]> {
    let asm = checked_assembly(state, params)?;
    let lu = asm.resistance.lu();
    let mut fields = [Coords::zeros(); 2];
    for (k, field) in fields.iter_mut().enumerate() {
        let rhs: Vector6<f64> = -asm.coupling.column(k);
        let rigid = lu.solve(&rhs).ok_or(ModelError::SingularResistance {
            det: asm.det,
            floor: asm.singularity_floor(),
        })?;
        field.fixed_rows_mut::<6>(0).copy_from(&rigid);
        field[6 + k] = 1.0;
    }
    Ok(fields)
}

/// Control vector field `v_k`, `k` in `{1, 2}`.
pub fn control_vector_field(state: &SystemState, params: &ScallopPairParams, k: usize) -> Result<Coords> {
    if !(1..=2).contains(&k) {
        return Err(ModelError::BadIndex(k));
    }
    Ok(control_vector_fields(state, params)?[k - 1])
}

/// `[v1, v2] = Dv2 v1 - Dv1 v2` with the Jacobians taken by central
/// differences of width `step` in each of the eight coordinates.
pub fn lie_bracket_fd(state: &SystemState, params: &ScallopPairParams, step: f64) -> Result<Coords> {
    let q = state.to_coords();
    let [v1, v2] = control_vector_fields(state, params)?;
    let mut dv2_v1 = Coords::zeros();
    let mut dv1_v2 = Coords::zeros();
    for c in 0..8 {
        if v1[c] == 0.0 && v2[c] == 0.0 {
            continue;
        }
        let mut plus = q;
        let mut minus = q;
        plus[c] += step;
        minus[c] -= step;
        let [p1, p2] = control_vector_fields(&SystemState::from_coords(&plus), params)?;
        let [m1, m2] = control_vector_fields(&SystemState::from_coords(&minus), params)?;
        dv2_v1 += (p2 - m2) * (v1[c] / (2.0 * step));
        dv1_v2 += (p1 - m1) * (v2[c] / (2.0 * step));
    }
    Ok(dv2_v1 - dv1_v2)
}

/// Default finite-difference width for [`lie_bracket_numeric`].
pub const DEFAULT_BRACKET_STEP: f64 = 1e-5;

const BRACKET_RICHARDSON_TOL: f64 = 1e-4;

/// Lie bracket by central differences, accepted only if halving the step
/// changes the result by less than `1e-4` (relative to the bracket, with a
/// floor proportional to the size of the fields for vanishing brackets).
pub fn lie_bracket_numeric(state: &SystemState, params: &ScallopPairParams, step: f64) -> Result<Coords> {
    if !(step.is_finite() && step > 0.0) {
        return Err(ModelError::InvalidStep(format!("finite-difference step {step}")));
    }
    let coarse = lie_bracket_fd(state, params, step)?;
    let fine = lie_bracket_fd(state, params, step / 2.0)?;
    let [v1, v2] = control_vector_fields(state, params)?;
    let floor = 1e-9 * (v1.norm() + v2.norm());
    let change = (coarse - fine).norm();
    if change > BRACKET_RICHARDSON_TOL * fine.norm() + floor {
        return Err(ModelError::FdUnstable {
            rel_change: change / fine.norm().max(floor),
        });
    }
    Ok(fine)
}

/// Leading-order coefficients of `[v1, v2]` at the perturbed aligned
/// configuration `(theta0, theta0, pi + eps, pi + eps cos(phi))`:
/// position entries scale as `eps^2`, orientation entries as `eps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExpansionCoefficients {
    pub xi1: f64,
    pub eta1: f64,
    /// Shared by both scallops.
    pub vartheta: f64,
    pub xi2: f64,
    pub eta2: f64,
}

impl ExpansionCoefficients {
    /// The bracket approximation `(eps^2 xi1, eps^2 eta1, eps vartheta, eps^2 xi2, eps^2 eta2, eps vartheta, 0, 0)`.
    pub fn bracket(&self, eps: f64) -> Coords {
        let e2 = eps * eps;
        Coords::from([
            e2 * self.xi1,
            e2 * self.eta1,
            eps * self.vartheta,
            e2 * self.xi2,
            e2 * self.eta2,
            eps * self.vartheta,
            0.0,
            0.0,
        ])
    }
}

pub fn expansion_coefficients(phi: f64, theta0: f64, params: &ScallopPairParams) -> ExpansionCoefficients {
    let lambda = params.lambda();
    let (cp, cn) = (params.c_par, params.c_perp);
    let half = (phi / 2.0).sin().powi(2);
    let prefactor = params.length * lambda * half / (64.0 * cp * cn * (1.0 - lambda * lambda));
    let own = cn * cn * (2.0 + lambda) - cp * cn;
    let cross = 3.0 * cp * cp - 2.0 * cn * cp - cn * cn;
    let first = prefactor * (own + phi.cos() * cross);
    let second = prefactor * (cross + phi.cos() * own);
    ExpansionCoefficients {
        xi1: first * theta0.cos(),
        eta1: first * theta0.sin(),
        vartheta: -lambda / (16.0 * (1.0 - lambda)) * half,
        xi2: second * theta0.cos(),
        eta2: second * theta0.sin(),
    }
}

/// Predicted change of all eight coordinates after one clockwise square
/// stroke of sides `gamma1`, `gamma2` and duration `tau` per side, started
/// from [`initial_state`]: `-gamma1 gamma2 tau^2 [v1, v2]` to leading order.
pub fn square_stroke_displacement_prediction(
    gamma1: f64,
    gamma2: f64,
    tau: f64,
    eps: f64,
    phi: f64,
    theta0: f64,
    params: &ScallopPairParams,
) -> Coords {
    expansion_coefficients(phi, theta0, params).bracket(eps) * (-gamma1 * gamma2 * tau * tau)
}

fn check_open_unit(lambda: f64) -> Result<()> {
    if !(0.0..1.0).contains(&lambda) {
        return Err(ModelError::InvalidParams(format!(
            "lambda = {lambda} outside [0, 1); the displacement constant has a pole at 1"
        )));
    }
    Ok(())
}

/// Midpoint displacement constant `C(L, lambda, C_par, C_perp)`.
pub fn constant_c(params: &ScallopPairParams) -> Result<f64> {
    let lambda = params.lambda();
    check_open_unit(lambda)?;
    let (cp, cn) = (params.c_par, params.c_perp);
    Ok(params.length * lambda * (cn * cn * (1.0 + lambda) - 3.0 * cp * cn + 3.0 * cp * cp)
        / (128.0 * cp * cn * (1.0 - lambda * lambda)))
}

/// `C` specialised to `C_perp = 2 C_par`: `L lambda (1 + 4 lambda) / (256 (1 - lambda^2))`.
pub fn constant_c_tilde(lambda: f64, length: f64) -> Result<f64> {
    check_open_unit(lambda)?;
    Ok(length * lambda * (1.0 + 4.0 * lambda) / (256.0 * (1.0 - lambda * lambda)))
}

/// Leading-order net midpoint displacement `|C| gamma1 gamma2 tau^2 eps^2 sin^2(phi) / 2`
/// of the square stroke.
pub fn theoretical_midpoint_displacement(
    phi: f64,
    eps: f64,
    gamma1: f64,
    gamma2: f64,
    tau: f64,
    params: &ScallopPairParams,
) -> Result<f64> {
    let c = constant_c(params)?;
    Ok((c * gamma1 * gamma2).abs() * tau * tau * eps * eps * phi.sin().powi(2) / 2.0)
}

/// Interaction-strength band implied by `kappa a < h < L / kappa`.
#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct LambdaBounds {
    /// `1 - lambda_upper`.
    pub lower: f64,
    /// `-ln(kappa) / ln(a / L)`.
    pub upper: f64,
    /// Open interval of `kappa` for which `1/2 < upper < 1`: `(sqrt(L/a), L/a)`.
    pub kappa_window: (f64, f64),
}

impl LambdaBounds {
    pub fn kappa_admissible(&self, kappa: f64) -> bool {
        kappa > self.kappa_window.0 && kappa < self.kappa_window.1
    }
}

pub fn lambda_bounds(kappa: f64, thickness: f64, length: f64) -> Result<LambdaBounds> {
    if !(kappa > 0.0 && thickness > 0.0 && thickness < length) {
        return Err(ModelError::InvalidParams(format!(
            "need kappa > 0 and 0 < a < L (kappa = {kappa}, a = {thickness}, L = {length})"
        )));
    }
    let upper = -kappa.ln() / (thickness / length).ln();
    if !(upper > 0.0 && upper < 1.0) {
        return Err(ModelError::InvalidParams(format!(
            "kappa = {kappa} gives an upper interaction bound {upper} outside (0, 1)"
        )));
    }
    let ratio = length / thickness;
    Ok(LambdaBounds {
        lower: 1.0 - upper,
        upper,
        kappa_window: (ratio.sqrt(), ratio),
    })
}

/// The perturbed aligned configuration used for stroke experiments: both
/// orientations `theta0`, `sigma_i = pi + eps cos((i - 1) phi)`, hinge one at
/// the origin and hinge two at `distance` along the common normal.
pub fn initial_state(theta0: f64, eps: f64, phi: f64, distance: f64) -> SystemState {
    let normal = perp(&Vector2::new(theta0.cos(), theta0.sin())) * distance;
    SystemState {
        x1: 0.0,
        y1: 0.0,
        theta1: theta0,
        x2: normal.x,
        y2: normal.y,
        theta2: theta0,
        sigma1: PI + eps,
        sigma2: PI + eps * phi.cos(),
    }
}

const LAMBDA_SCAN_POINTS: usize = 1000;
const LAMBDA_BISECTIONS: usize = 60;

fn singular_at(state: &SystemState, template: &ScallopPairParams, lambda: f64) -> bool {
    match template.with_interaction(lambda).and_then(|p| assemble(state, &p)) {
        Ok(asm) => asm.is_singular(),
        Err(_) => true,
    }
}

/// Smallest interaction strength at which `R` becomes singular for one state,
/// or 1 if none is found on the scan grid.
fn singular_threshold(state: &SystemState, template: &ScallopPairParams) -> f64 {
    let grid = |k: usize| k as f64 / LAMBDA_SCAN_POINTS as f64;
    let Some(hit) = (0..LAMBDA_SCAN_POINTS).find(|&k| singular_at(state, template, grid(k))) else {
        return 1.0;
    };
    if hit == 0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (grid(hit - 1), grid(hit));
    for _ in 0..LAMBDA_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        if singular_at(state, template, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

/// Empirical lower estimate of the invertibility threshold: the minimum over
/// the states `sampler(0..resolution)` of the smallest `lambda` at which
/// `|det R|` drops below the singularity floor. Returns 1 when no singular
/// point is found. The result is only an estimate from the sampled states.
pub fn estimate_lambda0<F>(sampler: F, template: &ScallopPairParams, resolution: usize) -> f64
where
    F: Fn(usize) -> SystemState + Sync,
{
    (0..resolution)
        .into_par_iter()
        .map(|k| singular_threshold(&sampler(k), template))
        .reduce(|| 1.0, f64::min)
}
