//! Fixed-step RK4 integration of the control system under prescribed
//! strokes.
//!
//! Piecewise-constant strokes are integrated on meshes that contain every
//! switching instant, so each step sees a single constant control and the
//! scheme keeps its fourth order across switches.

use std::f64::consts::PI;
use std::io::{self, Write};

use nalgebra::Vector2;
use serde::Serialize;

use crate::dynamics::{solve_rates, ControlPair};
use crate::error::{ModelError, Result};
use crate::geometry::{Coords, Scallop, ScallopPairParams, SystemState};
use crate::hydrodynamics::assemble;

/// A periodic control law `t -> (u1, u2)`.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlStroke {
    /// Clockwise loop around the rectangle `[-gamma1, 0] x [-gamma2, 0]`,
    /// each side traversed in time `tau`: `(0, -g2)`, `(-g1, 0)`, `(0, g2)`, `(g1, 0)`.
    Square { gamma1: f64, gamma2: f64, tau: f64 },
    /// Controls of `sigma_i(t) = pi + eps cos(omega t + (i - 1) phi)`.
    Sinusoidal { eps: f64, omega_freq: f64, phi: f64 },
    /// Arbitrary constant segments `(duration, control)`, repeated periodically.
    Piecewise { segments: Vec<(f64, ControlPair)> },
}

impl ControlStroke {
    pub fn period(&self) -> f64 {
        match self {
            ControlStroke::Square { tau, .. } => 4.0 * tau,
            ControlStroke::Sinusoidal { omega_freq, .. } => 2.0 * PI / omega_freq,
            ControlStroke::Piecewise { segments } => segments.iter().map(|(d, _)| d).sum(),
        }
    }

    pub fn is_piecewise_constant(&self) -> bool {
        !matches!(self, ControlStroke::Sinusoidal { .. })
    }

    fn segments(&self) -> Vec<(f64, ControlPair)> {
        match self {
            ControlStroke::Square { gamma1, gamma2, tau } => vec![
                (*tau, ControlPair::new(0.0, -gamma2)),
                (*tau, ControlPair::new(-gamma1, 0.0)),
                (*tau, ControlPair::new(0.0, *gamma2)),
                (*tau, ControlPair::new(*gamma1, 0.0)),
            ],
            ControlStroke::Piecewise { segments } => segments.clone(),
            ControlStroke::Sinusoidal { .. } => Vec::new(),
        }
    }

    /// Switching instants within one period, excluding 0 and the period.
    pub fn breakpoints(&self) -> Vec<f64> {
        let segments = self.segments();
        let mut acc = 0.0;
        let mut out = Vec::new();
        for (d, _) in segments.iter().take(segments.len().saturating_sub(1)) {
            acc += d;
            out.push(acc);
        }
        out
    }

    /// Control at time `t >= 0`, extended periodically. Piecewise strokes
    /// are right-continuous at their switching instants.
    pub fn control_at(&self, t: f64) -> ControlPair {
        match self {
            ControlStroke::Sinusoidal { eps, omega_freq, phi } => {
                let amp = -eps * omega_freq;
                ControlPair::new(amp * (omega_freq * t).sin(), amp * (omega_freq * t + phi).sin())
            }
            _ => {
                let period = self.period();
                let local = t.rem_euclid(period);
                let segments = self.segments();
                let mut start = 0.0;
                for (d, u) in &segments {
                    if local < start + d {
                        return *u;
                    }
                    start += d;
                }
                segments.last().map(|(_, u)| *u).unwrap_or_default()
            }
        }
    }

    /// The stroke run backwards in time, `t -> -u(T - t)`. Integrating a
    /// stroke and then its reverse retraces the path.
    pub fn reversed(&self) -> ControlStroke {
        match self {
            ControlStroke::Sinusoidal { eps, omega_freq, phi } => ControlStroke::Sinusoidal {
                eps: *eps,
                omega_freq: *omega_freq,
                phi: -phi,
            },
            _ => ControlStroke::Piecewise {
                segments: self.segments().into_iter().rev().map(|(d, u)| (d, -u)).collect(),
            },
        }
    }
}

/// Scalar summary of a trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectorySummary {
    /// Net change of the hinge midpoint.
    pub midpoint_displacement: [f64; 2],
    /// `|midpoint_displacement|`.
    pub delta_m: f64,
    pub rotations: [f64; 2],
    /// `max_i |sigma_i(T) - sigma_i(0)|`.
    pub shape_closure_error: f64,
    pub min_abs_det: f64,
    /// `|Delta x_m(dt) - Delta x_m(dt/2)|` when the step-halving check ran.
    pub richardson_error: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Trajectory {
    pub times: Vec<f64>,
    pub states: Vec<SystemState>,
    pub det_history: Vec<f64>,
    pub summary: TrajectorySummary,
}

impl Trajectory {
    pub fn initial(&self) -> &SystemState {
        &self.states[0]
    }

    pub fn last(&self) -> &SystemState {
        self.states.last().expect("trajectory holds at least the initial state")
    }

    /// Net change of every coordinate.
    pub fn net_change(&self) -> Coords {
        self.last().to_coords() - self.initial().to_coords()
    }

    pub fn midpoint_displacement(&self) -> Vector2<f64> {
        Vector2::from(self.summary.midpoint_displacement)
    }

    /// CSV with one row per sample and 17 significant digits per value.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "t,x1,y1,theta1,x2,y2,theta2,sigma1,sigma2,detR")?;
        for ((t, s), det) in self.times.iter().zip(&self.states).zip(&self.det_history) {
            write!(out, "{t:.16e}")?;
            for v in s.to_coords().iter() {
                write!(out, ",{v:.16e}")?;
            }
            writeln!(out, ",{det:.16e}")?;
        }
        Ok(())
    }
}

fn summarize(times: Vec<f64>, states: Vec<SystemState>, det_history: Vec<f64>) -> Trajectory {
    let first = states[0];
    let last = *states.last().unwrap();
    let dm = last.midpoint() - first.midpoint();
    let summary = TrajectorySummary {
        midpoint_displacement: [dm.x, dm.y],
        delta_m: dm.norm(),
        rotations: [last.theta1 - first.theta1, last.theta2 - first.theta2],
        shape_closure_error: Scallop::BOTH
            .iter()
            .map(|&i| (last.sigma(i) - first.sigma(i)).abs())
            .fold(0.0, f64::max),
        min_abs_det: det_history.iter().map(|d| d.abs()).fold(f64::INFINITY, f64::min),
        richardson_error: None,
    };
    Trajectory {
        times,
        states,
        det_history,
        summary,
    }
}

fn rhs(q: &Coords, u: ControlPair, params: &ScallopPairParams, t: f64) -> Result<Coords> {
    solve_rates(&SystemState::from_coords(q), params, u)
        .map(|r| r.to_coords())
        .map_err(|e| match e {
            ModelError::SingularResistance { det, .. } => ModelError::SingularAt { time: t, det },
            other => other,
        })
}

fn det_at(state: &SystemState, params: &ScallopPairParams) -> Result<f64> {
    Ok(assemble(state, params)?.det)
}

/// Plain RK4 with `n_steps` steps of size `dt` and no step-size checks.
/// With `record` false only the first and last states are kept.
pub fn integrate_fixed(
    state0: &SystemState,
    params: &ScallopPairParams,
    stroke: &ControlStroke,
    n_steps: usize,
    dt: f64,
    record: bool,
) -> Result<Trajectory> {
    let capacity = if record { n_steps + 1 } else { 2 };
    let mut times = Vec::with_capacity(capacity);
    let mut states = Vec::with_capacity(capacity);
    let mut dets = Vec::with_capacity(capacity);
    let mut q = state0.to_coords();
    times.push(0.0);
    states.push(*state0);
    dets.push(det_at(state0, params)?);

    let piecewise = stroke.is_piecewise_constant();
    let mut min_det = dets[0].abs();
    for step in 0..n_steps {
        let t = step as f64 * dt;
        let half = t + 0.5 * dt;
        let (u0, um, u1) = if piecewise {
            let u = stroke.control_at(half);
            (u, u, u)
        } else {
            (stroke.control_at(t), stroke.control_at(half), stroke.control_at(t + dt))
        };
        let k1 = rhs(&q, u0, params, t)?;
        let k2 = rhs(&(q + k1 * (0.5 * dt)), um, params, half)?;
        let k3 = rhs(&(q + k2 * (0.5 * dt)), um, params, half)?;
        let k4 = rhs(&(q + k3 * dt), u1, params, t + dt)?;
        q += (k1 + (k2 + k3) * 2.0 + k4) * (dt / 6.0);

        let state = SystemState::from_coords(&q);
        let det = det_at(&state, params)?;
        min_det = min_det.min(det.abs());
        if record || step + 1 == n_steps {
            times.push((step + 1) as f64 * dt);
            states.push(state);
            dets.push(det);
        }
    }
    let mut traj = summarize(times, states, dets);
    traj.summary.min_abs_det = min_det;
    Ok(traj)
}

/// Default step: `period / 2000`.
pub fn default_dt(stroke: &ControlStroke) -> f64 {
    stroke.period() / 2000.0
}

const RICHARDSON_TOL: f64 = 1e-3;
const ALIGN_TOL: f64 = 1e-9;

fn step_count(span: f64, dt: f64) -> Result<usize> {
    let ratio = span / dt;
    let n = ratio.round();
    if n < 1.0 || (ratio - n).abs() > ALIGN_TOL * ratio.max(1.0) {
        return Err(ModelError::InvalidStep(format!("dt = {dt} does not divide {span}")));
    }
    Ok(n as usize)
}

/// Integrates `n_periods` whole periods of `stroke` with step `dt`, keeping
/// every sample. The run is repeated with `dt / 2`; if the midpoint
/// displacement moves by more than `1e-3` relative (plus a `1e-12 L`
/// absolute floor) the result is rejected as too coarse.
pub fn integrate(
    state0: &SystemState,
    params: &ScallopPairParams,
    stroke: &ControlStroke,
    n_periods: usize,
    dt: f64,
) -> Result<Trajectory> {
    let period = stroke.period();
    if !(dt.is_finite() && dt > 0.0) {
        return Err(ModelError::InvalidStep(format!("dt = {dt}")));
    }
    if n_periods == 0 {
        return Err(ModelError::InvalidStep("at least one period is required".into()));
    }
    if dt > period / 200.0 * (1.0 + ALIGN_TOL) {
        return Err(ModelError::InvalidStep(format!(
            "dt = {dt} exceeds period / 200 = {}",
            period / 200.0
        )));
    }
    for b in stroke.breakpoints() {
        step_count(b, dt)?;
    }
    let n_steps = step_count(n_periods as f64 * period, dt)?;
    state0.validate(f64::INFINITY)?;

    let mut traj = integrate_fixed(state0, params, stroke, n_steps, dt, true)?;
    let fine = integrate_fixed(state0, params, stroke, 2 * n_steps, dt / 2.0, false)?;
    let change = (traj.midpoint_displacement() - fine.midpoint_displacement()).norm();
    let scale = fine.summary.delta_m;
    if change > RICHARDSON_TOL * scale + 1e-12 * params.length {
        return Err(ModelError::StepTooCoarse {
            rel_change: change / scale.max(f64::MIN_POSITIVE),
        });
    }
    traj.summary.richardson_error = Some(change);
    Ok(traj)
}

/// Loop areas compared when matching a square stroke to a sinusoidal one
/// of amplitude `eps` and frequency `omega_freq`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AreaReport {
    /// `(eps omega tau)^2 = (eps pi)^2 / 4` with `tau = pi / (2 omega)`.
    pub square_area: f64,
    /// `pi eps^2`, the circle of radius `eps` traced by the shapes.
    pub circle_area: f64,
    /// `(circle - square) / circle`.
    pub relative_error: f64,
    /// Square of side `eps omega` in the control plane.
    pub square_control_area: f64,
    /// Circle of radius `eps omega` in the control plane.
    pub circle_control_area: f64,
}

pub fn square_vs_smooth_area_report(eps: f64, omega_freq: f64) -> AreaReport {
    let side = eps * omega_freq;
    let tau = PI / (2.0 * omega_freq);
    let square_area = (side * tau).powi(2);
    let circle_area = PI * eps * eps;
    AreaReport {
        square_area,
        circle_area,
        relative_error: (circle_area - square_area) / circle_area,
        square_control_area: side * side,
        circle_control_area: PI * side * side,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::initial_state;
    use approx::assert_relative_eq;
    use std::f64::consts::FRAC_PI_2;

    fn unit_params(lambda: f64) -> ScallopPairParams {
        ScallopPairParams::with_lambda(1.0, 0.025, 1.0, 2.0, lambda).unwrap()
    }

    #[test]
    fn square_control_values() {
        let s = ControlStroke::Square { gamma1: 1.5, gamma2: 2.5, tau: 0.2 };
        assert_eq!(s.control_at(0.1), ControlPair::new(0.0, -2.5));
        assert_eq!(s.control_at(0.3), ControlPair::new(-1.5, 0.0));
        assert_eq!(s.control_at(0.5), ControlPair::new(0.0, 2.5));
        assert_eq!(s.control_at(0.7), ControlPair::new(1.5, 0.0));
        assert_eq!(s.control_at(0.8 + 0.1), ControlPair::new(0.0, -2.5));
        // right-continuous at the switch
        assert_eq!(s.control_at(0.4), ControlPair::new(0.0, 2.5));
        assert_eq!(s.period(), 0.8);
        assert_eq!(s.breakpoints().len(), 3);
    }

    #[test]
    fn sinusoidal_control_values() {
        let s = ControlStroke::Sinusoidal { eps: 0.1, omega_freq: 20.0, phi: 0.7 };
        let u = s.control_at(0.0);
        assert_eq!(u.u1, 0.0);
        assert_relative_eq!(u.u2, -2.0 * 0.7f64.sin());
        assert_relative_eq!(s.period(), PI / 10.0);
    }

    #[test]
    fn sinusoidal_controls_are_shape_derivatives() {
        let (eps, w, phi) = (0.1, 20.0, 0.9);
        let s = ControlStroke::Sinusoidal { eps, omega_freq: w, phi };
        let sigma2 = |t: f64| PI + eps * (w * t + phi).cos();
        let h = 1e-6;
        for t in [0.0, 0.013, 0.1, 0.29] {
            let fd = (sigma2(t + h) - sigma2(t - h)) / (2.0 * h);
            assert_relative_eq!(s.control_at(t).u2, fd, epsilon = 1e-8);
        }
    }

    #[test]
    fn square_phase_match_with_sinusoid() {
        // omega = pi / (2 tau) gives equal periods
        let tau = 0.05;
        let sq = ControlStroke::Square { gamma1: 1.0, gamma2: 1.0, tau };
        let sn = ControlStroke::Sinusoidal { eps: 0.1, omega_freq: PI / (2.0 * tau), phi: FRAC_PI_2 };
        assert_relative_eq!(sq.period(), sn.period(), max_relative = 1e-15);
    }

    #[test]
    fn reversed_square_negates_in_reverse_order() {
        let s = ControlStroke::Square { gamma1: 1.0, gamma2: 2.0, tau: 0.5 };
        let r = s.reversed();
        for t in [0.1, 0.7, 1.2, 1.9] {
            assert_eq!(r.control_at(t), -s.control_at(2.0 - t));
        }
    }

    #[test]
    fn zero_stroke_keeps_state() {
        let p = unit_params(0.5);
        let s0 = initial_state(0.2, 0.05, 1.0, p.distance);
        let stroke = ControlStroke::Square { gamma1: 0.0, gamma2: 0.0, tau: 0.1 };
        let traj = integrate(&s0, &p, &stroke, 2, 0.001).unwrap();
        assert!(traj.states.iter().all(|s| *s == s0));
        assert_eq!(traj.times.len(), 801);
    }

    #[test]
    fn rejects_misaligned_or_coarse_steps() {
        let p = unit_params(0.5);
        let s0 = initial_state(0.0, 0.05, 1.0, p.distance);
        let stroke = ControlStroke::Square { gamma1: 1.0, gamma2: 1.0, tau: 0.1 };
        assert!(matches!(integrate(&s0, &p, &stroke, 1, 0.1 / 3.3), Err(ModelError::InvalidStep(_))));
        assert!(matches!(integrate(&s0, &p, &stroke, 1, 0.01), Err(ModelError::InvalidStep(_))));
        assert!(matches!(integrate(&s0, &p, &stroke, 0, 0.001), Err(ModelError::InvalidStep(_))));
    }

    #[test]
    fn singular_abort_reports_time() {
        let p = unit_params(0.99999);
        let s0 = SystemState::aligned(0.0, p.distance);
        let stroke = ControlStroke::Square { gamma1: 1.0, gamma2: 1.0, tau: 0.1 };
        let err = integrate(&s0, &p, &stroke, 1, 0.001).unwrap_err();
        assert!(matches!(err, ModelError::SingularAt { time, .. } if time == 0.0));
    }

    #[test]
    fn area_report_values() {
        let r = square_vs_smooth_area_report(0.1, 20.0);
        assert_relative_eq!(r.square_area, 0.024674, epsilon = 5e-7);
        assert_relative_eq!(r.circle_area, 0.031416, epsilon = 5e-7);
        assert_relative_eq!(r.relative_error, 0.21, epsilon = 0.005);
        let tiny = square_vs_smooth_area_report(1e-6, 20.0);
        assert_relative_eq!(tiny.circle_area / tiny.square_area, 4.0 / PI, max_relative = 1e-12);
        assert_relative_eq!(r.circle_control_area / r.square_control_area, PI);
    }

    #[test]
    fn csv_has_header_and_rows() {
        let p = unit_params(0.5);
        let s0 = initial_state(0.0, 0.05, FRAC_PI_2, p.distance);
        let stroke = ControlStroke::Sinusoidal { eps: 0.05, omega_freq: 20.0, phi: FRAC_PI_2 };
        let traj = integrate(&s0, &p, &stroke, 1, default_dt(&stroke)).unwrap();
        let mut buf = Vec::new();
        traj.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), "t,x1,y1,theta1,x2,y2,theta2,sigma1,sigma2,detR");
        let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row.len(), 10);
        assert_eq!(row[7], s0.sigma1);
        assert_eq!(text.lines().count(), traj.times.len() + 1);
    }
}
