//! Kinematics of the two-scallop configuration.
//!
//! Each scallop is two rigid links of length `L` joined at a hinge. The
//! configuration of the pair is eight numbers: hinge position and upper-link
//! orientation of each scallop plus the two opening angles.

use std::f64::consts::{PI, TAU};
use std::fmt;

use nalgebra::{SVector, Vector2};
use serde::{Deserialize, Serialize};

use crate::error::{ModelError, Result};

/// Flat coordinate vector `(x1, y1, theta1, x2, y2, theta2, sigma1, sigma2)`.
pub type Coords = SVector<f64, 8>;

/// Default half-width of the admissible window around `sigma = pi`.
pub const DEFAULT_SHAPE_WINDOW: f64 = 0.5;

/// Which of the two scallops.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Scallop {
    One,
    Two,
}

impl Scallop {
    pub const BOTH: [Scallop; 2] = [Scallop::One, Scallop::Two];

    /// The other scallop (`3 - i`).
    pub fn other(self) -> Scallop {
        match self {
            Scallop::One => Scallop::Two,
            Scallop::Two => Scallop::One,
        }
    }

    /// Zero-based offset of this scallop's `(x, y, theta)` block.
    pub fn offset(self) -> usize {
        match self {
            Scallop::One => 0,
            Scallop::Two => 3,
        }
    }
}

impl TryFrom<usize> for Scallop {
    type Error = ModelError;

    fn try_from(i: usize) -> Result<Self> {
        match i {
            1 => Ok(Scallop::One),
            2 => Ok(Scallop::Two),
            _ => Err(ModelError::BadIndex(i)),
        }
    }
}

/// Which link of a scallop. Link one is the "upper" link whose angle is
/// `theta`; link two sits at `theta + sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Link {
    One,
    Two,
}

impl Link {
    pub const BOTH: [Link; 2] = [Link::One, Link::Two];

    /// `j - 1`, the multiplier of the opening angle in the link direction.
    pub fn shape_multiplier(self) -> f64 {
        match self {
            Link::One => 0.0,
            Link::Two => 1.0,
        }
    }
}

impl TryFrom<usize> for Link {
    type Error = ModelError;

    fn try_from(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Link::One),
            2 => Ok(Link::Two),
            _ => Err(ModelError::BadIndex(j)),
        }
    }
}

/// How lengths enter the model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LengthConvention {
    /// All lengths measured in units of the link length, so `L = 1`. The
    /// interaction strength is unchanged because it depends on ratios only.
    #[default]
    #[serde(alias = "paper")]
    Nondimensional,
    /// Lengths used as given.
    Dimensional,
}

impl LengthConvention {
    pub fn apply(self, params: &ScallopPairParams) -> ScallopPairParams {
        match self {
            LengthConvention::Dimensional => *params,
            LengthConvention::Nondimensional => params.rescaled(1.0 / params.length),
        }
    }
}

impl std::str::FromStr for LengthConvention {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "paper" | "nondimensional" => Ok(LengthConvention::Nondimensional),
            "dimensional" => Ok(LengthConvention::Dimensional),
            other => Err(format!("unknown length convention '{other}'")),
        }
    }
}

/// Physical constants of the scallop pair.
///
/// The interaction strength `lambda = ln(h/L) / ln(a/L)` is derived at
/// construction; `Lambda = 1 - lambda^2` is always recomputed from it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScallopPairParams {
    /// Link length `L`.
    pub length: f64,
    /// Inter-scallop distance `h`, held constant in time.
    pub distance: f64,
    /// Scallop thickness `a`.
    pub thickness: f64,
    pub c_par: f64,
    pub c_perp: f64,
    lambda: f64,
}

impl ScallopPairParams {
    pub fn new(length: f64, distance: f64, thickness: f64, c_par: f64, c_perp: f64) -> Result<Self> {
        for (name, v) in [
            ("L", length),
            ("h", distance),
            ("a", thickness),
            ("c_par", c_par),
            ("c_perp", c_perp),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(ModelError::InvalidParams(format!("{name} must be positive and finite, got {v}")));
            }
        }
        if thickness >= length {
            return Err(ModelError::InvalidParams(format!(
                "thickness a = {thickness} must be below link length L = {length}"
            )));
        }
        let lambda = (distance / length).ln() / (thickness / length).ln();
        if !(0.0..1.0).contains(&lambda) {
            return Err(ModelError::InvalidParams(format!(
                "interaction strength lambda = {lambda} outside [0, 1) (need a < h <= L)"
            )));
        }
        Ok(ScallopPairParams {
            length,
            distance,
            thickness,
            c_par,
            c_perp,
            lambda,
        })
    }

    /// Builds a parameter set with a prescribed interaction strength; the
    /// distance is chosen as `h = L (a/L)^lambda`.
    pub fn with_lambda(length: f64, thickness: f64, c_par: f64, c_perp: f64, lambda: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&lambda) {
            return Err(ModelError::InvalidParams(format!("lambda = {lambda} outside [0, 1)")));
        }
        if !(thickness > 0.0 && thickness < length) {
            return Err(ModelError::InvalidParams(format!(
                "thickness a = {thickness} must lie in (0, L = {length})"
            )));
        }
        let distance = length * (thickness / length).powf(lambda);
        let mut params = Self::new(length, distance, thickness, c_par, c_perp)?;
        // keep the requested value exactly rather than the round trip through logs
        params.lambda = lambda;
        Ok(params)
    }

    /// Same physics with the interaction strength replaced.
    pub fn with_interaction(&self, lambda: f64) -> Result<Self> {
        Self::with_lambda(self.length, self.thickness, self.c_par, self.c_perp, lambda)
    }

    /// The parameter set used throughout the numerical validation:
    /// `L = 10`, `h = 1`, `a = 0.25` (micrometres), `C_perp = 2 C_par = 2`.
    pub fn validation_set() -> Self {
        Self::new(10.0, 1.0, 0.25, 1.0, 2.0).expect("validation parameters are admissible")
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    /// `1 - lambda^2`.
    pub fn big_lambda(&self) -> f64 {
        1.0 - self.lambda * self.lambda
    }

    /// All lengths multiplied by `factor`; lambda is unchanged.
    pub fn rescaled(&self, factor: f64) -> Self {
        ScallopPairParams {
            length: self.length * factor,
            distance: self.distance * factor,
            thickness: self.thickness * factor,
            ..*self
        }
    }
}

/// Positions, orientations and opening angles of both scallops.
///
/// Angles are kept unwrapped so that rotation accumulated over many strokes
/// stays measurable.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct SystemState {
    pub x1: f64,
    pub y1: f64,
    pub theta1: f64,
    pub x2: f64,
    pub y2: f64,
    pub theta2: f64,
    pub sigma1: f64,
    pub sigma2: f64,
}

/// Time derivatives of [`SystemState`], same ordering.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct StateRates {
    pub xdot1: f64,
    pub ydot1: f64,
    pub thetadot1: f64,
    pub xdot2: f64,
    pub ydot2: f64,
    pub thetadot2: f64,
    pub sigmadot1: f64,
    pub sigmadot2: f64,
}

/// Soft validity warning: an opening angle left the window where the
/// interaction model is accurate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeWarning {
    pub scallop: Scallop,
    pub sigma: f64,
    pub window: f64,
}

impl fmt::Display for ShapeWarning {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "opening angle of scallop {:?} is {:.4} rad, more than {} rad away from pi",
            self.scallop, self.sigma, self.window
        )
    }
}

impl SystemState {
    pub fn from_coords(q: &Coords) -> Self {
        SystemState {
            x1: q[0],
            y1: q[1],
            theta1: q[2],
            x2: q[3],
            y2: q[4],
            theta2: q[5],
            sigma1: q[6],
            sigma2: q[7],
        }
    }

    pub fn to_coords(&self) -> Coords {
        Coords::from([
            self.x1,
            self.y1,
            self.theta1,
            self.x2,
            self.y2,
            self.theta2,
            self.sigma1,
            self.sigma2,
        ])
    }

    /// Both scallops open at `pi` with common orientation `theta`, hinges at
    /// the origin and at distance `distance` along the normal.
    pub fn aligned(theta: f64, distance: f64) -> Self {
        let n = perp(&Vector2::new(theta.cos(), theta.sin()));
        SystemState {
            theta1: theta,
            x2: distance * n.x,
            y2: distance * n.y,
            theta2: theta,
            sigma1: PI,
            sigma2: PI,
            ..Default::default()
        }
    }

    pub fn hinge(&self, i: Scallop) -> Vector2<f64> {
        match i {
            Scallop::One => Vector2::new(self.x1, self.y1),
            Scallop::Two => Vector2::new(self.x2, self.y2),
        }
    }

    pub fn theta(&self, i: Scallop) -> f64 {
        match i {
            Scallop::One => self.theta1,
            Scallop::Two => self.theta2,
        }
    }

    pub fn sigma(&self, i: Scallop) -> f64 {
        match i {
            Scallop::One => self.sigma1,
            Scallop::Two => self.sigma2,
        }
    }

    /// Midpoint of the segment joining the two hinges.
    pub fn midpoint(&self) -> Vector2<f64> {
        (self.hinge(Scallop::One) + self.hinge(Scallop::Two)) * 0.5
    }

    /// The same physical configuration with the scallop labels exchanged.
    pub fn swapped(&self) -> Self {
        SystemState {
            x1: self.x2,
            y1: self.y2,
            theta1: self.theta2,
            x2: self.x1,
            y2: self.y1,
            theta2: self.theta1,
            sigma1: self.sigma2,
            sigma2: self.sigma1,
        }
    }

    /// Hard validity check: every coordinate finite and both opening
    /// angles strictly inside `(0, 2 pi)`. Opening angles further than
    /// `window` from `pi` are reported as warnings, not errors.
    pub fn validate(&self, window: f64) -> Result<Vec<ShapeWarning>> {
        if self.to_coords().iter().any(|v| !v.is_finite()) {
            return Err(ModelError::NonFinite("state"));
        }
        let mut warnings = Vec::new();
        for i in Scallop::BOTH {
            let sigma = self.sigma(i);
            if !(sigma > 0.0 && sigma < TAU) {
                return Err(ModelError::InvalidState(format!(
                    "opening angle of scallop {i:?} is {sigma}, outside (0, 2 pi)"
                )));
            }
            if (sigma - PI).abs() > window {
                warnings.push(ShapeWarning { scallop: i, sigma, window });
            }
        }
        Ok(warnings)
    }
}

impl StateRates {
    pub fn from_coords(q: &Coords) -> Self {
        StateRates {
            xdot1: q[0],
            ydot1: q[1],
            thetadot1: q[2],
            xdot2: q[3],
            ydot2: q[4],
            thetadot2: q[5],
            sigmadot1: q[6],
            sigmadot2: q[7],
        }
    }

    pub fn to_coords(&self) -> Coords {
        Coords::from([
            self.xdot1,
            self.ydot1,
            self.thetadot1,
            self.xdot2,
            self.ydot2,
            self.thetadot2,
            self.sigmadot1,
            self.sigmadot2,
        ])
    }

    pub fn hinge_velocity(&self, i: Scallop) -> Vector2<f64> {
        match i {
            Scallop::One => Vector2::new(self.xdot1, self.ydot1),
            Scallop::Two => Vector2::new(self.xdot2, self.ydot2),
        }
    }

    pub fn thetadot(&self, i: Scallop) -> f64 {
        match i {
            Scallop::One => self.thetadot1,
            Scallop::Two => self.thetadot2,
        }
    }

    pub fn sigmadot(&self, i: Scallop) -> f64 {
        match i {
            Scallop::One => self.sigmadot1,
            Scallop::Two => self.sigmadot2,
        }
    }
}

/// Unit direction of link `link` for a scallop with orientation `theta` and
/// opening angle `sigma`.
pub fn link_direction(theta: f64, sigma: f64, link: Link) -> Vector2<f64> {
    let angle = theta + link.shape_multiplier() * sigma;
    Vector2::new(angle.cos(), angle.sin())
}

/// Counterclockwise quarter turn, `(x, y) -> (-y, x)`.
///
/// This orientation is the one for which `d/dt (cos t, sin t) = perp(cos t, sin t)`.
pub fn perp(v: &Vector2<f64>) -> Vector2<f64> {
    Vector2::new(-v.y, v.x)
}

/// Direction of link `j` of scallop `i` in the given state.
pub fn state_link_direction(state: &SystemState, i: Scallop, j: Link) -> Vector2<f64> {
    link_direction(state.theta(i), state.sigma(i), j)
}

fn check_arclength(s: f64, length: f64) -> Result<()> {
    if !(0.0..=length).contains(&s) {
        return Err(ModelError::ArclengthOutOfRange { s, length });
    }
    Ok(())
}

/// Position of the material point at arclength `s` from the hinge on link
/// `j` of scallop `i`.
pub fn point_on_link(state: &SystemState, i: Scallop, j: Link, s: f64, length: f64) -> Result<Vector2<f64>> {
    check_arclength(s, length)?;
    Ok(state.hinge(i) + state_link_direction(state, i, j) * s)
}

/// Velocity of the material point at arclength `s` on link `j` of scallop
/// `i`, given the rates of all coordinates.
pub fn point_velocity(
    state: &SystemState,
    rates: &StateRates,
    i: Scallop,
    j: Link,
    s: f64,
    length: f64,
) -> Result<Vector2<f64>> {
    check_arclength(s, length)?;
    let e = state_link_direction(state, i, j);
    let spin = rates.thetadot(i) + j.shape_multiplier() * rates.sigmadot(i);
    Ok(rates.hinge_velocity(i) + perp(&e) * (s * spin))
}
