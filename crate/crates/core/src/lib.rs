//! Two hydrodynamically coupled Purcell scallops.
//!
//! Each scallop alone obeys the scallop theorem: opening and closing its
//! single hinge periodically gets it nowhere. Two scallops close to each
//! other interact through their drag, and two out-of-phase strokes produce
//! net motion of the pair. This crate provides
//!
//! - [`geometry`]: configuration, link directions, material point kinematics;
//! - [`hydrodynamics`]: interacting resistive force theory and the assembly
//!   of the resistance matrix `R` and shape coupling `Phi`;
//! - [`dynamics`]: the drift-less control system `q' = u1 v1 + u2 v2`, its
//!   Lie bracket, the small-stroke displacement theory and interaction bounds;
//! - [`integrator`]: square and sinusoidal strokes and fixed-step RK4;
//! - [`experiments`]: phase sweeps, theory-vs-numerics reports, interaction
//!   studies and null tests with CSV/JSON/SVG output.

pub mod dynamics;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod hydrodynamics;
pub mod integrator;
mod plot;

pub use dynamics::{ControlPair, ExpansionCoefficients, LambdaBounds};
pub use error::{ModelError, Result};
pub use geometry::{Coords, LengthConvention, Link, Scallop, ScallopPairParams, StateRates, SystemState};
pub use hydrodynamics::{LinkBlocks, ResistanceAssembly};
pub use integrator::{ControlStroke, Trajectory, TrajectorySummary};
