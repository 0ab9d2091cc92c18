use thiserror::Error;

/// Errors raised by the model, the solvers and the stroke integrator.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("index {0} is not 1 or 2")]
    BadIndex(usize),

    #[error("arclength {s} outside [0, {length}]")]
    ArclengthOutOfRange { s: f64, length: f64 },

    #[error("link direction is not a unit vector (norm {0})")]
    NonUnitDirection(f64),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("non-finite entry in {0}")]
    NonFinite(&'static str),

    #[error("resistance matrix is singular: |det R| = {det:e} below floor {floor:e}")]
    SingularResistance { det: f64, floor: f64 },

    #[error("resistance matrix became singular at t = {time}: |det R| = {det:e}")]
    SingularAt { time: f64, det: f64 },

    #[error("finite-difference bracket unstable: halving the step changed it by {rel_change:e} (relative)")]
    FdUnstable { rel_change: f64 },

    #[error("time step too coarse: halving dt changed the midpoint displacement by {rel_change:e} (relative)")]
    StepTooCoarse { rel_change: f64 },

    #[error("invalid time step: {0}")]
    InvalidStep(String),
}

impl ModelError {
    /// True for the two flavours of singular resistance matrix.
    pub fn is_singular(&self) -> bool {
        matches!(
            self,
            ModelError::SingularResistance { .. } | ModelError::SingularAt { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, ModelError>;
