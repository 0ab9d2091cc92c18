use std::f64::consts::PI;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::error::ModelError;
use crate::geometry::{LengthConvention, ScallopPairParams};
use crate::integrator::ControlStroke;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read config {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed config: {0}")]
    Parse(#[from] serde_json::Error),
    #[error("invalid config: {0}")]
    Invalid(String),
    #[error("invalid physical parameters: {0}")]
    Model(#[from] ModelError),
}

/// Thirteen phases from `0` to `pi`: multiples of `pi/8` and `pi/6`.
pub fn standard_phases() -> Vec<f64> {
    [0.0, 1.0 / 8.0, 1.0 / 6.0, 0.25, 1.0 / 3.0, 3.0 / 8.0, 0.5, 5.0 / 8.0, 2.0 / 3.0, 0.75, 5.0 / 6.0, 7.0 / 8.0, 1.0]
        .iter()
        .map(|f| f * PI)
        .collect()
}

/// Experiment configuration as read from JSON. Physical quantities carry
/// their unit in the field name. Missing fields take the defaults of the
/// validation run: `eps = 0.1`, `omega = 20`, `L = 10 um`, `h = 1 um`,
/// `a = 0.25 um`, `C_perp = 2 C_par = 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    #[serde(rename = "L_um")]
    pub length_um: f64,
    #[serde(rename = "h_um")]
    pub distance_um: f64,
    #[serde(rename = "a_um")]
    pub thickness_um: f64,
    #[serde(rename = "c_par_Ns_per_um2")]
    pub c_par: f64,
    #[serde(rename = "c_perp_Ns_per_um2")]
    pub c_perp: f64,
    #[serde(rename = "eps_rad")]
    pub eps: f64,
    #[serde(rename = "omega_freq_rad_per_s")]
    pub omega_freq: f64,
    #[serde(rename = "theta0_rad")]
    pub theta0: f64,
    #[serde(rename = "phases_rad")]
    pub phases: Vec<f64>,
    pub n_periods: usize,
    /// Step size; `None` means `period / 2000`.
    #[serde(rename = "dt_s")]
    pub dt: Option<f64>,
    pub length_convention: LengthConvention,
    pub output_dir: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            length_um: 10.0,
            distance_um: 1.0,
            thickness_um: 0.25,
            c_par: 1.0,
            c_perp: 2.0,
            eps: 0.1,
            omega_freq: 20.0,
            theta0: 0.0,
            phases: standard_phases(),
            n_periods: 1,
            dt: None,
            length_convention: LengthConvention::Nondimensional,
            output_dir: PathBuf::from("out"),
        }
    }
}

/// A config that passed validation, with the length convention applied.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidatedRun {
    pub params: ScallopPairParams,
    pub eps: f64,
    pub omega_freq: f64,
    pub theta0: f64,
    pub phases: Vec<f64>,
    pub n_periods: usize,
    pub dt: f64,
}

impl ValidatedRun {
    pub fn sinusoidal(&self, phi: f64) -> ControlStroke {
        ControlStroke::Sinusoidal {
            eps: self.eps,
            omega_freq: self.omega_freq,
            phi,
        }
    }

    pub fn period(&self) -> f64 {
        2.0 * PI / self.omega_freq
    }

    /// Side duration of the square stroke matched to the sinusoid,
    /// `tau = pi / (2 omega)`.
    pub fn tau(&self) -> f64 {
        PI / (2.0 * self.omega_freq)
    }

    /// Square-stroke side length matched to the sinusoid, `eps omega`.
    pub fn gamma(&self) -> f64 {
        self.eps * self.omega_freq
    }
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, ConfigError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    /// Physical parameters as given, before the length convention.
    pub fn physical_params(&self) -> Result<ScallopPairParams, ConfigError> {
        Ok(ScallopPairParams::new(
            self.length_um,
            self.distance_um,
            self.thickness_um,
            self.c_par,
            self.c_perp,
        )?)
    }

    pub fn validate(&self) -> Result<ValidatedRun, ConfigError> {
        let params = self.length_convention.apply(&self.physical_params()?);
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(ConfigError::Invalid(format!("{name} must be positive and finite, got {v}")))
            }
        };
        positive("eps_rad", self.eps)?;
        positive("omega_freq_rad_per_s", self.omega_freq)?;
        if self.eps >= PI {
            return Err(ConfigError::Invalid(format!("eps_rad = {} would close a scallop", self.eps)));
        }
        if !self.theta0.is_finite() {
            return Err(ConfigError::Invalid("theta0_rad must be finite".into()));
        }
        if self.phases.is_empty() || self.phases.iter().any(|p| !p.is_finite()) {
            return Err(ConfigError::Invalid("phases_rad must be a non-empty list of finite values".into()));
        }
        if self.n_periods == 0 {
            return Err(ConfigError::Invalid("n_periods must be at least 1".into()));
        }
        let period = 2.0 * PI / self.omega_freq;
        let dt = match self.dt {
            None => period / 2000.0,
            Some(dt) => {
                positive("dt_s", dt)?;
                let steps = period / dt;
                if steps < 200.0 * (1.0 - 1e-9) || (steps - steps.round()).abs() > 1e-9 * steps {
                    return Err(ConfigError::Invalid(format!(
                        "dt_s = {dt} must divide the period {period} into at least 200 steps"
                    )));
                }
                dt
            }
        };
        Ok(ValidatedRun {
            params,
            eps: self.eps,
            omega_freq: self.omega_freq,
            theta0: self.theta0,
            phases: self.phases.clone(),
            n_periods: self.n_periods,
            dt,
        })
    }
}
