//! Run configuration: everything a quench or sweep needs, validated up
//! front and serializable losslessly to TOML.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::initial_states::{floquet_initial, mfi_initial};
use crate::models::{FloquetParams, MfiParams};
use crate::statevector::BlochAngles;

/// Hard cap on chain length; 2^28 amplitudes is already 4 GiB.
pub const MAX_SITES: usize = 26;

/// Largest subsystem the dense reduced-density-matrix path supports.
pub const MAX_SUBSYSTEM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    Floquet,
    Mfi,
}

impl std::fmt::Display for Model {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Model::Floquet => write!(f, "floquet"),
            Model::Mfi => write!(f, "mfi"),
        }
    }
}

impl std::str::FromStr for Model {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "floquet" => Ok(Model::Floquet),
            "mfi" => Ok(Model::Mfi),
            other => Err(Error::Config(format!(
                "unknown model {other:?}, expected \"floquet\" or \"mfi\""
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct QuenchConfig {
    pub model: Model,
    pub n_sites: usize,
    /// Subsystem length for the reduced density matrix.
    pub l: usize,
    #[serde(default)]
    pub subsystem_start: usize,
    #[serde(default)]
    pub floquet: FloquetParams,
    #[serde(default)]
    pub mfi: MfiParams,
    /// Stagger amplitude of the Floquet initial family.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub a: Option<f64>,
    /// Tilt angle of the MFI initial family.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub theta: Option<f64>,
    /// Floquet: number of periods. MFI: physical time (steps = t_max/dt).
    pub t_max: f64,
    /// Sample witnesses every this many steps. Defaults to every period for
    /// Floquet and to a step count spanning 0.5 time units for MFI.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub sample_every: Option<usize>,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub output: Option<std::path::PathBuf>,
}

impl Default for QuenchConfig {
    fn default() -> Self {
        Self {
            model: Model::Floquet,
            n_sites: 8,
            l: 2,
            subsystem_start: 0,
            floquet: FloquetParams::default(),
            mfi: MfiParams::default(),
            a: Some(0.0),
            theta: None,
            t_max: 100.0,
            sample_every: None,
            seed: 1,
            output: None,
        }
    }
}

impl QuenchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || !self.n_sites.is_multiple_of(2) || self.n_sites > MAX_SITES {
            return Err(Error::Config(format!(
                "n_sites must be even and in 2..={MAX_SITES}, got {}",
                self.n_sites
            )));
        }
        let max_l = MAX_SUBSYSTEM.min(self.n_sites - 1);
        if self.l == 0 || self.l > max_l {
            return Err(Error::Config(format!(
                "l must be in 1..={max_l} for n_sites={}, got {}",
                self.n_sites, self.l
            )));
        }
        if self.subsystem_start + self.l > self.n_sites {
            return Err(Error::Config(format!(
                "subsystem [{}, {}) exceeds chain of {} sites",
                self.subsystem_start,
                self.subsystem_start + self.l,
                self.n_sites
            )));
        }
        if !(self.t_max >= 0.0) || !self.t_max.is_finite() {
            return Err(Error::Config(format!(
                "t_max must be finite and >= 0, got {}",
                self.t_max
            )));
        }
        if self.sample_every == Some(0) {
            return Err(Error::Config("sample_every must be >= 1".into()));
        }
        if self.seed > i64::MAX as u64 {
            return Err(Error::Config(
                "seed must fit in 63 bits so configs round-trip through TOML".into(),
            ));
        }
        match self.model {
            Model::Floquet => {
                if self.theta.is_some() {
                    return Err(Error::Config(
                        "theta is an MFI knob; the Floquet family takes `a`".into(),
                    ));
                }
                let a = self
                    .a
                    .ok_or_else(|| Error::Config("floquet model requires `a`".into()))?;
                floquet_initial(self.n_sites, a)?;
            }
            Model::Mfi => {
                if self.a.is_some() {
                    return Err(Error::Config(
                        "`a` is a Floquet knob; the MFI family takes theta".into(),
                    ));
                }
                let theta = self
                    .theta
                    .ok_or_else(|| Error::Config("mfi model requires `theta`".into()))?;
                self.mfi.validate()?;
                mfi_initial(self.n_sites, theta, &self.mfi)?;
            }
        }
        Ok(())
    }

    /// Initial Bloch angles for this configuration.
    pub fn initial_angles(&self) -> Result<BlochAngles> {
        match self.model {
            Model::Floquet => floquet_initial(self.n_sites, self.a.unwrap_or(0.0)),
            Model::Mfi => mfi_initial(
                self.n_sites,
                self.theta
                    .ok_or_else(|| Error::Config("mfi model requires `theta`".into()))?,
                &self.mfi,
            ),
        }
    }

    /// Number of stepper iterations implied by t_max.
    pub fn n_steps(&self) -> usize {
        match self.model {
            Model::Floquet => self.t_max.round() as usize,
            Model::Mfi => (self.t_max / self.mfi.dt).round() as usize,
        }
    }

    /// Physical time of step index `step`.
    pub fn time_of(&self, step: usize) -> f64 {
        match self.model {
            Model::Floquet => step as f64,
            Model::Mfi => step as f64 * self.mfi.dt,
        }
    }

    /// Effective sampling stride.
    pub fn sample_stride(&self) -> usize {
        self.sample_every.unwrap_or(match self.model {
            Model::Floquet => 1,
            Model::Mfi => (0.5 / self.mfi.dt).round().max(1.0) as usize,
        })
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self =
            toml::from_str(text).map_err(|e| Error::Config(format!("config parse: {e}")))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// One axis of a sweep: vary the stagger amplitude, the tilt angle, or the
/// chain length, holding everything else at the template's values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SweepGrid {
    A(Vec<f64>),
    Theta(Vec<f64>),
    N(Vec<usize>),
}

impl SweepGrid {
    pub fn len(&self) -> usize {
        match self {
            SweepGrid::A(v) => v.len(),
            SweepGrid::Theta(v) => v.len(),
            SweepGrid::N(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Human-readable tag of grid point `i`, usable as a file stem.
    pub fn tag(&self, i: usize) -> String {
        match self {
            SweepGrid::A(v) => format!("a{:.4}", v[i]),
            SweepGrid::Theta(v) => format!("theta{:.4}", v[i]),
            SweepGrid::N(v) => format!("n{}", v[i]),
        }
    }

    /// Template specialized to grid point `i` (seed untouched; the runner
    /// derives per-point seeds).
    pub fn apply(&self, template: &QuenchConfig, i: usize) -> QuenchConfig {
        let mut cfg = template.clone();
        match self {
            SweepGrid::A(v) => cfg.a = Some(v[i]),
            SweepGrid::Theta(v) => cfg.theta = Some(v[i]),
            SweepGrid::N(v) => cfg.n_sites = v[i],
        }
        cfg
    }
}
