//! Run configuration: a JSON document with `system`, `experiment` and
//! `output` blocks. Every field has a default, so `{}` is a valid config.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::output::Format;
use super::CliError;
use crate::dynamics::{hamiltonian, ForcingSpec, PlanarState, SystemSpec};
use crate::solvers::{NewtonOptions, SolverKind, StepPolicy};
use crate::unperturbed::{level_for_period, EnergyLevel, ResonanceSpec};

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub system: SystemBlock,
    pub experiment: ExperimentBlock,
    pub output: OutputBlock,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SystemBlock {
    /// Forcing spectrum, e.g. `"1*sin(1),4*cos(2)"`.
    pub forcing: String,
    pub omega: Option<f64>,
    pub period: Option<f64>,
    pub epsilon: f64,
}

impl Default for SystemBlock {
    fn default() -> Self {
        Self { forcing: "1*sin(1)".into(), omega: None, period: None, epsilon: 0.0 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SeedLine {
    /// `(0, v0 - w)` to `(0, v0 + w)`.
    #[default]
    Axis,
    /// `(v1 - w, v1 - w)` to `(v1 + w, v1 + w)` with `H(v1, v1) = c`.
    Diagonal,
    /// `line_start` to `line_end`.
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentBlock {
    pub m: Option<u32>,
    pub n: Option<u32>,
    /// Axis velocity of the resonant level.
    pub v0: Option<f64>,
    /// Energy of the resonant level.
    pub c: Option<f64>,
    /// Base point on the resonant level (Melnikov and find-po).
    pub x0: Option<[f64; 2]>,
    pub t0: f64,

    // phase-portrait
    pub seeds: Option<Vec<[f64; 2]>>,
    pub duration: f64,
    pub sample_dt: f64,

    // period-curve
    pub v_min: f64,
    pub v_max: f64,
    pub points: usize,

    // strobo-scan
    pub seed_line: SeedLine,
    pub seed_count: usize,
    /// Half-length of axis/diagonal seed lines; defaults to `2 eps`
    /// (or 0.2 when `eps = 0`).
    pub half_width: Option<f64>,
    pub line_start: Option<[f64; 2]>,
    pub line_end: Option<[f64; 2]>,
    pub iterations: usize,

    // melnikov
    pub samples: usize,

    // find-po
    pub solver: SolverKind,
    pub seed_zero_index: Option<usize>,
    pub continue_to: Option<f64>,
    pub closure_samples: usize,
    pub residual_tol: f64,
    pub max_iters: usize,
}

impl Default for ExperimentBlock {
    fn default() -> Self {
        Self {
            m: None,
            n: None,
            v0: None,
            c: None,
            x0: None,
            t0: 0.0,
            seeds: None,
            duration: 20.0,
            sample_dt: 0.05,
            v_min: 0.1,
            v_max: 1.9,
            points: 200,
            seed_line: SeedLine::Axis,
            seed_count: 20,
            half_width: None,
            line_start: None,
            line_end: None,
            iterations: 300,
            samples: 256,
            solver: SolverKind::Strobo,
            seed_zero_index: None,
            continue_to: None,
            closure_samples: 600,
            residual_tol: 1e-10,
            max_iters: 20,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputBlock {
    pub dir: PathBuf,
    pub format: Format,
    /// Significant digits of every real number written.
    pub precision: usize,
}

impl Default for OutputBlock {
    fn default() -> Self {
        Self { dir: PathBuf::from("out"), format: Format::Csv, precision: 15 }
    }
}

/// Default base level when a resonance is needed but none is given.
pub const DEFAULT_V0: f64 = 1.6;

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("invalid config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let s = &self.system;
        if s.omega.is_some() && s.period.is_some() {
            return Err(CliError::Config("give at most one of system.omega and system.period".into()));
        }
        if !(s.epsilon.is_finite() && s.epsilon >= 0.0) {
            return Err(CliError::Config(format!("system.epsilon must be >= 0, got {}", s.epsilon)));
        }
        let e = &self.experiment;
        if [e.v0.is_some(), e.c.is_some(), e.x0.is_some()].iter().filter(|&&b| b).count() > 1 {
            return Err(CliError::Config("give at most one of experiment.v0, experiment.c, experiment.x0".into()));
        }
        if self.output.precision == 0 || self.output.precision > 17 {
            return Err(CliError::Config("output.precision must be in 1..=17".into()));
        }
        ForcingSpec::parse_terms(&s.forcing).map_err(|e| CliError::Config(e.to_string()))?;
        Ok(())
    }

    fn explicit_period(&self) -> Option<f64> {
        match (self.system.omega, self.system.period) {
            (Some(w), None) => Some(2.0 * std::f64::consts::PI / w),
            (None, Some(t)) => Some(t),
            _ => None,
        }
    }

    /// Base point given in the experiment block, if any.
    pub fn base_point(&self) -> Result<Option<PlanarState>, CliError> {
        let e = &self.experiment;
        if let Some([u, v]) = e.x0 {
            return PlanarState::try_new(u, v).map(Some).map_err(|e| CliError::Config(e.to_string()));
        }
        if let Some(c) = e.c {
            let level = EnergyLevel::new(c).map_err(|e| CliError::Config(e.to_string()))?;
            return Ok(Some(PlanarState::new(0.0, level.axis_velocity())));
        }
        Ok(e.v0.map(|v| PlanarState::new(0.0, v)))
    }

    /// Resonance from `(m, n)` and either a level (`v0`, `c`, `x0`) or an
    /// explicit forcing period. Giving both is over-determined.
    pub fn resonance(&self) -> Result<ResonanceSpec, CliError> {
        let m = self.experiment.m.unwrap_or(3);
        let n = self.experiment.n.unwrap_or(1);
        let base = self.base_point()?;
        let spec = match (base, self.explicit_period()) {
            (Some(_), Some(_)) => {
                return Err(CliError::Config(
                    "resonance is over-determined: drop system.omega/period or the level (v0, c, x0)".into(),
                ))
            }
            (Some(x), None) => {
                let h = hamiltonian(x);
                let v0 = EnergyLevel::new(h).map_err(|e| CliError::Config(e.to_string()))?.axis_velocity();
                ResonanceSpec::from_axis_velocity(v0, m, n)
            }
            (None, Some(t)) => level_for_period(t, m, n),
            (None, None) => ResonanceSpec::from_axis_velocity(DEFAULT_V0, m, n),
        };
        spec.map_err(|e| CliError::Config(format!("cannot resolve resonance: {e}")))
    }

    /// System with the explicit period, or `omega = 1` when none is given.
    pub fn explicit_system(&self) -> Result<SystemSpec, CliError> {
        let period = self.explicit_period().unwrap_or(2.0 * std::f64::consts::PI);
        self.system_with_period(period)
    }

    pub fn system_with_period(&self, period: f64) -> Result<SystemSpec, CliError> {
        let terms = ForcingSpec::parse_terms(&self.system.forcing).map_err(|e| CliError::Config(e.to_string()))?;
        let forcing = ForcingSpec::from_period(period, terms).map_err(|e| CliError::Config(e.to_string()))?;
        SystemSpec::new(forcing, self.system.epsilon).map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn newton_options(&self) -> NewtonOptions {
        NewtonOptions {
            residual_tol: self.experiment.residual_tol,
            max_iters: self.experiment.max_iters,
            ..NewtonOptions::default()
        }
    }

    pub fn step_policy(&self) -> StepPolicy {
        StepPolicy::default()
    }
}
