//! JSON run configuration.
//!
//! ```json
//! {
//!   "spectrum": [0.0, 1.0, 2.0],
//!   "initial": [0.5, 0.2, 0.3],
//!   "constants": { "k": 1.0, "tau": 1.0 },
//!   "integrator": { "method": "rk4", "step": 0.01, "t_end": 50.0, "sample_stride": 10 },
//!   "outputs": { "trajectory_csv": "trajectory.csv", "summary_json": "summary.json" }
//! }
//! ```
//!
//! `initial` is either an explicit probability list, `{"canonical": beta}`,
//! or `{"uniform": [indices]}`; the three specifiers are mutually exclusive
//! by construction. Command-line flags override config fields.

use serde::Deserialize;

use super::CliError;
use crate::equilibrium::canonical_full;
use crate::integrate::{IntegratorConfig, Method};
use crate::spectrum::EnergySpectrum;
use crate::state::{ModelConstants, StateDistribution, ValidationMode};
use crate::SUM_TOLERANCE;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub spectrum: Vec<f64>,
    pub initial: InitialState,
    #[serde(default)]
    pub constants: ConstantsSection,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub outputs: OutputsSection,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum InitialState {
    /// Explicit probability list (normalized leniently, with a warning).
    Probs(Vec<f64>),
    Tagged(TaggedInitial),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TaggedInitial {
    /// Canonical state at the given β over the full spectrum.
    Canonical(f64),
    /// Uniform state over the given support indices.
    Uniform(Vec<usize>),
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConstantsSection {
    #[serde(default = "one")]
    pub k: f64,
    #[serde(default = "one")]
    pub tau: f64,
}

impl Default for ConstantsSection {
    fn default() -> Self {
        Self { k: 1.0, tau: 1.0 }
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "rk4_name")]
    pub method: String,
    pub step: Option<f64>,
    pub tolerance: Option<f64>,
    pub t_end: Option<f64>,
    #[serde(default = "default_stride")]
    pub sample_stride: usize,
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            method: rk4_name(),
            step: None,
            tolerance: None,
            t_end: None,
            sample_stride: default_stride(),
        }
    }
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    pub trajectory_csv: Option<String>,
    pub summary_json: Option<String>,
}

fn one() -> f64 {
    1.0
}

fn rk4_name() -> String {
    "rk4".into()
}

fn default_stride() -> usize {
    10
}

impl RunConfig {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config '{path}': {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config '{path}': {e}")))
    }

    pub fn spectrum(&self) -> Result<EnergySpectrum, CliError> {
        Ok(EnergySpectrum::new(self.spectrum.clone())?)
    }

    pub fn constants(&self) -> Result<ModelConstants, CliError> {
        Ok(ModelConstants::new(self.constants.k, self.constants.tau)?)
    }

    /// Build the initial state; CLI ingestion is lenient and prints a
    /// warning when an explicit list needed rescaling.
    pub fn initial_state(&self, spectrum: &EnergySpectrum) -> Result<StateDistribution, CliError> {
        match &self.initial {
            InitialState::Probs(probs) => {
                let sum: f64 = probs.iter().sum();
                if (sum - 1.0).abs() > SUM_TOLERANCE {
                    eprintln!("warning: initial probabilities sum to {sum}; normalizing");
                }
                Ok(StateDistribution::new(probs.clone(), ValidationMode::Lenient)?)
            }
            InitialState::Tagged(TaggedInitial::Canonical(beta)) => {
                Ok(canonical_full(*beta, spectrum)?)
            }
            InitialState::Tagged(TaggedInitial::Uniform(support)) => {
                Ok(StateDistribution::uniform_over(spectrum.len(), support)?)
            }
        }
    }

    pub fn integrator(&self, constants: &ModelConstants) -> Result<IntegratorConfig, CliError> {
        let t_end = self.integrator.t_end.unwrap_or(50.0 * constants.tau());
        if t_end < 0.0 {
            eprintln!(
                "warning: backward integration (t_end = {t_end}) descends from equilibrium \
                 and is best effort"
            );
        }
        let method = match self.integrator.method.as_str() {
            "rk4" => Method::Rk4 { step: self.integrator.step.unwrap_or(constants.tau() / 100.0) },
            "rk45" => Method::Rk45 { tolerance: self.integrator.tolerance.unwrap_or(1e-8) },
            other => {
                return Err(CliError::Usage(format!(
                    "unknown integrator method '{other}' (expected rk4 or rk45)"
                )))
            }
        };
        Ok(IntegratorConfig::new(method, t_end, self.integrator.sample_stride)?)
    }
}

/// Sweep configuration: a base run plus one varied field.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub base: RunConfig,
    pub vary: VarySection,
    pub out_dir: String,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VarySection {
    /// One of: "tau", "t_end", "step", "beta" (canonical initial state).
    pub field: String,
    pub values: Vec<f64>,
}

impl SweepConfig {
    pub fn load(path: &str) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(format!("cannot read config '{path}': {e}")))?;
        serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config '{path}': {e}")))
    }

    /// The base run with the varied field set to `value`.
    pub fn point(&self, value: f64) -> Result<RunConfig, CliError> {
        let mut config = self.base.clone();
        match self.vary.field.as_str() {
            "tau" => config.constants.tau = value,
            "t_end" => config.integrator.t_end = Some(value),
            "step" => config.integrator.step = Some(value),
            "beta" => config.initial = InitialState::Tagged(TaggedInitial::Canonical(value)),
            other => {
                return Err(CliError::Usage(format!(
                    "unknown sweep field '{other}' (expected tau, t_end, step, or beta)"
                )))
            }
        }
        Ok(config)
    }
}
