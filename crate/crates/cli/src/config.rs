//! Experiment configuration files.

use std::path::Path;

use monotone_bandits::{
    BanditInstance, Direction, Experiment, ExplorationSchedule, Instance, Manifest, Objective, PolicyKind, Violation,
};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};
use crate::presets;

fn default_c() -> f64 {
    ExplorationSchedule::<f64>::DEFAULT_C
}

fn default_horizon() -> u64 {
    1_000_000
}

fn default_trials() -> u64 {
    30
}

fn default_checkpoints() -> usize {
    monotone_bandits::sim::DEFAULT_CHECKPOINTS
}

/// One JSON document describing an experiment. Unknown keys are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub means: Vec<f64>,
    pub tau: f64,
    #[serde(default)]
    pub direction: Direction,
    pub objective: Objective,
    /// Defaults to the policy built for `objective`.
    #[serde(default)]
    pub policy: Option<PolicyKind>,
    #[serde(default = "default_c")]
    pub c: f64,
    #[serde(default = "default_horizon")]
    pub horizon: u64,
    #[serde(default = "default_trials")]
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_checkpoints")]
    pub checkpoints: usize,
    /// Output path prefix.
    #[serde(default)]
    pub out: Option<String>,
    #[serde(default)]
    pub workers: Option<usize>,
}

impl ExperimentConfig {
    /// Parses JSON; errors name the offending field.
    pub fn from_json(text: &str) -> CliResult<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            if path == "." {
                CliError::config(format!("config: {}", e.inner()))
            } else {
                CliError::config(format!("config field `{path}`: {}", e.inner()))
            }
        })
    }

    pub fn from_file(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn from_preset(name: &str) -> CliResult<Self> {
        let text = presets::preset(name).ok_or_else(|| {
            CliError::config(format!("unknown preset `{name}` (available: {})", presets::NAMES.join(", ")))
        })?;
        Self::from_json(text)
    }

    /// The config that produced `manifest`, writing to `out`.
    pub fn from_manifest(manifest: &Manifest, out: Option<String>) -> Self {
        Self {
            means: manifest.means.clone(),
            tau: manifest.tau,
            direction: manifest.direction,
            objective: manifest.objective,
            policy: Some(manifest.policy),
            c: manifest.c,
            horizon: manifest.horizon,
            trials: manifest.trials,
            seed: manifest.experiment_seed,
            checkpoints: manifest.checkpoints,
            out,
            workers: None,
        }
    }

    pub fn policy(&self) -> PolicyKind {
        self.policy.unwrap_or_else(|| PolicyKind::for_objective(self.objective))
    }

    /// The validated instance; errors name the field at fault.
    pub fn instance(&self) -> CliResult<Instance> {
        BanditInstance::new(self.means.clone(), self.tau, self.direction).map_err(|e| {
            let field = match &e {
                monotone_bandits::Error::InvalidInstance(Violation::ThresholdOutOfRange(_)) => "tau",
                monotone_bandits::Error::InvalidInstance(Violation::NoArmBelow { .. })
                | monotone_bandits::Error::InvalidInstance(Violation::NoArmAbove { .. }) => "means/tau",
                _ => "means",
            };
            CliError::config(format!("config field `{field}`: {e}"))
        })
    }

    /// Full validation into an experiment.
    pub fn to_experiment(&self) -> CliResult<Experiment> {
        let instance = self.instance()?;
        let schedule = ExplorationSchedule::new(self.c).map_err(|e| CliError::config(format!("config field `c`: {e}")))?;
        let k = instance.num_arms() as u64;
        if self.horizon < k {
            return Err(CliError::config(format!(
                "config field `horizon`: {} is less than the number of arms ({k})",
                self.horizon
            )));
        }
        if self.trials == 0 {
            return Err(CliError::config("config field `trials`: must be at least 1"));
        }
        if self.workers == Some(0) {
            return Err(CliError::config("config field `workers`: must be at least 1"));
        }
        monotone_bandits::optimal_arm(&instance, self.objective)
            .map_err(|e| CliError::config(format!("config field `objective`: {e}")))?;
        let mut spec = Experiment::new(instance, self.objective);
        spec.policy = self.policy();
        spec.schedule = schedule;
        spec.horizon = self.horizon;
        spec.trials = self.trials;
        spec.seed = self.seed;
        spec.checkpoints = self.checkpoints;
        if let Some(w) = self.workers {
            spec.workers = w;
        }
        Ok(spec)
    }
}
