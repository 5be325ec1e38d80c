use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::bandit::{ActionSpaceConfig, ContextNormalization};
use crate::channel::{ChannelParams, CostConfig};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Learner {
    #[serde(rename = "LinTS")]
    LinTs,
    #[serde(rename = "UCB1")]
    Ucb1,
    /// Plays the analytic optimum of the action space every step.
    FixedOptimal,
}

impl std::fmt::Display for Learner {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Learner::LinTs => "LinTS",
            Learner::Ucb1 => "UCB1",
            Learner::FixedOptimal => "FixedOptimal",
        })
    }
}

fn default_replications() -> usize {
    10
}

fn default_tau() -> f64 {
    1e-4
}

fn default_sample_scale() -> f64 {
    crate::bandit::DEFAULT_SAMPLE_SCALE
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub channel: ChannelParams,
    pub action_cfg: ActionSpaceConfig,
    pub cost: CostConfig,
    pub learner: Learner,
    pub horizon: usize,
    #[serde(default = "default_replications")]
    pub replications: usize,
    pub master_seed: u64,
    /// Threshold of the exceedance feature, in cost units.
    #[serde(default = "default_tau")]
    pub tau: f64,
    /// Multiplier on the Thompson sampling posterior standard deviation.
    #[serde(default = "default_sample_scale")]
    pub sample_scale: f64,
    /// Multiplier on the UCB-1 confidence radius.
    #[serde(default = "one")]
    pub ucb_width: f64,
    #[serde(default)]
    pub context_normalization: ContextNormalization,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.channel.validate()?;
        self.action_cfg.validate()?;
        self.cost.validate()?;
        if self.horizon == 0 || self.horizon >= u32::MAX as usize {
            return Err(Error::config("horizon", format!("{} outside [1, 2^32 - 1)", self.horizon)));
        }
        if self.replications == 0 || self.replications > u32::MAX as usize {
            return Err(Error::config("replications", "must be at least 1"));
        }
        if !(self.tau >= 0.0 && self.tau.is_finite()) {
            return Err(Error::config("tau", format!("{} is not a non-negative number", self.tau)));
        }
        if !(self.sample_scale > 0.0 && self.sample_scale.is_finite()) {
            return Err(Error::config("sample_scale", format!("{} is not positive", self.sample_scale)));
        }
        if !(self.ucb_width >= 0.0 && self.ucb_width.is_finite()) {
            return Err(Error::config("ucb_width", format!("{} is negative", self.ucb_width)));
        }
        Ok(())
    }

    /// Reads a config file, or the config embedded in a run sidecar.
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        })?;
        let json_err = |source| Error::Json {
            path: path.to_owned(),
            source,
        };
        let value: serde_json::Value = serde_json::from_str(&text).map_err(json_err)?;
        let cfg: ExperimentConfig = if value.get("artifact_version").is_some() {
            serde_json::from_value::<RunManifest>(value).map_err(json_err)?.config
        } else {
            serde_json::from_value(value).map_err(json_err)?
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

/// Sidecar written next to every CSV log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub artifact: String,
    pub artifact_version: String,
    pub config: ExperimentConfig,
}

impl RunManifest {
    pub fn new(config: ExperimentConfig) -> Self {
        RunManifest {
            artifact: env!("CARGO_PKG_NAME").to_owned(),
            artifact_version: env!("CARGO_PKG_VERSION").to_owned(),
            config,
        }
    }
}
