use std::path::{Path, PathBuf};

use alphadiv::gibbs::{GGParams, PDParams};
use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use crate::CliError;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, ValueEnum)]
pub enum Experiment {
    #[serde(rename = "weights")]
    #[value(name = "weights")]
    Weights,
    #[serde(rename = "eppf-check")]
    #[value(name = "eppf-check")]
    EppfCheck,
    #[serde(rename = "m1-check")]
    #[value(name = "m1-check")]
    M1Check,
    #[serde(rename = "chain")]
    #[value(name = "chain")]
    Chain,
    #[serde(rename = "sde")]
    #[value(name = "sde")]
    Sde,
    #[serde(rename = "figure1")]
    #[value(name = "figure1")]
    Figure1,
    #[serde(rename = "particles")]
    #[value(name = "particles")]
    Particles,
    #[serde(rename = "conditioned")]
    #[value(name = "conditioned")]
    Conditioned,
    #[serde(rename = "boundary")]
    #[value(name = "boundary")]
    Boundary,
    #[serde(rename = "generator-check")]
    #[value(name = "generator-check")]
    GeneratorCheck,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Route {
    Exact,
    Quadrature,
    Asymptotic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    FullTruncation,
    DriftImplicit,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Clock {
    Discrete,
    Exponential,
}

/// Model parameters. A generalized-gamma model is given either by `a` and
/// `tau` or by `beta` (with `tau = 1`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "lowercase", deny_unknown_fields)]
pub enum Params {
    Gg {
        #[serde(default, skip_serializing_if = "Option::is_none")]
        a: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        tau: Option<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        beta: Option<f64>,
        #[serde(default = "half")]
        alpha: f64,
    },
    Pd {
        theta: f64,
        #[serde(default = "half")]
        alpha: f64,
    },
}

fn half() -> f64 {
    0.5
}

impl Params {
    pub fn gg(&self) -> Result<GGParams, CliError> {
        match *self {
            Params::Gg { a: None, tau: None, beta: Some(beta), alpha } => Ok(GGParams::from_beta(beta, alpha)?),
            Params::Gg { a: Some(a), tau, beta: None, alpha } => Ok(GGParams::new(a, tau.unwrap_or(1.0), alpha)?),
            Params::Gg { .. } => Err(CliError::Usage("give either beta or a (and optionally tau), not both".into())),
            Params::Pd { .. } => Err(CliError::Usage("this experiment needs a generalized-gamma model (family \"gg\")".into())),
        }
    }

    pub fn pd(&self) -> Result<Option<PDParams>, CliError> {
        match *self {
            Params::Pd { theta, alpha } => Ok(Some(PDParams::new(theta, alpha)?)),
            Params::Gg { .. } => Ok(None),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dir: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

/// Contents of the `--config` file. Fields an experiment does not use are
/// ignored by it; missing ones take the experiment's defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub schema_version: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub experiment: Option<Experiment>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<Params>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub steps: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicates: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dt: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t_max: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub record_every: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_k: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s0: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub betas: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub route: Option<Route>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub scheme: Option<Scheme>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clock: Option<Clock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub y0: Option<f64>,
    #[serde(default)]
    pub output: OutputConfig,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
        let cfg: Self = serde_json::from_str(&text)
            .map_err(|e| CliError::Usage(format!("invalid config {}: {e}", path.display())))?;
        if cfg.schema_version != SCHEMA_VERSION {
            return Err(CliError::Usage(format!(
                "unsupported schema_version {} (this build reads {SCHEMA_VERSION})",
                cfg.schema_version
            )));
        }
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let sizes = [("n", self.n), ("k", self.k), ("replicates", self.replicates), ("points", self.points), ("start_k", self.start_k)];
        for (name, v) in sizes {
            if v == Some(0) {
                return Err(CliError::Usage(format!("{name} must be positive")));
            }
        }
        if self.steps == Some(0) || self.record_every == Some(0) {
            return Err(CliError::Usage("steps and record_every must be positive".into()));
        }
        for (name, v) in [("dt", self.dt), ("t_max", self.t_max), ("y0", self.y0)] {
            if let Some(x) = v {
                if !(x > 0.0 && x.is_finite()) {
                    return Err(CliError::Usage(format!("{name} must be positive and finite, got {x}")));
                }
            }
        }
        if self.seed.is_none() {
            return Err(CliError::Usage("a seed is required (config \"seed\" or --seed)".into()));
        }
        Ok(())
    }

    pub fn gg(&self) -> Result<GGParams, CliError> {
        self.params
            .as_ref()
            .ok_or_else(|| CliError::Usage("config needs \"params\"".into()))?
            .gg()
    }

    pub fn seed(&self) -> u64 {
        self.seed.expect("validated")
    }

    pub fn format(&self) -> Format {
        self.output.format.unwrap_or_default()
    }
}
