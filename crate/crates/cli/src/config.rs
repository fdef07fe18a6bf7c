//! Scenario configuration, read from a TOML file.
//!
//! ```toml
//! weights = [0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0]
//! preset = "current"          # current | expanded | ignore
//! fix_total_solar = true
//! data_dir = "data/demo"      # overridden by SOLARSITE_DATA
//! output_dir = "out"
//! seed = 42                   # synthetic data generation only
//! hours_per_step = 4
//! periods = [2025, 2030, 2035, 2040]
//! ```
use crate::error::{CliError, Result};
use serde::{Deserialize, Serialize};
use solarsite_core::land::ZoningPreset;
use std::path::{Path, PathBuf};

pub const DATA_ENV: &str = "SOLARSITE_DATA";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Cost weights; `1 - w` goes on local benefit.
    pub weights: Vec<f64>,
    pub preset: ZoningPreset,
    /// Pin cumulative solar to the least-cost levels for every weight below 1.
    pub fix_total_solar: bool,
    pub data_dir: PathBuf,
    pub output_dir: PathBuf,
    pub seed: u64,
    pub hours_per_step: usize,
    pub periods: Vec<u32>,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            weights: vec![0.0, 0.2, 0.4, 0.5, 0.6, 0.8, 1.0],
            preset: ZoningPreset::Current,
            fix_total_solar: true,
            data_dir: default_data_dir(),
            output_dir: PathBuf::from("out"),
            seed: 42,
            hours_per_step: 4,
            periods: vec![2025, 2030, 2035, 2040],
        }
    }
}

/// The demo dataset shipped with the crate.
pub fn default_data_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join("demo")
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let cfg: Self = toml::from_str(&text).map_err(|e| CliError::Parse {
            path: path.into(),
            msg: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Applies the data-directory environment override.
    pub fn with_env(mut self) -> Self {
        if let Some(dir) = std::env::var_os(DATA_ENV) {
            self.data_dir = dir.into();
        }
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.weights.is_empty() {
            return Err(CliError::Config("weights list is empty".into()));
        }
        if let Some(w) = self.weights.iter().find(|w| !(0.0..=1.0).contains(*w)) {
            return Err(CliError::Config(format!("weight {w} outside [0, 1]")));
        }
        if self.hours_per_step == 0 || 24 % self.hours_per_step != 0 {
            return Err(CliError::Config(format!("hours_per_step {} does not divide 24", self.hours_per_step)));
        }
        if self.periods.is_empty() || self.periods.windows(2).any(|p| p[0] >= p[1]) {
            return Err(CliError::Config("periods must be non-empty and increasing".into()));
        }
        Ok(())
    }

    /// Weights in solve order: the cost-only run first, then descending.
    pub fn sweep_order(&self) -> Vec<f64> {
        let mut w = self.weights.clone();
        w.push(1.0);
        w.sort_by(|a, b| b.total_cmp(a));
        w.dedup();
        w
    }
}
