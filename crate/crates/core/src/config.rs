//! Screen configuration, loaded from a TOML key-value file whose keys are the
//! field names of [`ScreenConfig`] plus an optional `tracks` list.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::data::TrackSet;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum Sidedness {
    /// p-value in the direction of the observed sign.
    #[default]
    OneTailed,
    TwoTailed,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScreenConfig {
    pub l_invalid_threshold: f64,
    pub fp_indeterminate_threshold: f64,
    pub alpha: f64,
    pub r_sig_sidedness: Sidedness,
    pub rbs_bootstrap_samples: usize,
    pub min_cell_warning: u64,
    pub seed: u64,
}

impl Default for ScreenConfig {
    fn default() -> Self {
        Self {
            l_invalid_threshold: 0.95,
            fp_indeterminate_threshold: 0.25,
            alpha: 0.05,
            r_sig_sidedness: Sidedness::OneTailed,
            rbs_bootstrap_samples: 10_000,
            min_cell_warning: 5,
            seed: 20_260_418,
        }
    }
}

impl ScreenConfig {
    pub fn validate(&self) -> Result<()> {
        let open_unit = |name: &str, v: f64| {
            if v > 0.0 && v < 1.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must lie in (0, 1), got {v}")))
            }
        };
        open_unit("l_invalid_threshold", self.l_invalid_threshold)?;
        open_unit("fp_indeterminate_threshold", self.fp_indeterminate_threshold)?;
        open_unit("alpha", self.alpha)?;
        if self.rbs_bootstrap_samples < 1_000 {
            return Err(Error::Config(format!(
                "rbs_bootstrap_samples must be at least 1000, got {}",
                self.rbs_bootstrap_samples
            )));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        Self { seed, ..self.clone() }
    }
}

/// Everything a config file may carry.
#[derive(Debug, Clone, PartialEq, Serialize, Default)]
pub struct RunConfig {
    pub screen: ScreenConfig,
    pub tracks: TrackSet,
}

#[derive(Deserialize)]
struct RunConfigFile {
    #[serde(default)]
    tracks: Option<Vec<String>>,
    #[serde(flatten)]
    screen: toml::Table,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let file: RunConfigFile = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        let screen: ScreenConfig = file
            .screen
            .try_into()
            .map_err(|e: toml::de::Error| Error::Config(e.to_string()))?;
        screen.validate()?;
        let tracks = match file.tracks {
            Some(labels) if labels.is_empty() => return Err(Error::Config("tracks must not be empty".into())),
            Some(labels) => TrackSet::new(labels),
            None => TrackSet::default(),
        };
        Ok(Self { screen, tracks })
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }
}
