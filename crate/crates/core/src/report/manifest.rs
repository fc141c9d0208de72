use serde::Serialize;

use crate::config::ScreenConfig;

/// Provenance embedded in every JSON artifact and written as
/// `manifest.json` next to table outputs.
///
/// `timestamp` comes from `SOURCE_DATE_EPOCH` when set and is otherwise
/// null, so repeated runs stay byte-identical.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub input_path: Option<String>,
    pub config_path: Option<String>,
    pub seed: u64,
    pub tool_version: String,
    pub defaults: ScreenConfig,
    pub effective_config: ScreenConfig,
    pub timestamp: Option<u64>,
}

impl RunManifest {
    pub fn new(
        command: &str,
        input_path: Option<String>,
        config_path: Option<String>,
        seed: u64,
        effective_config: &ScreenConfig,
    ) -> Self {
        Self {
            command: command.into(),
            input_path,
            config_path,
            seed,
            tool_version: concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION")).into(),
            defaults: ScreenConfig::default(),
            effective_config: effective_config.clone(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH").ok().and_then(|s| s.parse().ok()),
        }
    }
}
