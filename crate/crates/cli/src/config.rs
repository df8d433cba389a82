//! Experiment config files and their merge with command-line flags.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

/// `{"command": "words count", "params": {...}, "seed": 1, "output": "...", "format": "csv"}`.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default)]
    pub params: Map<String, Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub format: Option<Format>,
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("config {}: {e}", path.display())))
    }
}

/// Flags as a JSON object; absent options and unset switches are dropped so
/// they do not shadow config values.
pub fn flags_to_params<T: Serialize>(args: &T) -> Map<String, Value> {
    match serde_json::to_value(args) {
        Ok(Value::Object(map)) => map
            .into_iter()
            .filter(|(_, v)| !matches!(v, Value::Null | Value::Bool(false)))
            .collect(),
        _ => Map::new(),
    }
}

/// Config params overlaid by explicit flags.
pub fn merge(config: &Map<String, Value>, flags: Map<String, Value>) -> Map<String, Value> {
    let mut out = config.clone();
    out.extend(flags);
    out
}

pub fn parse_params<T: for<'de> Deserialize<'de>>(command: &str, params: &Map<String, Value>) -> Result<T, CliError> {
    serde_json::from_value(Value::Object(params.clone())).map_err(|e| CliError::Validation(format!("{command}: {e}")))
}
