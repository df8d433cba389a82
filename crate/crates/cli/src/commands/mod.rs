//! Subcommand arguments and their execution.

pub mod flow;
pub mod fup;
pub mod sets;
pub mod words;

use std::path::{Path, PathBuf};

use fuplab_core::intervals::{random_porous, triadic_cantor};
use fuplab_core::IntervalSet;

use crate::CliError;

pub fn require<T>(command: &str, name: &str, v: Option<T>) -> Result<T, CliError> {
    v.ok_or_else(|| CliError::Validation(format!("{command}: missing required parameter `{name}`")))
}

pub fn require_seed(command: &str, seed: Option<u64>) -> Result<u64, CliError> {
    seed.ok_or_else(|| CliError::Validation(format!("{command}: --seed is required for randomized runs")))
}

pub fn read_json<T: for<'de> serde::Deserialize<'de>>(what: &str, path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Validation(format!("{what} {}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Validation(format!("{what} {}: {e}", path.display())))
}

/// Exactly one of a JSON file, a triadic Cantor level or a seeded random porous set.
pub struct SetSource<'a> {
    pub input: &'a Option<PathBuf>,
    pub cantor_level: Option<u32>,
    pub random: bool,
    pub nu: Option<f64>,
    pub alpha0: Option<f64>,
}

impl SetSource<'_> {
    pub fn load(&self, command: &str, seed: Option<u64>) -> Result<IntervalSet, CliError> {
        let chosen = usize::from(self.input.is_some()) + usize::from(self.cantor_level.is_some()) + usize::from(self.random);
        if chosen != 1 {
            return Err(CliError::Validation(format!(
                "{command}: give exactly one of `input`, `cantor_level` or `random`"
            )));
        }
        if let Some(path) = self.input {
            let set: IntervalSet = read_json("interval set", path)?;
            return Ok(set);
        }
        if let Some(level) = self.cantor_level {
            if level > 20 {
                return Err(CliError::Validation(format!("{command}: cantor_level must be at most 20")));
            }
            return Ok(triadic_cantor(level));
        }
        let seed = require_seed(command, seed)?;
        let nu = require(command, "nu", self.nu)?;
        let alpha0 = require(command, "alpha0", self.alpha0)?;
        Ok(random_porous(nu, alpha0, seed)?)
    }
}
