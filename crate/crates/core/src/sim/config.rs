use std::path::Path;

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::model::Instance;

pub const DEFAULT_SEED: u64 = 20240917;
pub const DEFAULT_REPS: usize = 200;

/// JSON run configuration. Every field is optional; command-line flags
/// override the file.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub instance: Option<Instance>,
    pub eta: Option<f64>,
    pub mu1: Option<f64>,
    pub seed: Option<u64>,
    pub reps: Option<usize>,
    /// Horizon grid of the horizon experiment, or the single horizon of the
    /// others.
    pub horizons: Option<Vec<usize>>,
    /// Knob grid of the shift and prediction experiments.
    pub knobs: Option<Vec<f64>>,
    /// Per-period slack for the relaxed plan benchmark.
    pub eps: Option<Vec<f64>>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text).map_err(|e| Error::InvalidInput(format!("{}: {e}", path.display())))
    }
}
