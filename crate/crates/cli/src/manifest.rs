use std::path::{Path, PathBuf};

use pqdsim::Condition;
use serde::Serialize;

/// Record of one invocation, written next to its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: &'static str,
    pub tool_version: &'static str,
    pub seed: u64,
    pub config_hash: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub condition: Option<Condition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    pub wall_time_s: f64,
    pub outputs: Vec<PathBuf>,
}

impl RunManifest {
    pub fn new(subcommand: &'static str, seed: u64) -> Self {
        Self {
            subcommand,
            tool_version: env!("CARGO_PKG_VERSION"),
            seed,
            config_hash: None,
            condition: None,
            samples: None,
            wall_time_s: 0.0,
            outputs: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}
