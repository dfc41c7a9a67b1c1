//! The JSON record written next to every command's output.

use std::path::Path;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use serde_json::Value;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub version: String,
    pub wall_clock_ms: u64,
    pub counts: Value,
}

impl RunManifest {
    pub fn new(subcommand: &str, config: Value, seed: Option<u64>, elapsed: Duration, counts: Value) -> RunManifest {
        RunManifest {
            subcommand: subcommand.to_string(),
            config,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_ms: elapsed.as_millis() as u64,
            counts,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("manifest serializes")
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }

    /// `<output>.manifest.json`.
    pub fn sidecar_path(output: &Path) -> std::path::PathBuf {
        let mut name = output.file_name().unwrap_or_default().to_os_string();
        name.push(".manifest.json");
        output.with_file_name(name)
    }
}
