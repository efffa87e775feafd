use std::path::Path;
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

/// Record written next to every output set, sufficient to re-run it.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub master_seed: u64,
    pub seeds: Vec<u64>,
    pub config: serde_json::Value,
    /// SHA-256 of the compact JSON form of `config`.
    pub config_hash: String,
    pub wall_clock_seconds: f64,
}

impl RunManifest {
    pub fn new(command: Vec<String>, master_seed: u64, seeds: Vec<u64>, config: serde_json::Value, started: Instant) -> Self {
        let bytes = serde_json::to_vec(&config).expect("config serializes");
        let hash = Sha256::digest(&bytes).iter().map(|b| format!("{b:02x}")).collect();
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command,
            master_seed,
            seeds,
            config,
            config_hash: hash,
            wall_clock_seconds: started.elapsed().as_secs_f64(),
        }
    }

    pub fn write(&self, dir: &Path) -> std::io::Result<()> {
        let text = serde_json::to_string_pretty(self).expect("manifest serializes");
        std::fs::write(dir.join("manifest.json"), text + "\n")
    }
}
