use std::collections::BTreeMap;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Provenance of one invocation, embedded in every JSON report.
#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    /// SHA-256 of each input file, keyed by its role.
    pub input_digests: BTreeMap<String, String>,
    pub seeds: BTreeMap<String, u64>,
    pub parameters: BTreeMap<String, String>,
    pub prime: u64,
    pub workers: usize,
    /// Absent when timing is suppressed for reproducible output.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_seconds: Option<f64>,
}

impl RunManifest {
    pub fn new(command: &str, workers: usize) -> Self {
        RunManifest {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: BTreeMap::new(),
            seeds: BTreeMap::new(),
            parameters: BTreeMap::new(),
            prime: gmech::field::PRIME,
            workers,
            wall_time_seconds: None,
        }
    }

    pub fn param(&mut self, key: &str, value: impl ToString) {
        self.parameters.insert(key.to_string(), value.to_string());
    }

    pub fn seed(&mut self, key: &str, value: u64) {
        self.seeds.insert(key.to_string(), value);
    }
}

/// Reads an input file and records its digest under `role`.
pub fn read_input(manifest: &mut RunManifest, role: &str, path: &Path) -> Result<Vec<u8>> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    manifest.input_digests.insert(role.to_string(), hex::encode(Sha256::digest(&bytes)));
    Ok(bytes)
}
