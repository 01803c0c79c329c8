//! Run manifests: every file-producing run records its resolved
//! configuration, seed, input digests, and timestamps, and can be
//! replayed bit-exactly via --config.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: u64,
    pub config: serde_json::Value,
    pub input_digests: BTreeMap<String, String>,
    pub outputs: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

pub struct ManifestBuilder {
    command: String,
    started_at: chrono::DateTime<chrono::Utc>,
    inputs: BTreeMap<String, String>,
    outputs: Vec<String>,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> ManifestBuilder {
        ManifestBuilder {
            command: command.to_string(),
            started_at: chrono::Utc::now(),
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> Result<()> {
        let bytes = std::fs::read(path)
            .with_context(|| format!("reading input {}", path.display()))?;
        let digest = Sha256::digest(&bytes);
        self.inputs.insert(path.display().to_string(), format!("sha256:{digest:x}"));
        Ok(())
    }

    pub fn record_output(&mut self, path: &Path) {
        self.outputs.push(path.display().to_string());
    }

    /// Writes the manifest next to the primary output (or to the
    /// explicit override path).
    pub fn write(
        self,
        seed: u64,
        config: serde_json::Value,
        explicit_path: Option<&Path>,
    ) -> Result<Option<PathBuf>> {
        let path = match explicit_path {
            Some(p) => p.to_path_buf(),
            None => match self.outputs.first() {
                Some(primary) => PathBuf::from(format!("{primary}.manifest.json")),
                None => return Ok(None),
            },
        };
        let manifest = RunManifest {
            command: self.command,
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed,
            config,
            input_digests: self.inputs,
            outputs: self.outputs,
            started_at: self.started_at.to_rfc3339(),
            finished_at: chrono::Utc::now().to_rfc3339(),
        };
        let text = serde_json::to_string_pretty(&manifest)?;
        std::fs::write(&path, text + "\n")
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(Some(path))
    }
}

/// Loads a config file: either a bare config object or a manifest
/// produced by a previous run (its `config` field is used).
pub fn load_config_value(path: &Path) -> Result<serde_json::Value> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config {}", path.display()))?;
    if let Some(inner) = value.get("config") {
        if value.get("command").is_some() {
            return Ok(inner.clone());
        }
    }
    Ok(value)
}
