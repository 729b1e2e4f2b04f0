//! Run manifests: every output directory gets a record of the command,
//! resolved parameters, input digests and seed that produced it.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub parameters: BTreeMap<String, serde_json::Value>,
    pub inputs: Vec<InputDigest>,
    pub seed: Option<u64>,
    pub duration_seconds: f64,
}

/// Collects manifest data over the lifetime of one command.
pub struct ManifestBuilder {
    command: String,
    parameters: BTreeMap<String, serde_json::Value>,
    inputs: Vec<InputDigest>,
    seed: Option<u64>,
    started: Instant,
}

impl ManifestBuilder {
    pub fn new(command: &str) -> Self {
        Self {
            command: command.to_string(),
            parameters: BTreeMap::new(),
            inputs: Vec::new(),
            seed: None,
            started: Instant::now(),
        }
    }

    pub fn param(&mut self, key: &str, value: impl Serialize) -> &mut Self {
        self.parameters.insert(
            key.to_string(),
            serde_json::to_value(value).expect("parameter serialization"),
        );
        self
    }

    pub fn seed(&mut self, seed: u64) -> &mut Self {
        self.seed = Some(seed);
        self
    }

    /// Hash an input file and record it.
    pub fn input(&mut self, path: &Path) -> std::io::Result<&mut Self> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let sha256 = digest.iter().fold(String::new(), |mut s, b| {
            use std::fmt::Write;
            let _ = write!(s, "{b:02x}");
            s
        });
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256,
        });
        Ok(self)
    }

    /// Write `manifest.json` into `dir` atomically (temp file + rename).
    pub fn write(self, dir: &Path) -> std::io::Result<PathBuf> {
        let manifest = RunManifest {
            command: self.command,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            parameters: self.parameters,
            inputs: self.inputs,
            seed: self.seed,
            duration_seconds: self.started.elapsed().as_secs_f64(),
        };
        let path = dir.join("manifest.json");
        let tmp = dir.join("manifest.json.tmp");
        let json = serde_json::to_string_pretty(&manifest).expect("manifest serialization");
        std::fs::write(&tmp, json)?;
        std::fs::rename(&tmp, &path)?;
        Ok(path)
    }
}
