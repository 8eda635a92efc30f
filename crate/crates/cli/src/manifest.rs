//! Per-run provenance manifests: config digest, seed, and input/output file
//! digests. Deterministic by construction (no timestamps), so an unchanged
//! re-run writes identical bytes.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub subcommand: String,
    pub config_sha256: String,
    pub seed: u64,
    pub inputs: BTreeMap<String, String>,
    pub outputs: BTreeMap<String, String>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

pub fn file_digest(path: &Path) -> Result<String> {
    let bytes =
        fs::read(path).with_context(|| format!("cannot digest {}", path.display()))?;
    Ok(sha256_hex(&bytes))
}

pub struct ManifestBuilder {
    subcommand: String,
    config_sha256: String,
    seed: u64,
    inputs: BTreeMap<String, String>,
    outputs: Vec<PathBuf>,
}

impl ManifestBuilder {
    pub fn new(subcommand: &str, config_path: &Path, seed: u64) -> Result<Self> {
        Ok(ManifestBuilder {
            subcommand: subcommand.to_string(),
            config_sha256: file_digest(config_path)?,
            seed,
            inputs: BTreeMap::new(),
            outputs: Vec::new(),
        })
    }

    pub fn input(&mut self, path: &Path) -> Result<()> {
        self.inputs
            .insert(path.display().to_string(), file_digest(path)?);
        Ok(())
    }

    /// Registers an output whose digest is taken at write time.
    pub fn output(&mut self, path: &Path) {
        self.outputs.push(path.to_path_buf());
    }

    pub fn write(self, manifest_path: &Path) -> Result<()> {
        let mut outputs = BTreeMap::new();
        for path in &self.outputs {
            if path.exists() {
                outputs.insert(path.display().to_string(), file_digest(path)?);
            }
        }
        let manifest = RunManifest {
            subcommand: self.subcommand,
            config_sha256: self.config_sha256,
            seed: self.seed,
            inputs: self.inputs,
            outputs,
        };
        if let Some(parent) = manifest_path.parent() {
            fs::create_dir_all(parent)
                .with_context(|| format!("cannot create {}", parent.display()))?;
        }
        let json = serde_json::to_string_pretty(&manifest)?;
        fs::write(manifest_path, json + "\n")
            .with_context(|| format!("cannot write {}", manifest_path.display()))?;
        Ok(())
    }
}
