//! Subcommand implementations. Each command reads its inputs from artifact
//! paths in the config, writes its outputs plus a provenance manifest, and
//! prints a short summary.

pub mod aggregate;
pub mod annotate;
pub mod build_gt;
pub mod eval_cmd;
pub mod harvest;
pub mod predict;
pub mod report;
pub mod score;
pub mod train;

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use repcite_core::groundtruth::LabeledItem;
use repcite_core::label::{Polarity, Relatedness, SentimentLabel};

use crate::config::PipelineConfig;
use crate::manifest::ManifestBuilder;

/// The datasets written by `build-gt` and consumed by `train` and `eval`.
#[derive(Debug, Serialize, Deserialize)]
pub struct GroundTruthFile {
    pub seed: u64,
    pub full_class_counts: BTreeMap<String, usize>,
    pub flat: Vec<LabeledItem<SentimentLabel>>,
    pub related: Vec<LabeledItem<Relatedness>>,
    pub polarity: Vec<LabeledItem<Polarity>>,
}

pub fn ensure_out_dir(config: &PipelineConfig) -> Result<()> {
    fs::create_dir_all(&config.paths.out_dir).with_context(|| {
        format!("cannot create out dir {}", config.paths.out_dir.display())
    })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    let json = serde_json::to_string_pretty(value)?;
    fs::write(path, json + "\n").with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    let raw =
        fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&raw).with_context(|| format!("cannot parse {}", path.display()))
}

/// Starts a manifest for a subcommand run.
pub fn manifest(
    subcommand: &str,
    config: &PipelineConfig,
    config_path: &Path,
) -> Result<ManifestBuilder> {
    ensure_out_dir(config)?;
    ManifestBuilder::new(subcommand, config_path, config.seed)
}
