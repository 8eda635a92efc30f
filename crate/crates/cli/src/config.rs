//! Pipeline configuration: one TOML file shared by every subcommand.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};

use repcite_core::textmodel::{ClassifierConfig, TrainConfig};
use repcite_harvest::HarvestConfig;

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PipelineConfig {
    pub version: u32,
    /// Global seed; per-stage streams are derived from it by name.
    #[serde(default = "default_seed")]
    pub seed: u64,
    pub paths: Paths,
    #[serde(default)]
    pub harvest: HarvestSection,
    #[serde(default)]
    pub training: TrainingSection,
    #[serde(default)]
    pub analysis: AnalysisSection,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub repstudies: PathBuf,
    pub labels: PathBuf,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HarvestSection {
    pub base_url: String,
    pub api_key: Option<String>,
    pub page_limit: usize,
    pub max_retries: u32,
    pub min_request_interval_ms: u64,
    /// Serve exclusively from the cache; any cache miss fails that paper.
    pub offline: bool,
}

impl Default for HarvestSection {
    fn default() -> Self {
        HarvestSection {
            base_url: repcite_harvest::DEFAULT_BASE_URL.to_string(),
            api_key: None,
            page_limit: 100,
            max_retries: 3,
            min_request_interval_ms: 1000,
            offline: false,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TrainingSection {
    pub learning_rate: f64,
    pub l2: f64,
    pub max_epochs: usize,
    pub tolerance: f64,
    pub min_df: usize,
    /// Per-class cap for the flat training set; 0 balances to the minority
    /// class count.
    pub per_class_cap: usize,
    pub cv_folds: usize,
}

impl Default for TrainingSection {
    fn default() -> Self {
        let train = TrainConfig::default();
        TrainingSection {
            learning_rate: train.learning_rate,
            l2: train.l2,
            max_epochs: train.max_epochs,
            tolerance: train.tolerance,
            min_df: repcite_core::textmodel::DEFAULT_MIN_DF,
            per_class_cap: 0,
            cv_folds: 5,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub min_neg: u64,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        AnalysisSection {
            min_neg: repcite_core::correlate::DEFAULT_MIN_NEG,
        }
    }
}

fn default_seed() -> u64 {
    42
}

impl PipelineConfig {
    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        let config: PipelineConfig = toml::from_str(&raw)
            .with_context(|| format!("cannot parse config {}", path.display()))?;
        if config.version != CONFIG_VERSION {
            bail!(
                "unsupported config version {} in {} (expected {CONFIG_VERSION})",
                config.version,
                path.display()
            );
        }
        if !(1..=1000).contains(&config.harvest.page_limit) {
            bail!("harvest.page_limit must be in 1..=1000");
        }
        if config.training.cv_folds < 2 {
            bail!("training.cv_folds must be >= 2");
        }
        Ok(config)
    }

    pub fn harvest_config(&self) -> HarvestConfig {
        HarvestConfig {
            base_url: self.harvest.base_url.clone(),
            api_key: self.harvest.api_key.clone(),
            page_limit: self.harvest.page_limit,
            max_retries: self.harvest.max_retries,
            min_request_interval_ms: self.harvest.min_request_interval_ms,
            cache_dir: self.paths.cache_dir.clone(),
        }
    }

    pub fn classifier_config(&self) -> ClassifierConfig {
        ClassifierConfig {
            min_df: self.training.min_df,
            train: TrainConfig {
                learning_rate: self.training.learning_rate,
                l2: self.training.l2,
                max_epochs: self.training.max_epochs,
                tolerance: self.training.tolerance,
            },
        }
    }

    // Artifact locations under out_dir.

    pub fn papers_path(&self) -> PathBuf {
        self.paths.out_dir.join("papers.json")
    }

    pub fn corpus_path(&self) -> PathBuf {
        self.paths.out_dir.join("corpus.jsonl")
    }

    pub fn harvest_report_path(&self) -> PathBuf {
        self.paths.out_dir.join("harvest_report.json")
    }

    pub fn scores_path(&self) -> PathBuf {
        self.paths.out_dir.join("scores.csv")
    }

    pub fn groundtruth_path(&self) -> PathBuf {
        self.paths.out_dir.join("groundtruth.json")
    }

    pub fn model_path(&self, tag: &str) -> PathBuf {
        self.paths.out_dir.join("models").join(format!("{tag}.json"))
    }

    pub fn cv_report_path(&self) -> PathBuf {
        self.paths.out_dir.join("cv_report.json")
    }

    pub fn predictions_path(&self, tag: &str) -> PathBuf {
        self.paths.out_dir.join(format!("predicted_{tag}.jsonl"))
    }

    pub fn prediction_summary_path(&self, tag: &str) -> PathBuf {
        self.paths
            .out_dir
            .join(format!("prediction_summary_{tag}.json"))
    }

    pub fn analysis_path(&self) -> PathBuf {
        self.paths.out_dir.join("analysis.json")
    }

    pub fn report_path(&self) -> PathBuf {
        self.paths.out_dir.join("report.txt")
    }

    pub fn manifest_path(&self, subcommand: &str) -> PathBuf {
        self.paths
            .out_dir
            .join("manifests")
            .join(format!("{subcommand}.json"))
    }
}

/// A required input produced by an earlier subcommand is missing.
#[derive(Debug, thiserror::Error)]
#[error("missing {}: run `repcite {producer}` first", path.display())]
pub struct MissingArtifact {
    pub path: PathBuf,
    pub producer: String,
}

pub fn require_artifact(path: &Path, producer: &str) -> Result<()> {
    if !path.exists() {
        return Err(MissingArtifact {
            path: path.to_path_buf(),
            producer: producer.to_string(),
        }
        .into());
    }
    Ok(())
}
