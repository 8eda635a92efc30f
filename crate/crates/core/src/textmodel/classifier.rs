//! End-to-end text classifiers: preprocessing + vocabulary + linear head,
//! the flat 3-class model, the two-stage hierarchical model, and JSON
//! persistence for both.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::groundtruth::LabeledItem;
use crate::label::{ClassLabel, Polarity, Relatedness, SentimentLabel, SentimentProbs};

use super::linear::{LinearModel, TrainConfig};
use super::preprocess::preprocess;
use super::vocab::{fit_vocabulary, Vocabulary, DEFAULT_MIN_DF};

pub const MODEL_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ClassifierConfig {
    pub min_df: usize,
    pub train: TrainConfig,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            min_df: DEFAULT_MIN_DF,
            train: TrainConfig::default(),
        }
    }
}

/// A vocabulary plus a linear head over label set `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct LinearTextModel<L: ClassLabel> {
    format_version: u32,
    vocabulary: Vocabulary,
    model: LinearModel<L>,
    config: ClassifierConfig,
}

impl<L: ClassLabel> LinearTextModel<L> {
    pub fn train(items: &[LabeledItem<L>], config: ClassifierConfig) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Validation("cannot train on an empty dataset".into()));
        }
        let docs: Vec<Vec<String>> = items.iter().map(|i| preprocess(&i.text)).collect();
        let vocabulary = fit_vocabulary(&docs, config.min_df)?;
        let xs: Vec<_> = docs.iter().map(|d| vocabulary.vectorize(d)).collect();
        let ys: Vec<L> = items.iter().map(|i| i.label).collect();
        let model = LinearModel::train(config.train, &xs, &ys, vocabulary.len())?;
        Ok(LinearTextModel {
            format_version: MODEL_FORMAT_VERSION,
            vocabulary,
            model,
            config,
        })
    }

    /// Predicted label and probabilities in `L::CLASSES` order.
    pub fn predict(&self, text: &str) -> (L, Vec<f64>) {
        let tokens = preprocess(text);
        let x = self.vocabulary.vectorize(&tokens);
        self.model.predict(&x)
    }

    pub fn vocabulary(&self) -> &Vocabulary {
        &self.vocabulary
    }

    pub fn config(&self) -> &ClassifierConfig {
        &self.config
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("model serialization failed: {e}")))?;
        fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut loaded: Self =
            serde_json::from_str(&raw).map_err(|e| Error::malformed(path, 0, e.to_string()))?;
        if loaded.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported model format version {} in {}",
                loaded.format_version,
                path.display()
            )));
        }
        loaded.vocabulary.rebuild_index();
        loaded.model.check_classes()?;
        Ok(loaded)
    }
}

/// Flat 3-class sentiment classifier.
pub type SentimentClassifier = LinearTextModel<SentimentLabel>;

impl SentimentClassifier {
    /// Probabilities keyed by sentiment rather than by class index.
    pub fn predict_sentiment(&self, text: &str) -> (SentimentLabel, SentimentProbs) {
        let (label, probs) = self.predict(text);
        let get = |l: SentimentLabel| probs[l.index()];
        let probs = SentimentProbs {
            positive: get(SentimentLabel::Positive),
            negative: get(SentimentLabel::Negative),
            neutral: get(SentimentLabel::Neutral),
        };
        (label, probs)
    }
}

/// Two-stage classifier: relatedness gate, then polarity. Both stages share
/// the same preprocessing configuration.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HierarchicalClassifier {
    format_version: u32,
    pub stage1: LinearTextModel<Relatedness>,
    pub stage2: LinearTextModel<Polarity>,
}

impl HierarchicalClassifier {
    pub fn train(
        related: &[LabeledItem<Relatedness>],
        polarity: &[LabeledItem<Polarity>],
        config: ClassifierConfig,
    ) -> Result<Self> {
        Ok(HierarchicalClassifier {
            format_version: MODEL_FORMAT_VERSION,
            stage1: LinearTextModel::train(related, config)?,
            stage2: LinearTextModel::train(polarity, config)?,
        })
    }

    /// not_related gates to neutral; otherwise stage 2 decides the polarity.
    pub fn predict(&self, text: &str) -> SentimentLabel {
        match self.stage1.predict(text).0 {
            Relatedness::NotRelated => SentimentLabel::Neutral,
            Relatedness::Related => self.stage2.predict(text).0.sentiment(),
        }
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        if let Some(parent) = path.parent() {
            fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        let json = serde_json::to_string_pretty(self)
            .map_err(|e| Error::Internal(format!("model serialization failed: {e}")))?;
        fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut loaded: Self =
            serde_json::from_str(&raw).map_err(|e| Error::malformed(path, 0, e.to_string()))?;
        if loaded.format_version != MODEL_FORMAT_VERSION {
            return Err(Error::Validation(format!(
                "unsupported model format version {} in {}",
                loaded.format_version,
                path.display()
            )));
        }
        loaded.stage1.vocabulary.rebuild_index();
        loaded.stage2.vocabulary.rebuild_index();
        loaded.stage1.model.check_classes()?;
        loaded.stage2.model.check_classes()?;
        Ok(loaded)
    }
}
