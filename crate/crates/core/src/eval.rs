//! Confusion matrices, support-weighted precision/recall/F1, and the k-fold
//! cross-validation harness.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::groundtruth::{stratified_kfold, LabeledSet};
use crate::label::ClassLabel;

/// Classes × classes counts; rows are gold, columns predicted.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConfusionMatrix<L: ClassLabel> {
    counts: Vec<u64>,
    #[serde(skip)]
    _label: std::marker::PhantomData<L>,
}

impl<L: ClassLabel> ConfusionMatrix<L> {
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        let c = L::CLASSES.len();
        if counts.len() != c * c {
            return Err(Error::Validation(format!(
                "confusion matrix needs {} entries, got {}",
                c * c,
                counts.len()
            )));
        }
        Ok(ConfusionMatrix {
            counts,
            _label: std::marker::PhantomData,
        })
    }

    pub fn get(&self, gold: L, predicted: L) -> u64 {
        self.counts[gold.index() * L::CLASSES.len() + predicted.index()]
    }

    pub fn gold_support(&self, class: L) -> u64 {
        let c = L::CLASSES.len();
        self.counts[class.index() * c..(class.index() + 1) * c]
            .iter()
            .sum()
    }

    pub fn total(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn diagonal_sum(&self) -> u64 {
        let c = L::CLASSES.len();
        (0..c).map(|i| self.counts[i * c + i]).sum()
    }
}

/// Tallies gold/predicted label pairs.
pub fn confusion<L: ClassLabel>(gold: &[L], predicted: &[L]) -> Result<ConfusionMatrix<L>> {
    if gold.is_empty() || gold.len() != predicted.len() {
        return Err(Error::Validation(format!(
            "confusion needs equal non-empty label lists, got {} gold and {} predicted",
            gold.len(),
            predicted.len()
        )));
    }
    let c = L::CLASSES.len();
    let mut counts = vec![0u64; c * c];
    for (g, p) in gold.iter().zip(predicted) {
        counts[g.index() * c + p.index()] += 1;
    }
    ConfusionMatrix::from_counts(counts)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClassMetrics {
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub support: u64,
}

/// Metrics for one evaluation: per-class values plus support-weighted
/// averages. Zero-denominator cases score 0 and set `zero_division_hit`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport<L: ClassLabel> {
    pub per_class: Vec<ClassMetrics>,
    pub weighted_precision: f64,
    pub weighted_recall: f64,
    pub weighted_f1: f64,
    pub accuracy: f64,
    pub confusion: ConfusionMatrix<L>,
    pub zero_division_hit: bool,
}

/// Per-class precision/recall/F1 from a confusion matrix, weighted by gold
/// support. A class absent from gold carries weight zero.
pub fn weighted_prf<L: ClassLabel>(confusion: &ConfusionMatrix<L>) -> MetricsReport<L> {
    let classes = L::CLASSES;
    let mut per_class = Vec::with_capacity(classes.len());
    let mut zero_division_hit = false;
    let total: u64 = confusion.total();
    let mut weighted = [0.0f64; 3];
    for &class in classes {
        let tp = confusion.get(class, class);
        let predicted: u64 = classes.iter().map(|&g| confusion.get(g, class)).sum();
        let support = confusion.gold_support(class);
        let fp = predicted - tp;
        let fn_ = support - tp;

        let precision = if tp + fp > 0 {
            tp as f64 / (tp + fp) as f64
        } else {
            zero_division_hit = true;
            0.0
        };
        let recall = if tp + fn_ > 0 {
            tp as f64 / (tp + fn_) as f64
        } else {
            zero_division_hit = true;
            0.0
        };
        let f1 = if precision + recall > 0.0 {
            2.0 * precision * recall / (precision + recall)
        } else {
            0.0
        };
        let weight = support as f64 / total as f64;
        weighted[0] += weight * precision;
        weighted[1] += weight * recall;
        weighted[2] += weight * f1;
        per_class.push(ClassMetrics {
            precision,
            recall,
            f1,
            support,
        });
    }
    MetricsReport {
        per_class,
        weighted_precision: weighted[0],
        weighted_recall: weighted[1],
        weighted_f1: weighted[2],
        accuracy: confusion.diagonal_sum() as f64 / total as f64,
        confusion: confusion.clone(),
        zero_division_hit,
    }
}

/// Anything that maps a text to a label.
pub trait Classify<L: ClassLabel> {
    fn classify(&self, text: &str) -> L;
}

impl<L: ClassLabel, F: Fn(&str) -> L> Classify<L> for F {
    fn classify(&self, text: &str) -> L {
        self(text)
    }
}

/// Cross-validation result: per-fold reports plus the unweighted mean of the
/// fold-level weighted metrics.
#[derive(Debug, Clone, Serialize)]
pub struct CvReport<L: ClassLabel> {
    pub folds: Vec<MetricsReport<L>>,
    pub fold_test_sizes: Vec<usize>,
    pub mean_weighted_precision: f64,
    pub mean_weighted_recall: f64,
    pub mean_weighted_f1: f64,
    pub mean_accuracy: f64,
    pub data_size: usize,
    pub k: usize,
}

/// Table-shaped summary (`map`/`mar`/`maf1`/`data`) for the report JSON.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct CvSummary {
    pub model: String,
    pub data: usize,
    pub k: usize,
    pub map: f64,
    pub mar: f64,
    pub maf1: f64,
    pub folds: Vec<CvFoldSummary>,
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct CvFoldSummary {
    pub data: usize,
    pub map: f64,
    pub mar: f64,
    pub maf1: f64,
}

impl<L: ClassLabel> CvReport<L> {
    pub fn summary(&self, model: &str) -> CvSummary {
        CvSummary {
            model: model.to_string(),
            data: self.data_size,
            k: self.k,
            map: self.mean_weighted_precision,
            mar: self.mean_weighted_recall,
            maf1: self.mean_weighted_f1,
            folds: self
                .folds
                .iter()
                .zip(&self.fold_test_sizes)
                .map(|(f, &size)| CvFoldSummary {
                    data: size,
                    map: f.weighted_precision,
                    mar: f.weighted_recall,
                    maf1: f.weighted_f1,
                })
                .collect(),
        }
    }
}

/// Runs stratified k-fold cross-validation: trains on each fold's train
/// split via `train`, evaluates on its test split, and averages the
/// fold-level weighted metrics arithmetically.
pub fn cross_validate<L, M, F>(
    set: &LabeledSet<L>,
    k: usize,
    seed: u64,
    train: F,
) -> Result<CvReport<L>>
where
    L: ClassLabel,
    M: Classify<L>,
    F: Fn(&LabeledSet<L>) -> Result<M>,
{
    let folds = stratified_kfold(set, k, seed)?;
    let mut reports = Vec::with_capacity(k);
    let mut fold_test_sizes = Vec::with_capacity(k);
    for fold in &folds {
        let train_set = set.subset(&fold.train);
        let model = train(&train_set)?;
        let gold: Vec<L> = fold.test.iter().map(|&i| set.items()[i].label).collect();
        let predicted: Vec<L> = fold
            .test
            .iter()
            .map(|&i| model.classify(&set.items()[i].text))
            .collect();
        reports.push(weighted_prf(&confusion(&gold, &predicted)?));
        fold_test_sizes.push(fold.test.len());
    }
    let n = reports.len() as f64;
    let mean = |f: fn(&MetricsReport<L>) -> f64| reports.iter().map(f).sum::<f64>() / n;
    Ok(CvReport {
        mean_weighted_precision: mean(|r| r.weighted_precision),
        mean_weighted_recall: mean(|r| r.weighted_recall),
        mean_weighted_f1: mean(|r| r.weighted_f1),
        mean_accuracy: mean(|r| r.accuracy),
        folds: reports,
        fold_test_sizes,
        data_size: set.len(),
        k,
    })
}

/// Fixed-width text rendering of one or more CV summaries.
pub fn render_cv_table(summaries: &[CvSummary]) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<28} {:>6} {:>7} {:>7} {:>7}\n",
        "Model", "Data", "mAP", "mAR", "mAF1"
    ));
    out.push_str(&format!("{:-<60}\n", ""));
    for s in summaries {
        out.push_str(&format!(
            "{:<28} {:>6} {:>7.2} {:>7.2} {:>7.2}\n",
            s.model, s.data, s.map, s.mar, s.maf1
        ));
    }
    out
}
