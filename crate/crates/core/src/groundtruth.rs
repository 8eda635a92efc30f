//! Labeled datasets: importing human labels, balanced and binary subsets,
//! and stratified folds. Every sampling operation is a pure function of
//! (input, seed).

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::path::Path;

use crate::corpus::CitationContext;
use crate::error::{Error, Result};
use crate::label::{ClassLabel, Polarity, Relatedness, SentimentLabel};
use crate::rng::{derive_seed, SplitMix64};

/// One labeled citation context.
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct LabeledItem<L> {
    pub context_id: String,
    pub text: String,
    pub label: L,
}

/// An ordered set of labeled items with no duplicate ids. `seed` records the
/// seed of the sampling step that produced the set (0 for direct imports).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledSet<L: ClassLabel> {
    items: Vec<LabeledItem<L>>,
    seed: u64,
}

impl<L: ClassLabel> LabeledSet<L> {
    pub fn new(items: Vec<LabeledItem<L>>, seed: u64) -> Result<Self> {
        let mut seen = HashSet::new();
        let mut duplicates = BTreeSet::new();
        for item in &items {
            if !seen.insert(item.context_id.as_str()) {
                duplicates.insert(item.context_id.clone());
            }
        }
        if !duplicates.is_empty() {
            return Err(Error::DuplicateIds(duplicates.into_iter().collect()));
        }
        Ok(LabeledSet { items, seed })
    }

    pub fn items(&self) -> &[LabeledItem<L>] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn class_counts(&self) -> BTreeMap<L, usize> {
        let mut counts = BTreeMap::new();
        for item in &self.items {
            *counts.entry(item.label).or_insert(0) += 1;
        }
        counts
    }

    pub fn count_of(&self, label: L) -> usize {
        self.items.iter().filter(|i| i.label == label).count()
    }

    /// Sub-set by item indices, preserving order.
    pub fn subset(&self, indices: &[usize]) -> LabeledSet<L> {
        LabeledSet {
            items: indices.iter().map(|&i| self.items[i].clone()).collect(),
            seed: self.seed,
        }
    }

    fn indices_of(&self, label: L) -> Vec<usize> {
        self.items
            .iter()
            .enumerate()
            .filter(|(_, item)| item.label == label)
            .map(|(i, _)| i)
            .collect()
    }
}

/// Raw label rows from a labels CSV (`context_id,label`).
pub fn read_labels_csv(path: impl AsRef<Path>) -> Result<Vec<(String, SentimentLabel)>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::malformed(path, 0, format!("{other:?}")),
        })?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let id = record.get(0).unwrap_or("").trim();
        let raw_label = record.get(1).unwrap_or("").trim();
        if id.is_empty() {
            return Err(Error::malformed(path, line, "empty context_id"));
        }
        let label = SentimentLabel::parse_strict(raw_label)
            .map_err(|e| Error::malformed(path, line, e.to_string()))?;
        rows.push((id.to_string(), label));
    }
    Ok(rows)
}

pub fn write_labels_csv(rows: &[(String, SentimentLabel)], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Internal(format!("csv error: {other:?}")),
    })?;
    let write = |writer: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
        writer.write_record(["context_id", "label"])?;
        for (id, label) in rows {
            writer.write_record([id.as_str(), label.as_str()])?;
        }
        writer.flush()?;
        Ok(())
    };
    write(&mut writer).map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))
}

/// Joins a labels CSV against the corpus. Every labeled id must exist in the
/// corpus; ids labeled twice are rejected.
pub fn import_labels(
    contexts: &[CitationContext],
    labels_path: impl AsRef<Path>,
) -> Result<LabeledSet<SentimentLabel>> {
    let rows = read_labels_csv(labels_path)?;
    let by_id: HashMap<&str, &CitationContext> = contexts
        .iter()
        .map(|ctx| (ctx.context_id.as_str(), ctx))
        .collect();

    let mut unknown = BTreeSet::new();
    let mut seen = HashSet::new();
    let mut duplicates = BTreeSet::new();
    let mut items = Vec::with_capacity(rows.len());
    for (id, label) in &rows {
        match by_id.get(id.as_str()) {
            Some(ctx) => {
                if !seen.insert(id.as_str()) {
                    duplicates.insert(id.clone());
                    continue;
                }
                items.push(LabeledItem {
                    context_id: id.clone(),
                    text: ctx.text.clone(),
                    label: *label,
                });
            }
            None => {
                unknown.insert(id.clone());
            }
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownIds(unknown.into_iter().collect()));
    }
    if !duplicates.is_empty() {
        return Err(Error::DuplicateIds(duplicates.into_iter().collect()));
    }
    LabeledSet::new(items, 0)
}

/// Export for the annotation round-trip: `context_id,text,label` with a
/// blank label for unlabeled contexts.
pub fn write_annotation_export(
    contexts: &[CitationContext],
    labels: &HashMap<String, SentimentLabel>,
    path: impl AsRef<Path>,
) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Internal(format!("csv error: {other:?}")),
    })?;
    let write = |writer: &mut csv::Writer<std::fs::File>| -> csv::Result<()> {
        writer.write_record(["context_id", "text", "label"])?;
        for ctx in contexts {
            let label = labels
                .get(&ctx.context_id)
                .map(|l| l.as_str())
                .unwrap_or("");
            writer.write_record([ctx.context_id.as_str(), ctx.text.as_str(), label])?;
        }
        writer.flush()?;
        Ok(())
    };
    write(&mut writer).map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))
}

/// Down-samples each class, without replacement, to at most `cap` items.
/// Classes at or below the cap keep their full membership. Output preserves
/// input order; membership depends only on (input, seed).
pub fn downsample_to_cap<L: ClassLabel>(
    set: &LabeledSet<L>,
    cap: usize,
    seed: u64,
) -> Result<LabeledSet<L>> {
    let mut keep: Vec<usize> = Vec::new();
    for &class in L::CLASSES {
        let class_indices = set.indices_of(class);
        if class_indices.len() <= cap {
            keep.extend(class_indices);
        } else {
            let mut rng = SplitMix64::new(derive_seed(seed, &format!("downsample:{class}")));
            let chosen = rng.sample_indices(class_indices.len(), cap);
            keep.extend(chosen.into_iter().map(|i| class_indices[i]));
        }
    }
    keep.sort_unstable();
    let mut out = set.subset(&keep);
    out.seed = seed;
    Ok(out)
}

/// Balances all classes down to the minority class count. Requires every
/// class to be non-empty.
pub fn balance_downsample<L: ClassLabel>(set: &LabeledSet<L>, seed: u64) -> Result<LabeledSet<L>> {
    let mut minority = usize::MAX;
    for &class in L::CLASSES {
        let count = set.count_of(class);
        if count == 0 {
            return Err(Error::EmptyClass(class.to_string()));
        }
        minority = minority.min(count);
    }
    downsample_to_cap(set, minority, seed)
}

/// Relabels positive and negative as `related`, and down-samples neutrals to
/// the related count as `not_related`. A neutral pool smaller than the
/// related set is taken whole with a warning.
pub fn build_related_dataset(
    set: &LabeledSet<SentimentLabel>,
    seed: u64,
) -> Result<LabeledSet<Relatedness>> {
    let related: Vec<&LabeledItem<SentimentLabel>> =
        set.items().iter().filter(|i| i.label.related()).collect();
    if related.is_empty() {
        return Err(Error::EmptyClass(Relatedness::Related.to_string()));
    }
    let neutral_indices: Vec<usize> = set.indices_of(SentimentLabel::Neutral);
    let take = related.len().min(neutral_indices.len());
    if take < related.len() {
        log::warn!(
            "neutral pool ({}) is smaller than the related set ({}); taking all neutrals",
            neutral_indices.len(),
            related.len()
        );
    }
    let mut rng = SplitMix64::new(derive_seed(seed, "related:not_related"));
    let chosen = rng.sample_indices(neutral_indices.len(), take);

    let mut items: Vec<LabeledItem<Relatedness>> = related
        .iter()
        .map(|i| LabeledItem {
            context_id: i.context_id.clone(),
            text: i.text.clone(),
            label: Relatedness::Related,
        })
        .collect();
    items.extend(chosen.into_iter().map(|i| {
        let item = &set.items()[neutral_indices[i]];
        LabeledItem {
            context_id: item.context_id.clone(),
            text: item.text.clone(),
            label: Relatedness::NotRelated,
        }
    }));
    LabeledSet::new(items, seed)
}

/// Keeps only polar items and down-samples the majority polarity to the
/// minority count.
pub fn build_polarity_dataset(
    set: &LabeledSet<SentimentLabel>,
    seed: u64,
) -> Result<LabeledSet<Polarity>> {
    let polar: Vec<LabeledItem<Polarity>> = set
        .items()
        .iter()
        .filter_map(|i| {
            i.label.polarity().map(|p| LabeledItem {
                context_id: i.context_id.clone(),
                text: i.text.clone(),
                label: p,
            })
        })
        .collect();
    let polar_set = LabeledSet::new(polar, seed)?;
    balance_downsample(&polar_set, seed)
}

/// One cross-validation fold: item indices into the originating set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fold {
    pub train: Vec<usize>,
    pub test: Vec<usize>,
}

/// Stratified k-fold split: within each class items are shuffled and dealt
/// round-robin into test folds. The dealing cursor carries over between
/// classes so per-class remainders land in different folds, keeping fold
/// sizes within one item of each other.
pub fn stratified_kfold<L: ClassLabel>(
    set: &LabeledSet<L>,
    k: usize,
    seed: u64,
) -> Result<Vec<Fold>> {
    if k < 2 {
        return Err(Error::Validation(format!("k must be >= 2, got {k}")));
    }
    for &class in L::CLASSES {
        let count = set.count_of(class);
        if count > 0 && count < k {
            return Err(Error::ClassSmallerThanK {
                class: class.to_string(),
                count,
                k,
            });
        }
    }
    if set.len() < k {
        return Err(Error::Validation(format!(
            "cannot split {} items into {k} folds",
            set.len()
        )));
    }

    let mut test_folds: Vec<Vec<usize>> = vec![Vec::new(); k];
    let mut cursor = 0usize;
    for &class in L::CLASSES {
        let mut class_indices = set.indices_of(class);
        let mut rng = SplitMix64::new(derive_seed(seed, &format!("fold:{class}")));
        rng.shuffle(&mut class_indices);
        for idx in class_indices {
            test_folds[cursor].push(idx);
            cursor = (cursor + 1) % k;
        }
    }

    let mut folds = Vec::with_capacity(k);
    for test in test_folds.iter_mut() {
        test.sort_unstable();
        let test_set: HashSet<usize> = test.iter().copied().collect();
        let train: Vec<usize> = (0..set.len()).filter(|i| !test_set.contains(i)).collect();
        folds.push(Fold {
            train,
            test: std::mem::take(test),
        });
    }
    Ok(folds)
}
