//! Adapter for externally produced predictions (pretrained baselines or
//! transformer outputs), imported from CSV and attached to the corpus.

use std::collections::{BTreeSet, HashMap, HashSet};
use std::path::Path;

use serde::Serialize;

use crate::corpus::CitationContext;
use crate::error::{Error, Result};
use crate::label::{SentimentLabel, SentimentProbs};

/// Which contexts an external prediction file covered.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageReport {
    pub model_tag: String,
    pub total_contexts: usize,
    pub covered: usize,
    pub missing_ids: Vec<String>,
}

impl CoverageReport {
    pub fn full(&self) -> bool {
        self.covered == self.total_contexts
    }
}

/// Reads `context_id,label[,p_positive,p_negative,p_neutral]` and attaches
/// predictions to matching contexts. Unknown ids, bad labels, and duplicate
/// rows are all collected and reported together.
pub fn import_external_predictions(
    contexts: &mut [CitationContext],
    path: impl AsRef<Path>,
    model_tag: &str,
) -> Result<CoverageReport> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::malformed(path, 0, format!("{other:?}")),
        })?;

    let mut rows: Vec<(String, SentimentLabel, Option<SentimentProbs>)> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut duplicates: BTreeSet<String> = BTreeSet::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::malformed(path, line, e.to_string()))?;
        if record.len() != 2 && record.len() != 5 {
            return Err(Error::malformed(
                path,
                line,
                format!("expected 2 or 5 fields, got {}", record.len()),
            ));
        }
        let id = record.get(0).unwrap_or("").trim().to_string();
        if id.is_empty() {
            return Err(Error::malformed(path, line, "empty context_id"));
        }
        let label = SentimentLabel::parse_strict(record.get(1).unwrap_or("").trim())
            .map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let probs = if record.len() == 5 {
            let parse = |idx: usize, name: &str| -> Result<f64> {
                record.get(idx).unwrap_or("").trim().parse().map_err(|e| {
                    Error::malformed(path, line, format!("field {name}: {e}"))
                })
            };
            Some(
                SentimentProbs::new(
                    parse(2, "p_positive")?,
                    parse(3, "p_negative")?,
                    parse(4, "p_neutral")?,
                )
                .map_err(|e| Error::malformed(path, line, e.to_string()))?,
            )
        } else {
            None
        };
        if !seen.insert(id.clone()) {
            duplicates.insert(id.clone());
        }
        rows.push((id, label, probs));
    }
    if !duplicates.is_empty() {
        return Err(Error::DuplicateIds(duplicates.into_iter().collect()));
    }

    let by_id: HashMap<String, usize> = contexts
        .iter()
        .enumerate()
        .map(|(i, ctx)| (ctx.context_id.clone(), i))
        .collect();
    let mut unknown: BTreeSet<String> = BTreeSet::new();
    let mut covered_ids: HashSet<usize> = HashSet::new();
    for (id, label, probs) in rows {
        match by_id.get(id.as_str()) {
            Some(&i) => {
                contexts[i].predicted_label = Some(label);
                contexts[i].predicted_probs = probs;
                covered_ids.insert(i);
            }
            None => {
                unknown.insert(id);
            }
        }
    }
    if !unknown.is_empty() {
        return Err(Error::UnknownIds(unknown.into_iter().collect()));
    }

    let missing_ids: Vec<String> = contexts
        .iter()
        .enumerate()
        .filter(|(i, _)| !covered_ids.contains(i))
        .map(|(_, ctx)| ctx.context_id.clone())
        .collect();
    Ok(CoverageReport {
        model_tag: model_tag.to_string(),
        total_contexts: contexts.len(),
        covered: covered_ids.len(),
        missing_ids,
    })
}
