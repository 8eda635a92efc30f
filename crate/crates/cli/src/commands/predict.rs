use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;
use serde::Serialize;

use repcite_core::corpus::{read_contexts, write_contexts, CitationContext};
use repcite_core::label::SentimentLabel;
use repcite_core::textmodel::{
    import_external_predictions, HierarchicalClassifier, SentimentClassifier,
};

use crate::config::{require_artifact, PipelineConfig};
use crate::ModelChoice;

use super::{manifest, write_json};

#[derive(Debug, Serialize)]
struct PredictionSummary {
    model: String,
    contexts: usize,
    counts: BTreeMap<String, usize>,
    percentages: BTreeMap<String, f64>,
}

impl PredictionSummary {
    fn build(model: &str, contexts: &[CitationContext]) -> Self {
        let mut counts: BTreeMap<String, usize> = BTreeMap::new();
        for ctx in contexts {
            if let Some(label) = ctx.predicted_label {
                *counts.entry(label.to_string()).or_insert(0) += 1;
            }
        }
        let total = contexts.len() as f64;
        let percentages = counts
            .iter()
            .map(|(k, v)| (k.clone(), 100.0 * *v as f64 / total))
            .collect();
        PredictionSummary {
            model: model.to_string(),
            contexts: contexts.len(),
            counts,
            percentages,
        }
    }
}

pub fn run(
    config: &PipelineConfig,
    config_path: &Path,
    model: ModelChoice,
    external: Option<(&Path, &str)>,
) -> Result<()> {
    require_artifact(&config.corpus_path(), "harvest")?;

    if let Some((file, tag)) = external {
        return run_external(config, config_path, file, tag);
    }

    let base_contexts = read_contexts(config.corpus_path())?;
    let tags: &[&str] = match model {
        ModelChoice::Flat => &["flat"],
        ModelChoice::Hier => &["hier"],
        ModelChoice::Both => &["flat", "hier"],
    };
    for &tag in tags {
        require_artifact(&config.model_path(tag), "train")?;
        let mut run_manifest = manifest(&format!("predict-{tag}"), config, config_path)?;
        run_manifest.input(&config.corpus_path())?;
        run_manifest.input(&config.model_path(tag))?;

        let mut contexts = base_contexts.clone();
        match tag {
            "flat" => {
                let clf = SentimentClassifier::load(config.model_path(tag))?;
                for ctx in contexts.iter_mut() {
                    let (label, probs) = clf.predict_sentiment(&ctx.text);
                    ctx.predicted_label = Some(label);
                    ctx.predicted_probs = Some(probs);
                }
            }
            "hier" => {
                let clf = HierarchicalClassifier::load(config.model_path(tag))?;
                for ctx in contexts.iter_mut() {
                    ctx.predicted_label = Some(clf.predict(&ctx.text));
                    ctx.predicted_probs = None;
                }
            }
            other => unreachable!("unknown model tag {other}"),
        }

        let out_path = config.predictions_path(tag);
        write_contexts(&contexts, &out_path)?;
        let summary = PredictionSummary::build(tag, &contexts);
        write_json(&summary, &config.prediction_summary_path(tag))?;
        print_summary(&summary);

        run_manifest.output(&out_path);
        run_manifest.output(&config.prediction_summary_path(tag));
        run_manifest.write(&config.manifest_path(&format!("predict-{tag}")))?;
    }
    Ok(())
}

/// Attaches predictions produced by an external model (prediction CSV) to
/// the corpus under the given tag.
fn run_external(
    config: &PipelineConfig,
    config_path: &Path,
    file: &Path,
    tag: &str,
) -> Result<()> {
    let mut run_manifest = manifest(&format!("predict-{tag}"), config, config_path)?;
    run_manifest.input(&config.corpus_path())?;
    run_manifest.input(file)?;

    let mut contexts = read_contexts(config.corpus_path())?;
    let coverage = import_external_predictions(&mut contexts, file, tag)?;
    println!(
        "imported {} predictions for tag {tag} ({} of {} contexts covered)",
        coverage.covered, coverage.covered, coverage.total_contexts
    );
    if !coverage.full() {
        log::warn!(
            "{} contexts have no {tag} prediction (first missing: {})",
            coverage.missing_ids.len(),
            coverage.missing_ids.first().map(String::as_str).unwrap_or("-")
        );
    }

    let out_path = config.predictions_path(tag);
    let covered: Vec<CitationContext> = contexts
        .into_iter()
        .filter(|c| c.predicted_label.is_some())
        .collect();
    write_contexts(&covered, &out_path)?;
    let summary = PredictionSummary::build(tag, &covered);
    write_json(&summary, &config.prediction_summary_path(tag))?;
    print_summary(&summary);

    run_manifest.output(&out_path);
    run_manifest.output(&config.prediction_summary_path(tag));
    run_manifest.write(&config.manifest_path(&format!("predict-{tag}")))?;
    Ok(())
}

fn print_summary(summary: &PredictionSummary) {
    use repcite_core::label::ClassLabel;
    let parts: Vec<String> = SentimentLabel::CLASSES
        .iter()
        .rev() // positive first, matching the reported orderings
        .map(|label| {
            let name = label.to_string();
            let count = summary.counts.get(&name).copied().unwrap_or(0);
            let pct = summary.percentages.get(&name).copied().unwrap_or(0.0);
            format!("{count} {name} ({pct:.2}%)")
        })
        .collect();
    println!("{}: {}", summary.model, parts.join(", "));
}
