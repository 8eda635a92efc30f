use std::path::Path;

use anyhow::{bail, Result};

use repcite_core::corpus::read_contexts;
use repcite_core::eval::{confusion, cross_validate, render_cv_table, weighted_prf, CvSummary};
use repcite_core::groundtruth::LabeledSet;
use repcite_core::label::SentimentLabel;
use repcite_core::rng::derive_seed;
use repcite_core::textmodel::{LinearTextModel, SentimentClassifier};

use crate::config::{require_artifact, PipelineConfig};

use super::{manifest, read_json, write_json, GroundTruthFile};

/// `eval` without arguments cross-validates the in-house models; with
/// `--external TAG` it scores an imported prediction file against the
/// balanced gold subset.
pub fn run(config: &PipelineConfig, config_path: &Path, external: Option<&str>) -> Result<()> {
    match external {
        Some(tag) => eval_external(config, config_path, tag),
        None => eval_cross_validation(config, config_path),
    }
}

fn eval_cross_validation(config: &PipelineConfig, config_path: &Path) -> Result<()> {
    require_artifact(&config.groundtruth_path(), "build-gt")?;
    let mut run_manifest = manifest("eval", config, config_path)?;
    run_manifest.input(&config.groundtruth_path())?;

    let gt: GroundTruthFile = read_json(&config.groundtruth_path())?;
    let k = config.training.cv_folds;
    let clf_config = config.classifier_config();

    let flat_set = LabeledSet::new(gt.flat, gt.seed)?;
    let flat_cv = cross_validate(&flat_set, k, derive_seed(config.seed, "cv:flat"), |train| {
        let clf = SentimentClassifier::train(train.items(), clf_config)?;
        Ok(move |text: &str| clf.predict(text).0)
    })?;

    let related_set = LabeledSet::new(gt.related, gt.seed)?;
    let related_cv = cross_validate(
        &related_set,
        k,
        derive_seed(config.seed, "cv:related"),
        |train| {
            let clf = LinearTextModel::train(train.items(), clf_config)?;
            Ok(move |text: &str| clf.predict(text).0)
        },
    )?;

    let polarity_set = LabeledSet::new(gt.polarity, gt.seed)?;
    let polarity_cv = cross_validate(
        &polarity_set,
        k,
        derive_seed(config.seed, "cv:polarity"),
        |train| {
            let clf = LinearTextModel::train(train.items(), clf_config)?;
            Ok(move |text: &str| clf.predict(text).0)
        },
    )?;

    let summaries = vec![
        flat_cv.summary("flat (sentiment 3-class)"),
        related_cv.summary("hier stage1 (related/not related)"),
        polarity_cv.summary("hier stage2 (positive/negative)"),
    ];
    write_json(&summaries, &config.cv_report_path())?;
    print!("{}", render_cv_table(&summaries));

    run_manifest.output(&config.cv_report_path());
    run_manifest.write(&config.manifest_path("eval"))?;
    Ok(())
}

/// Scores externally imported predictions against gold labels on the
/// balanced subset.
fn eval_external(config: &PipelineConfig, config_path: &Path, tag: &str) -> Result<()> {
    require_artifact(&config.groundtruth_path(), "build-gt")?;
    let predictions_path = config.predictions_path(tag);
    require_artifact(&predictions_path, &format!("predict --external FILE --tag {tag}"))?;
    let mut run_manifest = manifest(&format!("eval-{tag}"), config, config_path)?;
    run_manifest.input(&config.groundtruth_path())?;
    run_manifest.input(&predictions_path)?;

    let gt: GroundTruthFile = read_json(&config.groundtruth_path())?;
    let predicted = read_contexts(&predictions_path)?;
    let by_id: std::collections::HashMap<&str, SentimentLabel> = predicted
        .iter()
        .filter_map(|c| c.predicted_label.map(|l| (c.context_id.as_str(), l)))
        .collect();

    let mut gold = Vec::new();
    let mut pred = Vec::new();
    for item in &gt.flat {
        if let Some(&label) = by_id.get(item.context_id.as_str()) {
            gold.push(item.label);
            pred.push(label);
        }
    }
    if gold.is_empty() {
        bail!(
            "predictions {} cover none of the {} balanced gold items; evaluation refuses to run",
            predictions_path.display(),
            gt.flat.len()
        );
    }
    if gold.len() < gt.flat.len() {
        println!(
            "warning: predictions cover {}/{} balanced gold items",
            gold.len(),
            gt.flat.len()
        );
    }

    let report = weighted_prf(&confusion(&gold, &pred)?);
    let summary = CvSummary {
        model: tag.to_string(),
        data: gold.len(),
        k: 1,
        map: report.weighted_precision,
        mar: report.weighted_recall,
        maf1: report.weighted_f1,
        folds: vec![],
    };
    let out_path = config
        .paths
        .out_dir
        .join(format!("external_eval_{tag}.json"));
    write_json(&summary, &out_path)?;
    print!("{}", render_cv_table(&[summary]));

    run_manifest.output(&out_path);
    run_manifest.write(&config.manifest_path(&format!("eval-{tag}")))?;
    Ok(())
}
