use std::path::Path;

use anyhow::Result;

use repcite_core::textmodel::{HierarchicalClassifier, SentimentClassifier};

use crate::config::{require_artifact, PipelineConfig};

use super::{manifest, read_json, GroundTruthFile};

pub fn run(config: &PipelineConfig, config_path: &Path) -> Result<()> {
    require_artifact(&config.groundtruth_path(), "build-gt")?;
    let mut run_manifest = manifest("train", config, config_path)?;
    run_manifest.input(&config.groundtruth_path())?;

    let gt: GroundTruthFile = read_json(&config.groundtruth_path())?;
    let clf_config = config.classifier_config();

    let flat = SentimentClassifier::train(&gt.flat, clf_config)?;
    let flat_path = config.model_path("flat");
    flat.save(&flat_path)?;
    println!(
        "flat model: {} training items, {} features -> {}",
        gt.flat.len(),
        flat.vocabulary().len(),
        flat_path.display()
    );

    let hier = HierarchicalClassifier::train(&gt.related, &gt.polarity, clf_config)?;
    let hier_path = config.model_path("hier");
    hier.save(&hier_path)?;
    println!(
        "hierarchical model: stage1 {} items / {} features, stage2 {} items / {} features -> {}",
        gt.related.len(),
        hier.stage1.vocabulary().len(),
        gt.polarity.len(),
        hier.stage2.vocabulary().len(),
        hier_path.display()
    );

    run_manifest.output(&flat_path);
    run_manifest.output(&hier_path);
    run_manifest.write(&config.manifest_path("train"))?;
    Ok(())
}
