use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;

use repcite_core::corpus::read_contexts;
use repcite_core::groundtruth::{
    balance_downsample, build_polarity_dataset, build_related_dataset, downsample_to_cap,
    import_labels,
};
use repcite_core::rng::derive_seed;

use crate::config::{require_artifact, PipelineConfig};

use super::{manifest, write_json, GroundTruthFile};

pub fn run(config: &PipelineConfig, config_path: &Path) -> Result<()> {
    require_artifact(&config.corpus_path(), "harvest")?;
    require_artifact(&config.paths.labels, "annotate")?;
    let mut run_manifest = manifest("build-gt", config, config_path)?;
    run_manifest.input(&config.corpus_path())?;
    run_manifest.input(&config.paths.labels)?;

    let contexts = read_contexts(config.corpus_path())?;
    let labeled = import_labels(&contexts, &config.paths.labels)?;

    let flat = if config.training.per_class_cap > 0 {
        downsample_to_cap(
            &labeled,
            config.training.per_class_cap,
            derive_seed(config.seed, "gt:flat"),
        )?
    } else {
        balance_downsample(&labeled, derive_seed(config.seed, "gt:flat"))?
    };
    let related = build_related_dataset(&labeled, derive_seed(config.seed, "gt:related"))?;
    let polarity = build_polarity_dataset(&labeled, derive_seed(config.seed, "gt:polarity"))?;

    let full_class_counts: BTreeMap<String, usize> = labeled
        .class_counts()
        .into_iter()
        .map(|(label, count)| (label.to_string(), count))
        .collect();
    println!("labeled contexts: {} {:?}", labeled.len(), full_class_counts);
    println!(
        "flat 3-class set: {} items {:?}",
        flat.len(),
        flat.class_counts()
    );
    println!(
        "related set: {} items {:?}",
        related.len(),
        related.class_counts()
    );
    println!(
        "polarity set: {} items {:?}",
        polarity.len(),
        polarity.class_counts()
    );

    let file = GroundTruthFile {
        seed: config.seed,
        full_class_counts,
        flat: flat.items().to_vec(),
        related: related.items().to_vec(),
        polarity: polarity.items().to_vec(),
    };
    write_json(&file, &config.groundtruth_path())?;

    run_manifest.output(&config.groundtruth_path());
    run_manifest.write(&config.manifest_path("build-gt"))?;
    Ok(())
}
