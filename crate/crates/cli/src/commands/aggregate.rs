use std::path::Path;

use anyhow::Result;
use serde::{Deserialize, Serialize};

use repcite_core::corpus::{read_contexts, read_papers};
use repcite_core::correlate::{
    aggregate, emit_plot_data, filter_bins, load_bin_table, normalize_all, AggregateRow,
    ModelAnalysis,
};

use crate::config::{require_artifact, PipelineConfig};
use crate::ModelChoice;

use super::{manifest, write_json};

#[derive(Debug, Serialize, Deserialize)]
pub struct AnalysisFile {
    pub min_neg: u64,
    pub models: Vec<ModelAnalysis>,
}

pub fn run(
    config: &PipelineConfig,
    config_path: &Path,
    model: ModelChoice,
    from_table: Option<&Path>,
) -> Result<()> {
    let min_neg = config.analysis.min_neg;
    let mut run_manifest = manifest("aggregate", config, config_path)?;
    let mut analyses: Vec<ModelAnalysis> = Vec::new();
    let mut outputs: Vec<std::path::PathBuf> = Vec::new();

    if let Some(table_path) = from_table {
        // Published-counts escape hatch: the analysis math runs on the
        // transcribed bin table alone, no harvest or model required.
        run_manifest.input(table_path)?;
        let table = load_bin_table(table_path)?;
        for (tag, rows) in [("m6", table.m6), ("m7", table.m7)] {
            let rows = normalize_all(rows);
            let artifacts = emit_plot_data(&rows, min_neg, tag, &config.paths.out_dir)?;
            collect_outputs(&artifacts, &mut outputs);
            analyses.push(ModelAnalysis::build(tag, &rows, min_neg));
            print_model(tag, &rows, min_neg);
        }
    } else {
        require_artifact(&config.papers_path(), "score")?;
        let papers = read_papers(config.papers_path())?;
        if papers.iter().all(|p| p.rs_bin.is_none()) {
            return Err(crate::config::MissingArtifact {
                path: config.scores_path(),
                producer: "score".to_string(),
            }
            .into());
        }
        run_manifest.input(&config.papers_path())?;
        let tags: &[&str] = match model {
            ModelChoice::Flat => &["flat"],
            ModelChoice::Hier => &["hier"],
            ModelChoice::Both => &["flat", "hier"],
        };
        for &tag in tags {
            let predictions = config.predictions_path(tag);
            require_artifact(&predictions, "predict")?;
            run_manifest.input(&predictions)?;
            let contexts = read_contexts(&predictions)?;
            let rows = normalize_all(aggregate(&contexts, &papers)?);
            let artifacts = emit_plot_data(&rows, min_neg, tag, &config.paths.out_dir)?;
            collect_outputs(&artifacts, &mut outputs);
            analyses.push(ModelAnalysis::build(tag, &rows, min_neg));
            print_model(tag, &rows, min_neg);
        }
    }

    let analysis = AnalysisFile { min_neg, models: analyses };
    write_json(&analysis, &config.analysis_path())?;
    outputs.push(config.analysis_path());

    for path in &outputs {
        run_manifest.output(path);
    }
    run_manifest.write(&config.manifest_path("aggregate"))?;
    Ok(())
}

fn collect_outputs(
    artifacts: &repcite_core::correlate::PlotArtifacts,
    outputs: &mut Vec<std::path::PathBuf>,
) {
    outputs.push(artifacts.csv.clone());
    if let Some(path) = &artifacts.all_bins_chart {
        outputs.push(path.clone());
    }
    if let Some(path) = &artifacts.filtered_chart {
        outputs.push(path.clone());
    }
}

fn print_model(tag: &str, rows: &[AggregateRow], min_neg: u64) {
    println!("== {tag} ==");
    println!(
        "{:>6} {:>8} {:>10} {:>8} {:>8} {:>9} {:>9} {:>7}",
        "rs_bin", "papers", "contexts", "N_pos", "N_neg", "N'_pos", "N'_neg", "r"
    );
    for row in rows {
        println!(
            "{:>6} {:>8} {:>10} {:>8} {:>8} {:>9} {:>9} {:>7}",
            row.rs_bin.to_string(),
            row.n_papers,
            row.n_contexts,
            row.n_pos,
            row.n_neg,
            row.pos_frac_f64()
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| "-".into()),
            row.neg_frac_f64()
                .map(|v| format!("{v:.4}"))
                .unwrap_or_else(|| "-".into()),
            row.ratio_f64()
                .map(|v| format!("{v:.3}"))
                .unwrap_or_else(|| "-".into()),
        );
    }
    let survivors = filter_bins(rows, min_neg);
    let names: Vec<String> = survivors.iter().map(|r| r.rs_bin.to_string()).collect();
    println!(
        "bins with N_neg >= {min_neg}: [{}] of {}",
        names.join(", "),
        rows.len()
    );
}
