//! Renders a plain-text report over whatever artifacts earlier subcommands
//! produced: corpus stats, score histogram, ground-truth sizes, CV tables,
//! and the per-bin analysis with its filter survivors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use anyhow::Result;

use repcite_core::corpus::{corpus_stats, read_contexts, read_papers};
use repcite_core::eval::{render_cv_table, CvSummary};

use crate::config::PipelineConfig;

use super::{manifest, read_json, GroundTruthFile};
use crate::commands::aggregate::AnalysisFile;

pub fn run(config: &PipelineConfig, config_path: &Path) -> Result<()> {
    let mut run_manifest = manifest("report", config, config_path)?;
    let mut out = String::new();
    let mut sections = 0usize;

    if config.corpus_path().exists() {
        run_manifest.input(&config.corpus_path())?;
        let contexts = read_contexts(config.corpus_path())?;
        let stats = corpus_stats(&contexts);
        writeln!(out, "== Corpus ==")?;
        writeln!(out, "cited papers:        {}", stats.papers)?;
        writeln!(out, "citing papers:       {}", stats.citing_papers)?;
        writeln!(out, "citations (pairs):   {}", stats.citations)?;
        writeln!(out, "citation contexts:   {}", stats.contexts)?;
        match stats.mean_contexts_per_citation {
            Some(mean) => writeln!(out, "contexts/citation:   {mean:.2}")?,
            None => writeln!(out, "contexts/citation:   n/a (empty corpus)")?,
        }
        writeln!(out)?;
        sections += 1;
    }

    if config.papers_path().exists() {
        run_manifest.input(&config.papers_path())?;
        let papers = read_papers(config.papers_path())?;
        let scored = papers.iter().filter(|p| p.rs_bin.is_some()).count();
        let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
        for paper in &papers {
            if let Some(bin) = paper.rs_bin {
                *histogram.entry(bin.to_string()).or_insert(0) += 1;
            }
        }
        writeln!(out, "== Reproducibility scores ==")?;
        writeln!(out, "papers harvested:    {}", papers.len())?;
        writeln!(out, "papers scored:       {scored}")?;
        for (bin, count) in &histogram {
            writeln!(out, "  rs_bin {bin}: {count} papers")?;
        }
        writeln!(out)?;
        sections += 1;
    }

    if config.groundtruth_path().exists() {
        run_manifest.input(&config.groundtruth_path())?;
        let gt: GroundTruthFile = read_json(&config.groundtruth_path())?;
        writeln!(out, "== Ground truth ==")?;
        writeln!(out, "labeled contexts:    {:?}", gt.full_class_counts)?;
        writeln!(out, "flat 3-class set:    {}", gt.flat.len())?;
        writeln!(out, "related set:         {}", gt.related.len())?;
        writeln!(out, "polarity set:        {}", gt.polarity.len())?;
        writeln!(out)?;
        sections += 1;
    }

    if config.cv_report_path().exists() {
        run_manifest.input(&config.cv_report_path())?;
        let summaries: Vec<CvSummary> = read_json(&config.cv_report_path())?;
        writeln!(out, "== Cross-validation ==")?;
        out.push_str(&render_cv_table(&summaries));
        writeln!(out)?;
        sections += 1;
    }

    if config.analysis_path().exists() {
        run_manifest.input(&config.analysis_path())?;
        let analysis: AnalysisFile = read_json(&config.analysis_path())?;
        for model in &analysis.models {
            writeln!(out, "== Sentiment vs rs_score ({}) ==", model.model)?;
            writeln!(
                out,
                "{:>6} {:>8} {:>10} {:>8} {:>8} {:>9} {:>9} {:>7}",
                "rs_bin", "papers", "contexts", "N_pos", "N_neg", "N'_pos", "N'_neg", "r"
            )?;
            for row in &model.rows {
                writeln!(
                    out,
                    "{:>6} {:>8} {:>10} {:>8} {:>8} {:>9} {:>9} {:>7}",
                    row.rs_bin,
                    row.n_papers,
                    row.n_contexts,
                    row.n_pos,
                    row.n_neg,
                    row.pos_frac
                        .map(|v| format!("{v:.4}"))
                        .unwrap_or_else(|| "-".into()),
                    row.neg_frac
                        .map(|v| format!("{v:.4}"))
                        .unwrap_or_else(|| "-".into()),
                    row.ratio
                        .map(|v| format!("{v:.3}"))
                        .unwrap_or_else(|| "-".into()),
                )?;
            }
            writeln!(
                out,
                "totals: {} positive, {} negative, {} contexts over {} papers in occupied bins",
                model.total_pos, model.total_neg, model.total_contexts, model.total_papers
            )?;
            let survivors: Vec<&str> =
                model.survivors.iter().map(|r| r.rs_bin.as_str()).collect();
            writeln!(
                out,
                "bins with N_neg >= {}: [{}]",
                model.min_neg,
                survivors.join(", ")
            )?;
            let ratios: Vec<String> = model
                .survivors
                .iter()
                .filter_map(|r| r.ratio.map(|v| format!("{v:.3}")))
                .collect();
            writeln!(out, "surviving pos/neg ratios: [{}]", ratios.join(", "))?;
            writeln!(out)?;
        }
        sections += 1;
    }

    // Paper-count bookkeeping: the rep-study DOI count and the bin-table sum
    // can legitimately differ; report both and reconcile nothing.
    if config.paths.repstudies.exists() {
        if let Ok(studies) = repcite_core::corpus::load_repstudies(&config.paths.repstudies) {
            let distinct: std::collections::BTreeSet<&str> =
                studies.iter().map(|s| s.original_doi.as_str()).collect();
            writeln!(out, "== Paper counts by source ==")?;
            writeln!(
                out,
                "distinct rep-study DOIs: {} (from {} rep-studies)",
                distinct.len(),
                studies.len()
            )?;
            if config.analysis_path().exists() {
                let analysis: AnalysisFile = read_json(&config.analysis_path())?;
                for model in &analysis.models {
                    writeln!(
                        out,
                        "papers summed over {} bins: {}",
                        model.model, model.total_papers
                    )?;
                }
            }
            writeln!(out)?;
            sections += 1;
        }
    }

    if sections == 0 {
        writeln!(out, "no artifacts found under {}", config.paths.out_dir.display())?;
    }

    fs::write(config.report_path(), &out)?;
    print!("{out}");
    println!("report written to {}", config.report_path().display());

    run_manifest.output(&config.report_path());
    run_manifest.write(&config.manifest_path("report"))?;
    Ok(())
}
