use std::collections::BTreeMap;
use std::path::Path;

use anyhow::Result;

use repcite_core::corpus::{load_repstudies, read_papers, write_papers, RepStudy};
use repcite_core::scoring::{pool_paper_score, write_scores_csv};

use crate::config::{require_artifact, PipelineConfig};

use super::manifest;

pub fn run(config: &PipelineConfig, config_path: &Path) -> Result<()> {
    require_artifact(&config.papers_path(), "harvest")?;
    let mut run_manifest = manifest("score", config, config_path)?;
    run_manifest.input(&config.paths.repstudies)?;
    run_manifest.input(&config.papers_path())?;

    let studies = load_repstudies(&config.paths.repstudies)?;
    let mut papers = read_papers(config.papers_path())?;

    let mut by_doi: BTreeMap<&str, Vec<RepStudy>> = BTreeMap::new();
    for study in &studies {
        by_doi
            .entry(study.original_doi.as_str())
            .or_default()
            .push(study.clone());
    }

    let mut score_rows = Vec::new();
    let mut unscored = 0usize;
    for paper in papers.iter_mut() {
        match by_doi.get(paper.doi.as_str()) {
            Some(paper_studies) => {
                let score = pool_paper_score(paper_studies)?;
                paper.set_score(score);
                score_rows.push((paper.doi.clone(), score));
            }
            None => {
                log::warn!("{}: no rep-studies; left unscored", paper.doi);
                unscored += 1;
            }
        }
    }
    let harvested_dois: std::collections::BTreeSet<&str> =
        papers.iter().map(|p| p.doi.as_str()).collect();
    let orphan_studies = by_doi
        .keys()
        .filter(|doi| !harvested_dois.contains(*doi))
        .count();

    write_papers(&papers, config.papers_path())?;
    write_scores_csv(&score_rows, config.scores_path())?;

    let mut histogram: BTreeMap<String, usize> = BTreeMap::new();
    for paper in &papers {
        if let Some(bin) = paper.rs_bin {
            *histogram.entry(bin.to_string()).or_insert(0) += 1;
        }
    }
    println!("scored {} papers ({} unscored)", score_rows.len(), unscored);
    if orphan_studies > 0 {
        println!("{orphan_studies} rep-study DOIs have no harvested paper (see harvest failures)");
    }
    println!("rs_bin histogram:");
    for (bin, count) in &histogram {
        println!("  {bin}: {count}");
    }

    run_manifest.output(&config.papers_path());
    run_manifest.output(&config.scores_path());
    run_manifest.write(&config.manifest_path("score"))?;
    Ok(())
}
