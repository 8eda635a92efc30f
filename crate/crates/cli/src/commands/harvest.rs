use std::path::Path;
use std::sync::Arc;

use anyhow::Result;

use repcite_core::corpus::{load_repstudies, write_contexts, write_papers};
use repcite_harvest::{
    harvest_corpus, HttpTransport, OfflineTransport, S2Client, SystemClock, Transport,
};

use crate::config::PipelineConfig;

use super::{manifest, write_json};

pub fn run(config: &PipelineConfig, config_path: &Path, offline_flag: bool) -> Result<()> {
    let mut run_manifest = manifest("harvest", config, config_path)?;
    run_manifest.input(&config.paths.repstudies)?;

    let studies = load_repstudies(&config.paths.repstudies)?;
    println!(
        "loaded {} rep-studies from {}",
        studies.len(),
        config.paths.repstudies.display()
    );

    let offline = offline_flag || config.harvest.offline;
    let transport: Arc<dyn Transport> = if offline {
        println!("offline mode: serving from cache {}", config.paths.cache_dir.display());
        Arc::new(OfflineTransport)
    } else {
        Arc::new(HttpTransport::new())
    };
    let client = S2Client::new(
        config.harvest_config(),
        transport,
        Arc::new(SystemClock::new()),
    )?;
    let (corpus, report) = harvest_corpus(&studies, &client)?;

    write_papers(&corpus.papers, config.papers_path())?;
    write_contexts(&corpus.contexts, config.corpus_path())?;
    write_json(&report, &config.harvest_report_path())?;

    println!(
        "harvest: {}/{} papers resolved, {} citations, {} contexts",
        report.papers_resolved,
        report.papers_requested,
        report.citations_seen,
        report.contexts_collected
    );
    if !report.failures.is_empty() {
        println!("failures ({}):", report.failures.len());
        for (doi, reason) in &report.failures {
            println!("  {doi}: {reason}");
        }
    }

    run_manifest.output(&config.papers_path());
    run_manifest.output(&config.corpus_path());
    run_manifest.output(&config.harvest_report_path());
    run_manifest.write(&config.manifest_path("harvest"))?;
    Ok(())
}
