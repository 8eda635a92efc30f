//! Terminal labeling loop: shows one unlabeled context at a time, accepts
//! p/n/u/skip/quit, and appends answers to the labels CSV so a session can
//! be resumed at any point.

use std::collections::{BTreeMap, HashMap};
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};

use repcite_core::corpus::read_contexts;
use repcite_core::groundtruth::{read_labels_csv, write_annotation_export, write_labels_csv};
use repcite_core::label::SentimentLabel;

use crate::config::{require_artifact, PipelineConfig};

use super::manifest;

pub struct AnnotateOptions {
    pub relabel: bool,
    pub limit: Option<usize>,
    /// Write a `context_id,text,label` CSV (blank label for unlabeled)
    /// instead of running the interactive loop.
    pub export: Option<PathBuf>,
}

pub fn run(config: &PipelineConfig, config_path: &Path, options: AnnotateOptions) -> Result<()> {
    require_artifact(&config.corpus_path(), "harvest")?;
    let mut run_manifest = manifest("annotate", config, config_path)?;
    run_manifest.input(&config.corpus_path())?;
    let contexts = read_contexts(config.corpus_path())?;

    let labels_path = &config.paths.labels;
    let mut labels: BTreeMap<String, SentimentLabel> = if labels_path.exists() {
        read_labels_csv(labels_path)?.into_iter().collect()
    } else {
        BTreeMap::new()
    };
    let initial = labels.len();

    if let Some(export_path) = &options.export {
        let map: HashMap<String, SentimentLabel> =
            labels.iter().map(|(k, v)| (k.clone(), *v)).collect();
        write_annotation_export(&contexts, &map, export_path)?;
        println!(
            "exported {} contexts ({} labeled) to {}",
            contexts.len(),
            initial,
            export_path.display()
        );
        run_manifest.output(export_path);
        run_manifest.write(&config.manifest_path("annotate"))?;
        return Ok(());
    }

    let stdin = io::stdin();
    let mut lines = stdin.lock().lines();
    let mut answered = 0usize;
    let todo: Vec<_> = contexts
        .iter()
        .filter(|ctx| options.relabel || !labels.contains_key(&ctx.context_id))
        .collect();
    println!(
        "{} contexts, {} labeled, {} to annotate{}",
        contexts.len(),
        initial,
        todo.len(),
        options
            .limit
            .map(|l| format!(" (limit {l})"))
            .unwrap_or_default()
    );

    'outer: for ctx in todo {
        if let Some(limit) = options.limit {
            if answered >= limit {
                break;
            }
        }
        println!("{:-<72}", "");
        println!("id: {}", ctx.context_id);
        if let Some(existing) = labels.get(&ctx.context_id) {
            println!("current label: {existing}");
        }
        println!("{}", ctx.text);
        let answer = loop {
            print!("[p]ositive / [n]egative / [u] neutral / [s]kip / [q]uit > ");
            io::stdout().flush().ok();
            let Some(line) = lines.next() else {
                break 'outer; // stdin closed
            };
            let line = line.context("reading stdin")?;
            match line.trim().to_lowercase().as_str() {
                "p" | "positive" => break Some(SentimentLabel::Positive),
                "n" | "negative" => break Some(SentimentLabel::Negative),
                "u" | "neutral" => break Some(SentimentLabel::Neutral),
                "s" | "skip" => break None,
                "q" | "quit" => break 'outer,
                other => println!("unrecognized answer {other:?}"),
            }
        };
        if let Some(label) = answer {
            labels.insert(ctx.context_id.clone(), label);
            answered += 1;
            // Persist after every answer so an interrupted session loses
            // nothing.
            persist(&labels, labels_path)?;
        }
    }

    println!(
        "session labeled {answered} contexts ({} total in {})",
        labels.len(),
        labels_path.display()
    );
    run_manifest.output(labels_path);
    run_manifest.write(&config.manifest_path("annotate"))?;
    Ok(())
}

fn persist(labels: &BTreeMap<String, SentimentLabel>, path: &Path) -> Result<()> {
    let rows: Vec<(String, SentimentLabel)> =
        labels.iter().map(|(id, l)| (id.clone(), *l)).collect();
    write_labels_csv(&rows, path)?;
    Ok(())
}
