//! Deterministic synthetic fixtures: a 30-paper corpus with a planted
//! positive correlation between reproducibility score and positive-sentiment
//! citation fraction, recorded API response bodies so the whole pipeline
//! runs offline, and a 3-page pagination fixture with a known manifest.
//!
//! Regenerating with the same seed writes byte-identical files.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::json;
use sha2::{Digest, Sha256};

use repcite_core::corpus::normalize_text;
use repcite_core::label::SentimentLabel;
use repcite_core::rng::{derive_seed, SplitMix64};
use repcite_harvest::{citations_url, paper_url, ResponseCache, DEFAULT_BASE_URL};

pub const FIXTURE_SEED: u64 = 0x5EED;

/// Tenths of the planted rs_score per paper; skewed toward 1.0 like real
/// rep-study collections.
const RS_PLAN: [u8; 30] = [
    0, 0, 0, 0, 0, 5, 5, 5, 5, 5, 5, 5, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 10, 2, 4, 4,
    6, 6, 8,
];

const TOPICS: [&str; 12] = [
    "image classification",
    "question answering",
    "graph learning",
    "machine translation",
    "speech recognition",
    "object detection",
    "text summarization",
    "link prediction",
    "semantic parsing",
    "domain adaptation",
    "knowledge distillation",
    "reading comprehension",
];

const AUTHOR_NAMES: [&str; 8] = [
    "Chen", "Kumar", "Garcia", "Ito", "Novak", "Singh", "Weber", "Okafor",
];

const POSITIVE_TEMPLATES: [&str; 8] = [
    "We reuse the code of {cite} and obtain matching results on {topic}.",
    "Following {cite} we successfully reproduced their reported accuracy on {topic}.",
    "Our reimplementation of {cite} achieves comparable performance on {topic}.",
    "The released implementation of {cite} reproduces the published numbers for {topic}.",
    "We adopt the open source code from {cite} which worked out of the box for {topic}.",
    "Consistent with {cite} our replication confirms their findings on {topic}.",
    "Using the official checkpoint of {cite} we match the reported scores on {topic}.",
    "We verified the main claim of {cite} in our own experiments on {topic}.",
];

const NEGATIVE_TEMPLATES: [&str; 7] = [
    "We were unable to reproduce the results reported by {cite} on {topic}.",
    "Our attempts to replicate {cite} failed despite extensive tuning on {topic}.",
    "The code released by {cite} is incomplete and the numbers could not be matched for {topic}.",
    "Contrary to {cite} we observe substantially worse performance on {topic}.",
    "No working implementation is available for {cite} making verification impossible on {topic}.",
    "The gains claimed by {cite} did not hold in our replication on {topic}.",
    "We could not match the published baselines of {cite} even after contacting the authors about {topic}.",
];

const NEUTRAL_TEMPLATES: [&str; 7] = [
    "Prior work includes attention based models {cite} applied to {topic}.",
    "{cite} introduced a benchmark widely used for {topic}.",
    "Several methods {cite} have been proposed for {topic}.",
    "For additional background on {topic} see {cite}.",
    "{cite} is a representative approach to {topic}.",
    "Our notation follows {cite} throughout the section on {topic}.",
    "A related line of research {cite} studies {topic}.",
];

fn hex_id(tag: &str, bytes: usize) -> String {
    let digest = Sha256::digest(tag.as_bytes());
    digest[..bytes].iter().map(|b| format!("{b:02x}")).collect()
}

/// (n_reproduced, n_total) pairs that bin to the given tenths value.
fn counts_for_tenths(tenths: u8) -> (u32, u32) {
    match tenths {
        0 => (0, 4),
        2 => (1, 5),
        4 => (2, 5),
        5 => (2, 4),
        6 => (3, 5),
        8 => (4, 5),
        10 => (4, 4),
        other => unreachable!("no fixture plan for bin {other}"),
    }
}

fn cite_marker(rng: &mut SplitMix64) -> String {
    if rng.next_f64() < 0.5 {
        format!("[{}]", 1 + rng.bounded(40))
    } else {
        let name = AUTHOR_NAMES[rng.bounded(AUTHOR_NAMES.len() as u64) as usize];
        let year = 2015 + rng.bounded(7);
        format!("({name} et al., {year})")
    }
}

fn render(template: &str, rng: &mut SplitMix64) -> String {
    let topic = TOPICS[rng.bounded(TOPICS.len() as u64) as usize];
    template
        .replace("{cite}", &cite_marker(rng))
        .replace("{topic}", topic)
}

fn sample_sentiment(rng: &mut SplitMix64, rs: f64) -> SentimentLabel {
    let p_pos = 0.15 + 0.55 * rs;
    let p_neg = (0.45 - 0.35 * rs).max(0.06);
    let draw = rng.next_f64();
    if draw < p_pos {
        SentimentLabel::Positive
    } else if draw < p_pos + p_neg {
        SentimentLabel::Negative
    } else {
        SentimentLabel::Neutral
    }
}

fn template_for(label: SentimentLabel, rng: &mut SplitMix64) -> &'static str {
    match label {
        SentimentLabel::Positive => {
            POSITIVE_TEMPLATES[rng.bounded(POSITIVE_TEMPLATES.len() as u64) as usize]
        }
        SentimentLabel::Negative => {
            NEGATIVE_TEMPLATES[rng.bounded(NEGATIVE_TEMPLATES.len() as u64) as usize]
        }
        SentimentLabel::Neutral => {
            NEUTRAL_TEMPLATES[rng.bounded(NEUTRAL_TEMPLATES.len() as u64) as usize]
        }
    }
}

#[derive(Debug, Serialize)]
struct FixtureExpectations {
    papers: usize,
    contexts: usize,
    labeled: usize,
    class_counts: BTreeMap<String, usize>,
    per_paper: Vec<PaperExpectation>,
}

#[derive(Debug, Serialize)]
struct PaperExpectation {
    doi: String,
    paper_id: String,
    rs_bin: String,
    contexts: usize,
}

/// Emits everything under `fixtures/`.
pub fn generate_fixtures(out_dir: &Path, seed: u64) -> Result<()> {
    write_table2(&out_dir.join("table2.csv"))?;
    write_tsr(&out_dir.join("tsr2023.csv"))?;
    generate_e2e(&out_dir.join("e2e"), seed)?;
    generate_pagination(&out_dir.join("pagination"))?;
    Ok(())
}

/// Transcription of the published per-bin distribution table.
fn write_table2(path: &Path) -> Result<()> {
    let content = "\
rs_bin,n_papers,n_contexts,m6_n_pos,m6_n_neg,m7_n_pos,m7_n_neg
0.0,11,1288,337,98,181,72
0.2,1,49,17,6,2,4
0.4,2,152,46,6,32,2
0.5,12,1967,669,147,469,114
0.6,5,284,90,27,45,10
0.7,4,140,33,9,26,2
0.8,3,161,31,9,29,6
1.0,89,37203,14521,2064,9516,1729
";
    write_file(path, content.as_bytes())
}

/// The 16 dichotomous TSR rep-studies: 5 successes, 11 failures.
fn write_tsr(path: &Path) -> Result<()> {
    let mut content =
        String::from("rep_id,source,year,original_doi,n_findings_total,n_findings_reproduced\n");
    for i in 1..=16u32 {
        let reproduced = if i <= 5 { 1 } else { 0 };
        content.push_str(&format!(
            "TSR-{i:02},TSR2023,2023,10.5555/tsr.{i:02},1,{reproduced}\n"
        ));
    }
    write_file(path, content.as_bytes())
}

fn generate_e2e(dir: &Path, seed: u64) -> Result<()> {
    let cache = ResponseCache::new(dir.join("cache"));
    let sources = ["ICLR2019", "NeurIPS2019", "MLRC2020", "MLRC2021", "MLRC2022", "TSR2023"];
    let source_years = [2019, 2019, 2020, 2021, 2022, 2023];

    let mut repstudies =
        String::from("rep_id,source,year,original_doi,n_findings_total,n_findings_reproduced\n");
    let mut labels = String::from("context_id,label\n");
    let mut expectations = FixtureExpectations {
        papers: RS_PLAN.len(),
        contexts: 0,
        labeled: 0,
        class_counts: BTreeMap::new(),
        per_paper: Vec::new(),
    };

    for (i, &tenths) in RS_PLAN.iter().enumerate() {
        let doi = format!("10.5555/fx.{i:03}");
        let paper_id = hex_id(&format!("fixture-paper-{i}"), 20);
        let rs = f64::from(tenths) / 10.0;
        let (reproduced, total) = counts_for_tenths(tenths);

        // Papers 0..5 get two rep-studies to exercise pooling; counts split
        // so the pooled score is unchanged.
        let source_idx = i % sources.len();
        if i < 5 {
            repstudies.push_str(&format!(
                "FX-{i:03}a,{},{},{doi},{},{}\n",
                sources[source_idx],
                source_years[source_idx],
                total / 2,
                reproduced / 2,
            ));
            repstudies.push_str(&format!(
                "FX-{i:03}b,{},{},{doi},{},{}\n",
                sources[source_idx],
                source_years[source_idx],
                total - total / 2,
                reproduced - reproduced / 2,
            ));
        } else {
            repstudies.push_str(&format!(
                "FX-{i:03},{},{},{doi},{total},{reproduced}\n",
                sources[source_idx], source_years[source_idx],
            ));
        }

        // Paper metadata body.
        let topic = TOPICS[i % TOPICS.len()];
        let venue = ["NeurIPS", "ICLR", "ICML", "ACL"][i % 4];
        let paper_body = json!({
            "paperId": paper_id,
            "title": format!("Fixture Study {i:03} on {topic}"),
            "venue": venue,
            "year": 2017 + (i as i32 % 5),
            "externalIds": {"DOI": doi},
        });
        cache
            .put(
                &paper_url(DEFAULT_BASE_URL, &doi),
                &serde_json::to_vec(&paper_body)?,
            )
            .context("writing paper body")?;

        // Citation contexts: two per citing paper.
        let n_contexts = 14 + (i % 7);
        let mut rng = SplitMix64::new(derive_seed(seed, &format!("paper:{i}")));
        let mut entries = Vec::new();
        let mut seen_texts: std::collections::HashSet<String> = std::collections::HashSet::new();
        let mut produced = 0usize;
        let mut citer = 0usize;
        while produced < n_contexts {
            let citing_id = hex_id(&format!("fixture-citer-{i}-{citer}"), 20);
            let take = (n_contexts - produced).min(2);
            let mut contexts = Vec::new();
            for _ in 0..take {
                let label = sample_sentiment(&mut rng, rs);
                let text = loop {
                    let candidate = render(template_for(label, &mut rng), &mut rng);
                    if seen_texts.insert(format!("{citing_id}\x1f{candidate}")) {
                        break candidate;
                    }
                };
                let context_id =
                    repcite_core::corpus::context_id(&citing_id, &normalize_text(&text));
                if rng.next_f64() < 0.45 {
                    labels.push_str(&format!("{context_id},{}\n", label_str(label)));
                    expectations.labeled += 1;
                    *expectations
                        .class_counts
                        .entry(label_str(label).to_string())
                        .or_insert(0) += 1;
                }
                contexts.push(text);
                produced += 1;
            }
            entries.push(json!({
                "contexts": contexts,
                "citingPaper": {"paperId": citing_id, "year": 2019 + (citer as i32 % 5)},
            }));
            citer += 1;
        }
        let citations_body = json!({"offset": 0, "data": entries});
        cache
            .put(
                &citations_url(DEFAULT_BASE_URL, &paper_id, 0, 100),
                &serde_json::to_vec(&citations_body)?,
            )
            .context("writing citations body")?;

        expectations.contexts += n_contexts;
        expectations.per_paper.push(PaperExpectation {
            doi,
            paper_id,
            rs_bin: format!("{}.{}", tenths / 10, tenths % 10),
            contexts: n_contexts,
        });
    }

    write_file(&dir.join("repstudies.csv"), repstudies.as_bytes())?;
    write_file(&dir.join("labels.csv"), labels.as_bytes())?;
    write_file(
        &dir.join("expected.json"),
        (serde_json::to_string_pretty(&expectations)? + "\n").as_bytes(),
    )?;
    write_file(
        &dir.join("config.toml"),
        e2e_config_toml(seed).as_bytes(),
    )?;
    Ok(())
}

fn label_str(label: SentimentLabel) -> &'static str {
    use repcite_core::label::ClassLabel;
    label.as_str()
}

/// Template config for running the pipeline on the e2e fixture from the
/// repository root.
fn e2e_config_toml(seed: u64) -> String {
    format!(
        "version = 1\nseed = {seed}\n\n\
         [paths]\n\
         repstudies = \"fixtures/e2e/repstudies.csv\"\n\
         labels = \"fixtures/e2e/labels.csv\"\n\
         cache_dir = \"fixtures/e2e/cache\"\n\
         out_dir = \"out/e2e\"\n\n\
         [harvest]\n\
         offline = true\n\
         page_limit = 100\n\
         min_request_interval_ms = 0\n\n\
         [analysis]\n\
         # The fixture corpus is ~500 contexts; the production default of 50\n\
         # negative contexts per bin would discard every bin.\n\
         min_neg = 5\n"
    )
}

#[derive(Debug, Serialize)]
struct PaginationManifest {
    doi: String,
    paper_id: String,
    page_limit: usize,
    pages: Vec<usize>,
    citations: usize,
    contexts: usize,
}

/// One paper whose citations span three pages (100 + 100 + 37).
fn generate_pagination(dir: &Path) -> Result<()> {
    let cache = ResponseCache::new(dir.join("cache"));
    let doi = "10.5555/fxpage.001".to_string();
    let paper_id = hex_id("fixture-pagination-paper", 20);
    let pages = [100usize, 100, 37];
    let limit = 100usize;

    let paper_body = json!({
        "paperId": paper_id,
        "title": "Fixture Pagination Paper",
        "venue": "NeurIPS",
        "year": 2018,
        "externalIds": {"DOI": doi},
    });
    cache.put(
        &paper_url(DEFAULT_BASE_URL, &doi),
        &serde_json::to_vec(&paper_body)?,
    )?;

    let mut rng = SplitMix64::new(derive_seed(FIXTURE_SEED, "pagination"));
    let mut offset = 0usize;
    let mut citer = 0usize;
    for (page_idx, &size) in pages.iter().enumerate() {
        let data: Vec<_> = (0..size)
            .map(|_| {
                citer += 1;
                let citing_id = hex_id(&format!("fixture-page-citer-{citer}"), 20);
                let text = render(
                    NEUTRAL_TEMPLATES[rng.bounded(NEUTRAL_TEMPLATES.len() as u64) as usize],
                    &mut rng,
                );
                json!({
                    "contexts": [format!("{text} (mention {citer})")],
                    "citingPaper": {"paperId": citing_id, "year": 2020},
                })
            })
            .collect();
        let mut body = json!({"offset": offset, "data": data});
        if page_idx + 1 < pages.len() {
            body["next"] = json!(offset + size);
        }
        cache.put(
            &citations_url(DEFAULT_BASE_URL, &paper_id, offset, limit),
            &serde_json::to_vec(&body)?,
        )?;
        offset += size;
    }

    let manifest = PaginationManifest {
        doi,
        paper_id,
        page_limit: limit,
        pages: pages.to_vec(),
        citations: pages.iter().sum(),
        contexts: pages.iter().sum(),
    };
    write_file(
        &dir.join("manifest.json"),
        (serde_json::to_string_pretty(&manifest)? + "\n").as_bytes(),
    )
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)
            .with_context(|| format!("cannot create {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("cannot write {}", path.display()))
}
