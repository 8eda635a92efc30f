//! Domain types and persistence for papers, rep-studies, citation contexts,
//! and labels.
//!
//! File formats:
//! - rep-studies CSV: header
//!   `rep_id,source,year,original_doi,n_findings_total,n_findings_reproduced`
//! - contexts JSONL: one object per line, keys `context_id, cited_paper_id,
//!   citing_paper_id, text, gold_label?, predicted_label?, predicted_probs?`
//! - papers JSON: array of [`PaperRecord`]

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::fmt;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use unicode_normalization::UnicodeNormalization;

use crate::error::{Error, Result};
use crate::label::{SentimentLabel, SentimentProbs};
use crate::scoring::{bin_rs_score, RsBin, RsScore};

/// An original study: the target of one or more reproduction attempts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PaperRecord {
    /// Opaque graph-API identifier.
    pub paper_id: String,
    pub doi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub title: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub venue: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub year: Option<i32>,
    /// Pooled reproducibility score, once `score` has run.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs_score: Option<RsScore>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rs_bin: Option<RsBin>,
}

impl PaperRecord {
    pub fn new(paper_id: impl Into<String>, doi: impl Into<String>) -> Self {
        PaperRecord {
            paper_id: paper_id.into(),
            doi: doi.into(),
            title: None,
            venue: None,
            year: None,
            rs_score: None,
            rs_bin: None,
        }
    }

    /// Attaches a pooled score; the bin is always derived, never set directly.
    pub fn set_score(&mut self, score: RsScore) {
        self.rs_bin = Some(bin_rs_score(&score));
        self.rs_score = Some(score);
    }

    pub fn validate(&self) -> Result<()> {
        if self.paper_id.is_empty() {
            return Err(Error::Validation("paper_id must be non-empty".into()));
        }
        match (&self.rs_score, &self.rs_bin) {
            (Some(score), Some(bin)) if bin_rs_score(score) != *bin => Err(Error::Validation(
                format!(
                    "paper {}: rs_bin {} does not match rs_score {}",
                    self.paper_id,
                    bin,
                    score.value()
                ),
            )),
            (None, Some(_)) => Err(Error::Validation(format!(
                "paper {}: rs_bin present without rs_score",
                self.paper_id
            ))),
            _ => Ok(()),
        }
    }
}

/// Data source a rep-study was collected from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RepSource {
    #[serde(rename = "ICLR2019")]
    Iclr2019,
    #[serde(rename = "NeurIPS2019")]
    NeurIps2019,
    #[serde(rename = "MLRC2020")]
    Mlrc2020,
    #[serde(rename = "MLRC2021")]
    Mlrc2021,
    #[serde(rename = "MLRC2022")]
    Mlrc2022,
    #[serde(rename = "TSR2023")]
    Tsr2023,
}

impl RepSource {
    pub const ALL: &'static [RepSource] = &[
        RepSource::Iclr2019,
        RepSource::NeurIps2019,
        RepSource::Mlrc2020,
        RepSource::Mlrc2021,
        RepSource::Mlrc2022,
        RepSource::Tsr2023,
    ];

    pub fn as_str(&self) -> &'static str {
        match self {
            RepSource::Iclr2019 => "ICLR2019",
            RepSource::NeurIps2019 => "NeurIPS2019",
            RepSource::Mlrc2020 => "MLRC2020",
            RepSource::Mlrc2021 => "MLRC2021",
            RepSource::Mlrc2022 => "MLRC2022",
            RepSource::Tsr2023 => "TSR2023",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        Self::ALL.iter().copied().find(|v| v.as_str() == s)
    }
}

impl fmt::Display for RepSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One reproduction attempt: which paper, and how many findings held up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RepStudy {
    pub rep_id: String,
    pub source: RepSource,
    pub year: i32,
    pub original_doi: String,
    pub n_findings_total: u32,
    pub n_findings_reproduced: u32,
}

impl RepStudy {
    pub fn validate(&self) -> Result<()> {
        if self.rep_id.is_empty() {
            return Err(Error::Validation("rep_id must be non-empty".into()));
        }
        if self.original_doi.is_empty() {
            return Err(Error::Validation("original_doi must be non-empty".into()));
        }
        if self.n_findings_total == 0 {
            return Err(Error::Validation(format!(
                "rep-study {}: n_findings_total must be >= 1",
                self.rep_id
            )));
        }
        if self.n_findings_reproduced > self.n_findings_total {
            return Err(Error::Validation(format!(
                "rep-study {}: n_findings_reproduced {} exceeds n_findings_total {}",
                self.rep_id, self.n_findings_reproduced, self.n_findings_total
            )));
        }
        Ok(())
    }
}

/// One in-text mention of a cited paper inside a citing paper.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CitationContext {
    /// Stable hash of (citing_paper_id, normalized text); see [`context_id`].
    pub context_id: String,
    pub cited_paper_id: String,
    pub citing_paper_id: String,
    pub text: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gold_label: Option<SentimentLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_label: Option<SentimentLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub predicted_probs: Option<SentimentProbs>,
}

impl CitationContext {
    /// Builds a context from raw harvested text. The text is NFC-normalized
    /// with whitespace runs collapsed; the id is derived from the result.
    pub fn new(
        cited_paper_id: impl Into<String>,
        citing_paper_id: impl Into<String>,
        raw_text: &str,
    ) -> Result<Self> {
        let citing_paper_id = citing_paper_id.into();
        let text = normalize_text(raw_text);
        if text.is_empty() {
            return Err(Error::Validation(
                "citation context text is empty or whitespace-only".into(),
            ));
        }
        Ok(CitationContext {
            context_id: context_id(&citing_paper_id, &text),
            cited_paper_id: cited_paper_id.into(),
            citing_paper_id,
            text,
            gold_label: None,
            predicted_label: None,
            predicted_probs: None,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.context_id.is_empty() {
            return Err(Error::Validation("context_id must be non-empty".into()));
        }
        if self.text.trim().is_empty() {
            return Err(Error::Validation(format!(
                "context {}: text is whitespace-only",
                self.context_id
            )));
        }
        if let Some(probs) = &self.predicted_probs {
            probs.validate()?;
        }
        Ok(())
    }
}

/// NFC-normalizes and collapses internal whitespace runs to single spaces.
/// API responses vary in whitespace; identity must not.
pub fn normalize_text(raw: &str) -> String {
    let nfc: String = raw.nfc().collect();
    nfc.split_whitespace().collect::<Vec<_>>().join(" ")
}

/// Deterministic context identity: lowercase hex of the first 128 bits of
/// SHA-256 over `citing_paper_id + "\x1f" + normalized_text`.
pub fn context_id(citing_paper_id: &str, normalized_text: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(citing_paper_id.as_bytes());
    hasher.update([0x1f]);
    hasher.update(normalized_text.as_bytes());
    let digest = hasher.finalize();
    digest[..16].iter().map(|b| format!("{b:02x}")).collect()
}

/// Papers plus the citation contexts that mention them.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Corpus {
    pub papers: Vec<PaperRecord>,
    pub contexts: Vec<CitationContext>,
}

const REPSTUDY_HEADER: [&str; 6] = [
    "rep_id",
    "source",
    "year",
    "original_doi",
    "n_findings_total",
    "n_findings_reproduced",
];

/// Loads the rep-studies CSV. Line numbers in errors are 1-based and include
/// the header line.
pub fn load_repstudies(path: impl AsRef<Path>) -> Result<Vec<RepStudy>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| csv_open_error(path, e))?;

    let headers = reader
        .headers()
        .map_err(|e| csv_open_error(path, e))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != REPSTUDY_HEADER {
        return Err(Error::malformed(
            path,
            1,
            format!(
                "unexpected header {:?}, expected {:?}",
                headers.iter().collect::<Vec<_>>().join(","),
                REPSTUDY_HEADER.join(",")
            ),
        ));
    }

    let mut studies = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2; // header is line 1
        let record = record.map_err(|e| Error::malformed(path, line, e.to_string()))?;
        if record.len() != REPSTUDY_HEADER.len() {
            return Err(Error::malformed(
                path,
                line,
                format!("expected {} fields, got {}", REPSTUDY_HEADER.len(), record.len()),
            ));
        }
        let field = |idx: usize| record.get(idx).unwrap_or("").trim();
        let source = RepSource::parse(field(1)).ok_or_else(|| {
            Error::malformed(path, line, format!("field source: unknown value {:?}", field(1)))
        })?;
        let year: i32 = parse_field(path, line, "year", field(2))?;
        let n_total: u32 = parse_field(path, line, "n_findings_total", field(4))?;
        let n_reproduced: u32 = parse_field(path, line, "n_findings_reproduced", field(5))?;
        let study = RepStudy {
            rep_id: field(0).to_string(),
            source,
            year,
            original_doi: field(3).to_string(),
            n_findings_total: n_total,
            n_findings_reproduced: n_reproduced,
        };
        study
            .validate()
            .map_err(|e| Error::malformed(path, line, e.to_string()))?;
        studies.push(study);
    }
    Ok(studies)
}

fn parse_field<T: std::str::FromStr>(path: &Path, line: usize, name: &str, raw: &str) -> Result<T>
where
    T::Err: fmt::Display,
{
    raw.parse().map_err(|e| {
        Error::malformed(path, line, format!("field {name}: cannot parse {raw:?}: {e}"))
    })
}

fn csv_open_error(path: &Path, e: csv::Error) -> Error {
    match e.kind() {
        csv::ErrorKind::Io(_) => {
            if let csv::ErrorKind::Io(io) = e.into_kind() {
                Error::io(path, io)
            } else {
                unreachable!()
            }
        }
        _ => Error::malformed(path, 0, e.to_string()),
    }
}

/// Writes contexts as JSONL, one object per line.
pub fn write_contexts(contexts: &[CitationContext], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    for ctx in contexts {
        ctx.validate()?;
    }
    let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    let mut writer = BufWriter::new(file);
    for ctx in contexts {
        let line = serde_json::to_string(ctx)
            .map_err(|e| Error::Internal(format!("context serialization failed: {e}")))?;
        writeln!(writer, "{line}").map_err(|e| Error::io(path, e))?;
    }
    writer.flush().map_err(|e| Error::io(path, e))
}

/// Reads a contexts JSONL file, rejecting duplicate context ids.
pub fn read_contexts(path: impl AsRef<Path>) -> Result<Vec<CitationContext>> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    let reader = BufReader::new(file);

    let mut contexts = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    let mut duplicates: BTreeSet<String> = BTreeSet::new();
    for (i, line) in reader.lines().enumerate() {
        let line_no = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        if line.trim().is_empty() {
            continue;
        }
        let ctx: CitationContext = serde_json::from_str(&line)
            .map_err(|e| Error::malformed(path, line_no, e.to_string()))?;
        ctx.validate()
            .map_err(|e| Error::malformed(path, line_no, e.to_string()))?;
        if !seen.insert(ctx.context_id.clone()) {
            duplicates.insert(ctx.context_id.clone());
        }
        contexts.push(ctx);
    }
    if !duplicates.is_empty() {
        return Err(Error::DuplicateIds(duplicates.into_iter().collect()));
    }
    Ok(contexts)
}

/// Writes the paper table as pretty-printed JSON.
pub fn write_papers(papers: &[PaperRecord], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    for paper in papers {
        paper.validate()?;
    }
    let json = serde_json::to_string_pretty(papers)
        .map_err(|e| Error::Internal(format!("paper serialization failed: {e}")))?;
    fs::write(path, json + "\n").map_err(|e| Error::io(path, e))
}

pub fn read_papers(path: impl AsRef<Path>) -> Result<Vec<PaperRecord>> {
    let path = path.as_ref();
    let raw = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let papers: Vec<PaperRecord> =
        serde_json::from_str(&raw).map_err(|e| Error::malformed(path, 0, e.to_string()))?;
    let mut seen = HashSet::new();
    for paper in &papers {
        paper.validate()?;
        if !seen.insert(paper.paper_id.as_str()) {
            return Err(Error::DuplicateIds(vec![paper.paper_id.clone()]));
        }
    }
    Ok(papers)
}

/// Corpus-level tallies.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CorpusStats {
    /// Distinct cited papers appearing in contexts.
    pub papers: usize,
    /// Distinct citing papers.
    pub citing_papers: usize,
    /// Distinct (cited, citing) pairs.
    pub citations: usize,
    pub contexts: usize,
    /// contexts / citations; absent for an empty corpus.
    pub mean_contexts_per_citation: Option<f64>,
}

pub fn corpus_stats(contexts: &[CitationContext]) -> CorpusStats {
    let mut cited = BTreeSet::new();
    let mut citing = BTreeSet::new();
    let mut pairs = BTreeSet::new();
    for ctx in contexts {
        cited.insert(ctx.cited_paper_id.as_str());
        citing.insert(ctx.citing_paper_id.as_str());
        pairs.insert((ctx.cited_paper_id.as_str(), ctx.citing_paper_id.as_str()));
    }
    let mean = if pairs.is_empty() {
        None
    } else {
        Some(contexts.len() as f64 / pairs.len() as f64)
    };
    CorpusStats {
        papers: cited.len(),
        citing_papers: citing.len(),
        citations: pairs.len(),
        contexts: contexts.len(),
        mean_contexts_per_citation: mean,
    }
}

/// Per-label tallies of gold or predicted labels.
pub fn label_counts(
    contexts: &[CitationContext],
    pick: impl Fn(&CitationContext) -> Option<SentimentLabel>,
) -> BTreeMap<SentimentLabel, usize> {
    let mut counts = BTreeMap::new();
    for ctx in contexts {
        if let Some(label) = pick(ctx) {
            *counts.entry(label).or_insert(0) += 1;
        }
    }
    counts
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tmp_csv(content: &str) -> tempfile::NamedTempFile {
        let mut f = tempfile::NamedTempFile::new().unwrap();
        f.write_all(content.as_bytes()).unwrap();
        f
    }

    const HEADER: &str = "rep_id,source,year,original_doi,n_findings_total,n_findings_reproduced\n";

    #[test]
    fn loads_dichotomous_tsr_row() {
        let f = tmp_csv(&format!("{HEADER}TSR-01,TSR2023,2023,10.x/abc,1,0\n"));
        let studies = load_repstudies(f.path()).unwrap();
        assert_eq!(studies.len(), 1);
        assert_eq!(studies[0].n_findings_total, 1);
        assert_eq!(studies[0].n_findings_reproduced, 0);
        assert_eq!(studies[0].source, RepSource::Tsr2023);
    }

    #[test]
    fn zero_total_findings_is_a_validation_error() {
        let f = tmp_csv(&format!("{HEADER}R1,MLRC2020,2020,10.1/x,0,0\n"));
        let err = load_repstudies(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains(":2:"), "error should name line 2: {msg}");
        assert!(msg.contains("n_findings_total"));
    }

    #[test]
    fn reproduced_above_total_is_rejected_with_row_number() {
        let f = tmp_csv(&format!(
            "{HEADER}R1,MLRC2020,2020,10.1/x,2,1\nR2,MLRC2021,2021,10.1/y,2,3\n"
        ));
        let err = load_repstudies(f.path()).unwrap_err();
        assert!(err.to_string().contains(":3:"), "got: {err}");
    }

    #[test]
    fn malformed_field_errors_name_row_and_field() {
        let f = tmp_csv(&format!("{HEADER}R1,MLRC2020,twenty,10.1/x,2,1\n"));
        let err = load_repstudies(f.path()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("field year"), "got: {msg}");
        assert!(msg.contains(":2:"));
    }

    #[test]
    fn unknown_source_is_rejected() {
        let f = tmp_csv(&format!("{HEADER}R1,MLRC2019,2019,10.1/x,2,1\n"));
        let err = load_repstudies(f.path()).unwrap_err();
        assert!(err.to_string().contains("source"));
    }

    #[test]
    fn many_valid_rows_load_one_to_one() {
        let mut content = String::from(HEADER);
        for i in 0..145 {
            content.push_str(&format!("R{i},MLRC2021,2021,10.1/p{i},4,2\n"));
        }
        let f = tmp_csv(&content);
        assert_eq!(load_repstudies(f.path()).unwrap().len(), 145);
    }

    #[test]
    fn text_normalization_collapses_whitespace_and_applies_nfc() {
        assert_eq!(normalize_text("  a \t b\nc  "), "a b c");
        // U+0065 U+0301 (e + combining acute) composes to U+00E9 under NFC.
        assert_eq!(normalize_text("caf\u{0065}\u{0301}"), "caf\u{e9}");
    }

    #[test]
    fn context_id_depends_on_citing_and_text_only() {
        let a = CitationContext::new("cited1", "citing", "Some text [3].").unwrap();
        let b = CitationContext::new("cited2", "citing", "Some  text\t[3].").unwrap();
        assert_eq!(a.context_id, b.context_id); // same citer + normalized text
        let c = CitationContext::new("cited1", "other", "Some text [3].").unwrap();
        assert_ne!(a.context_id, c.context_id);
        assert_eq!(a.context_id.len(), 32);
    }

    #[test]
    fn whitespace_only_context_is_rejected() {
        assert!(CitationContext::new("a", "b", "   \t ").is_err());
    }

    #[test]
    fn contexts_round_trip_including_empty() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("contexts.jsonl");

        write_contexts(&[], &path).unwrap();
        assert_eq!(read_contexts(&path).unwrap(), vec![]);

        let mut ctx = CitationContext::new("p1", "c1", "We reuse the code of [7].").unwrap();
        ctx.gold_label = Some(SentimentLabel::Positive);
        ctx.predicted_label = Some(SentimentLabel::Positive);
        ctx.predicted_probs = Some(SentimentProbs::new(0.8, 0.1, 0.1).unwrap());
        let ctx2 = CitationContext::new("p1", "c2", "As shown in [9].").unwrap();
        let original = vec![ctx, ctx2];
        write_contexts(&original, &path).unwrap();
        assert_eq!(read_contexts(&path).unwrap(), original);
    }

    #[test]
    fn read_reports_missing_text_with_line_number() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("bad.jsonl");
        let good = serde_json::to_string(
            &CitationContext::new("p", "c", "fine text here").unwrap(),
        )
        .unwrap();
        fs::write(
            &path,
            format!("{good}\n{{\"context_id\":\"x\",\"cited_paper_id\":\"p\",\"citing_paper_id\":\"c\"}}\n"),
        )
        .unwrap();
        let err = read_contexts(&path).unwrap_err();
        assert!(err.to_string().contains(":2:"), "got: {err}");
    }

    #[test]
    fn duplicate_ids_on_read_are_listed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("dup.jsonl");
        let ctx = CitationContext::new("p", "c", "twice-written line").unwrap();
        let line = serde_json::to_string(&ctx).unwrap();
        fs::write(&path, format!("{line}\n{line}\n")).unwrap();
        match read_contexts(&path).unwrap_err() {
            Error::DuplicateIds(ids) => assert_eq!(ids, vec![ctx.context_id]),
            other => panic!("expected DuplicateIds, got {other}"),
        }
    }

    #[test]
    fn stats_on_empty_corpus_are_zero_with_absent_mean() {
        let stats = corpus_stats(&[]);
        assert_eq!(stats.contexts, 0);
        assert_eq!(stats.mean_contexts_per_citation, None);
    }

    #[test]
    fn stats_single_pair() {
        let ctx = CitationContext::new("p", "c", "only mention").unwrap();
        let stats = corpus_stats(&[ctx]);
        assert_eq!(stats.papers, 1);
        assert_eq!(stats.citing_papers, 1);
        assert_eq!(stats.citations, 1);
        assert_eq!(stats.mean_contexts_per_citation, Some(1.0));
    }

    #[test]
    fn stats_mean_counts_contexts_per_pair() {
        // 5 (cited, citing) pairs x 4 contexts each.
        let mut contexts = Vec::new();
        for pair in 0..5 {
            for k in 0..4 {
                contexts.push(
                    CitationContext::new(
                        format!("cited{pair}"),
                        format!("citing{pair}"),
                        &format!("mention number {k} of pair {pair}"),
                    )
                    .unwrap(),
                );
            }
        }
        let stats = corpus_stats(&contexts);
        assert_eq!(stats.citations, 5);
        assert_eq!(stats.contexts, 20);
        assert_eq!(stats.mean_contexts_per_citation, Some(4.0));
    }

    #[test]
    fn paper_bin_must_match_score() {
        let mut paper = PaperRecord::new("id", "10.1/x");
        paper.set_score(RsScore::new(2, 3).unwrap());
        paper.validate().unwrap();
        paper.rs_bin = Some(RsBin::from_tenths(3).unwrap());
        assert!(paper.validate().is_err());
    }

    #[test]
    fn context_id_is_injective_over_distinct_pairs() {
        // 10^5 distinct (citing, text) pairs must yield 10^5 distinct ids.
        let mut ids = HashSet::with_capacity(100_000);
        for i in 0..100_000u32 {
            let citing = format!("citer{}", i / 317);
            let text = format!("mention variant {i} of some cited work");
            assert!(ids.insert(context_id(&citing, &text)), "collision at {i}");
        }
    }

    mod properties {
        use super::*;
        use crate::label::SentimentProbs;
        use proptest::prelude::*;

        fn label_strategy() -> impl Strategy<Value = Option<SentimentLabel>> {
            proptest::option::of(proptest::sample::select(vec![
                SentimentLabel::Positive,
                SentimentLabel::Negative,
                SentimentLabel::Neutral,
            ]))
        }

        fn probs_strategy() -> impl Strategy<Value = Option<SentimentProbs>> {
            proptest::option::of((0.01f64..10.0, 0.01f64..10.0, 0.01f64..10.0).prop_map(
                |(a, b, c)| {
                    let sum = a + b + c;
                    SentimentProbs::new(a / sum, b / sum, 1.0 - a / sum - b / sum).unwrap()
                },
            ))
        }

        proptest! {
            #[test]
            fn write_then_read_is_identity(
                records in proptest::collection::vec(
                    ("[a-zA-Z0-9 .,\\[\\]()]{1,60}", label_strategy(), probs_strategy()),
                    0..40,
                ),
            ) {
                let mut contexts = Vec::new();
                for (i, (text, gold, probs)) in records.into_iter().enumerate() {
                    prop_assume!(!text.trim().is_empty());
                    // Distinct citing id per record keeps ids unique.
                    let mut ctx = CitationContext::new(
                        format!("cited{}", i % 7),
                        format!("citer{i}"),
                        &text,
                    )
                    .unwrap();
                    ctx.gold_label = gold;
                    ctx.predicted_label = gold;
                    ctx.predicted_probs = probs;
                    contexts.push(ctx);
                }
                let dir = tempfile::tempdir().unwrap();
                let path = dir.path().join("contexts.jsonl");
                write_contexts(&contexts, &path).unwrap();
                let read_back = read_contexts(&path).unwrap();
                prop_assert_eq!(read_back, contexts);
            }
        }
    }
}
