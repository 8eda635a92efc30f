//! Bin-level sentiment analysis: per-rs_score-bin tallies, normalization by
//! Z = N_pos + N_neg, the minimum-negative-count filter, the pos/neg ratio,
//! and plot-data emission.
//!
//! Fractions and ratios are exact rationals until they are written out, so
//! `N'_pos + N'_neg = 1` holds identically whenever Z > 0 and the ratio
//! reduces to `N_pos / N_neg` exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fs;
use std::path::{Path, PathBuf};

use num_rational::Ratio;
use serde::Serialize;

use crate::corpus::{CitationContext, PaperRecord};
use crate::error::{Error, Result};
use crate::label::SentimentLabel;
use crate::plot::{render_chart, Series};
use crate::scoring::RsBin;

/// Default minimum negative-context count for a bin to survive filtering.
pub const DEFAULT_MIN_NEG: u64 = 50;

/// Tallies and derived fractions for one rs_score bin. JSON output goes
/// through [`ModelAnalysis`], which renders the rationals as floats.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub rs_bin: RsBin,
    pub n_papers: usize,
    pub n_contexts: usize,
    pub n_pos: u64,
    pub n_neg: u64,
    /// N'_pos = N_pos / Z; absent when Z = 0.
    pub pos_frac: Option<Ratio<u64>>,
    pub neg_frac: Option<Ratio<u64>>,
    /// r = N'_pos / N'_neg = N_pos / N_neg; absent when N_neg = 0.
    pub ratio: Option<Ratio<u64>>,
}

impl AggregateRow {
    pub fn from_counts(
        rs_bin: RsBin,
        n_papers: usize,
        n_contexts: usize,
        n_pos: u64,
        n_neg: u64,
    ) -> Self {
        AggregateRow {
            rs_bin,
            n_papers,
            n_contexts,
            n_pos,
            n_neg,
            pos_frac: None,
            neg_frac: None,
            ratio: None,
        }
    }

    /// Z = N_pos + N_neg.
    pub fn z(&self) -> u64 {
        self.n_pos + self.n_neg
    }

    pub fn pos_frac_f64(&self) -> Option<f64> {
        self.pos_frac.map(ratio_to_f64)
    }

    pub fn neg_frac_f64(&self) -> Option<f64> {
        self.neg_frac.map(ratio_to_f64)
    }

    pub fn ratio_f64(&self) -> Option<f64> {
        self.ratio.map(ratio_to_f64)
    }
}

pub fn ratio_to_f64(r: Ratio<u64>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// Groups predicted contexts by their cited paper's rs_bin. Every context
/// must cite a scored paper and carry a predicted label. Neutral predictions
/// count toward `n_contexts` only. One row per bin holding at least one
/// scored paper, ascending by bin.
pub fn aggregate(
    contexts: &[CitationContext],
    papers: &[PaperRecord],
) -> Result<Vec<AggregateRow>> {
    let mut bin_of: HashMap<&str, RsBin> = HashMap::new();
    let mut papers_per_bin: BTreeMap<RsBin, usize> = BTreeMap::new();
    for paper in papers {
        if let Some(bin) = paper.rs_bin {
            bin_of.insert(paper.paper_id.as_str(), bin);
            *papers_per_bin.entry(bin).or_insert(0) += 1;
        }
    }

    let mut unscored: BTreeSet<String> = BTreeSet::new();
    let mut unpredicted: BTreeSet<String> = BTreeSet::new();
    let mut tallies: BTreeMap<RsBin, (usize, u64, u64)> = BTreeMap::new();
    for ctx in contexts {
        let Some(bin) = bin_of.get(ctx.cited_paper_id.as_str()) else {
            unscored.insert(ctx.cited_paper_id.clone());
            continue;
        };
        let Some(label) = ctx.predicted_label else {
            unpredicted.insert(ctx.context_id.clone());
            continue;
        };
        let entry = tallies.entry(*bin).or_insert((0, 0, 0));
        entry.0 += 1;
        match label {
            SentimentLabel::Positive => entry.1 += 1,
            SentimentLabel::Negative => entry.2 += 1,
            SentimentLabel::Neutral => {}
        }
    }
    if !unscored.is_empty() {
        return Err(Error::UnknownIds(unscored.into_iter().collect()));
    }
    if !unpredicted.is_empty() {
        return Err(Error::Validation(format!(
            "{} contexts have no predicted label (first: {})",
            unpredicted.len(),
            unpredicted.iter().next().unwrap()
        )));
    }

    Ok(papers_per_bin
        .into_iter()
        .map(|(bin, n_papers)| {
            let (n_contexts, n_pos, n_neg) = tallies.get(&bin).copied().unwrap_or((0, 0, 0));
            AggregateRow::from_counts(bin, n_papers, n_contexts, n_pos, n_neg)
        })
        .collect())
}

/// Fills in N'_pos, N'_neg, and r. Z = 0 leaves the fractions absent but
/// keeps the row.
pub fn normalize(mut row: AggregateRow) -> AggregateRow {
    let z = row.z();
    if z > 0 {
        row.pos_frac = Some(Ratio::new(row.n_pos, z));
        row.neg_frac = Some(Ratio::new(row.n_neg, z));
    }
    row.ratio = if row.n_neg > 0 {
        Some(Ratio::new(row.n_pos, row.n_neg))
    } else {
        None
    };
    row
}

pub fn normalize_all(rows: Vec<AggregateRow>) -> Vec<AggregateRow> {
    rows.into_iter().map(normalize).collect()
}

/// Keeps rows with at least `min_neg` negative contexts.
pub fn filter_bins(rows: &[AggregateRow], min_neg: u64) -> Vec<AggregateRow> {
    rows.iter()
        .filter(|r| r.n_neg >= min_neg)
        .cloned()
        .collect()
}

/// A transcription of the published bin table, one aggregate per model.
#[derive(Debug, Clone, PartialEq)]
pub struct BinTable {
    pub m6: Vec<AggregateRow>,
    pub m7: Vec<AggregateRow>,
}

const BIN_TABLE_HEADER: [&str; 7] = [
    "rs_bin",
    "n_papers",
    "n_contexts",
    "m6_n_pos",
    "m6_n_neg",
    "m7_n_pos",
    "m7_n_neg",
];

/// Loads a bin-table CSV
/// (`rs_bin,n_papers,n_contexts,m6_n_pos,m6_n_neg,m7_n_pos,m7_n_neg`).
pub fn load_bin_table(path: impl AsRef<Path>) -> Result<BinTable> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::malformed(path, 0, format!("{other:?}")),
        })?;
    let headers = reader
        .headers()
        .map_err(|e| Error::malformed(path, 1, e.to_string()))?
        .clone();
    if headers.iter().collect::<Vec<_>>() != BIN_TABLE_HEADER {
        return Err(Error::malformed(
            path,
            1,
            format!("unexpected header, expected {}", BIN_TABLE_HEADER.join(",")),
        ));
    }
    let mut m6 = Vec::new();
    let mut m7 = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let get = |idx: usize| record.get(idx).unwrap_or("").trim();
        let bin = RsBin::parse(get(0)).map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let parse_num = |idx: usize| -> Result<u64> {
            get(idx).parse().map_err(|e| {
                Error::malformed(
                    path,
                    line,
                    format!("field {}: {e}", BIN_TABLE_HEADER[idx]),
                )
            })
        };
        let n_papers = parse_num(1)? as usize;
        let n_contexts = parse_num(2)? as usize;
        m6.push(AggregateRow::from_counts(
            bin,
            n_papers,
            n_contexts,
            parse_num(3)?,
            parse_num(4)?,
        ));
        m7.push(AggregateRow::from_counts(
            bin,
            n_papers,
            n_contexts,
            parse_num(5)?,
            parse_num(6)?,
        ));
    }
    Ok(BinTable { m6, m7 })
}

/// Files produced for one model's aggregate.
#[derive(Debug, Clone, Serialize)]
pub struct PlotArtifacts {
    pub csv: PathBuf,
    pub all_bins_chart: Option<PathBuf>,
    pub filtered_chart: Option<PathBuf>,
}

const AGGREGATE_HEADER: [&str; 7] = [
    "rs_bin",
    "pos_frac",
    "neg_frac",
    "ratio",
    "n_pos",
    "n_neg",
    "n_papers",
];

/// Writes `aggregate_{model}.csv` over all normalized rows, a fractions
/// chart over all bins, and a fractions-plus-ratio chart over the filtered
/// bins. With no surviving rows the filtered chart is skipped.
pub fn emit_plot_data(
    rows: &[AggregateRow],
    min_neg: u64,
    model_tag: &str,
    out_dir: impl AsRef<Path>,
) -> Result<PlotArtifacts> {
    let out_dir = out_dir.as_ref();
    fs::create_dir_all(out_dir).map_err(|e| Error::io(out_dir, e))?;

    let csv_path = out_dir.join(format!("aggregate_{model_tag}.csv"));
    write_aggregate_csv(rows, &csv_path)?;

    let fmt_opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    let _ = fmt_opt; // used by write_aggregate_csv

    let frac_series = |rows: &[AggregateRow]| -> Vec<Series<'static>> {
        let pos: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.pos_frac_f64().map(|f| (r.rs_bin.as_f64(), f)))
            .collect();
        let neg: Vec<(f64, f64)> = rows
            .iter()
            .filter_map(|r| r.neg_frac_f64().map(|f| (r.rs_bin.as_f64(), f)))
            .collect();
        vec![
            Series {
                label: "positive fraction",
                points: pos,
                color: "#1f77b4",
            },
            Series {
                label: "negative fraction",
                points: neg,
                color: "#d62728",
            },
        ]
    };

    let all_bins_chart = if rows.is_empty() {
        log::warn!("{model_tag}: no aggregate rows; skipping fraction chart");
        None
    } else {
        let path = out_dir.join(format!("figure3_{model_tag}.svg"));
        let svg = render_chart(
            &format!("Normalized sentiment fractions vs rs_score ({model_tag})"),
            "fraction of polar contexts",
            1.0,
            &frac_series(rows),
        );
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        Some(path)
    };

    let survivors = filter_bins(rows, min_neg);
    let filtered_chart = if survivors.is_empty() {
        log::warn!(
            "{model_tag}: no bins with at least {min_neg} negative contexts; skipping filtered chart"
        );
        None
    } else {
        let max_ratio = survivors
            .iter()
            .filter_map(|r| r.ratio_f64())
            .fold(1.0f64, f64::max);
        let mut series = frac_series(&survivors);
        let scale = (max_ratio * 1.1).max(1.0);
        series.push(Series {
            label: "pos/neg ratio (right scale)",
            points: survivors
                .iter()
                .filter_map(|r| r.ratio_f64().map(|v| (r.rs_bin.as_f64(), v / scale)))
                .collect(),
            color: "#2ca02c",
        });
        let path = out_dir.join(format!("figure4_{model_tag}.svg"));
        let svg = render_chart(
            &format!(
                "Filtered fractions and ratio vs rs_score ({model_tag}, N_neg >= {min_neg}; ratio scaled by {scale:.2})"
            ),
            "fraction / scaled ratio",
            1.0,
            &series,
        );
        fs::write(&path, svg).map_err(|e| Error::io(&path, e))?;
        Some(path)
    };

    Ok(PlotArtifacts {
        csv: csv_path,
        all_bins_chart,
        filtered_chart,
    })
}

pub fn write_aggregate_csv(rows: &[AggregateRow], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut writer = csv::Writer::from_path(path).map_err(|e| match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::Internal(format!("csv error: {other:?}")),
    })?;
    let write = |writer: &mut csv::Writer<fs::File>| -> csv::Result<()> {
        writer.write_record(AGGREGATE_HEADER)?;
        for row in rows {
            let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
            writer.write_record([
                row.rs_bin.to_string(),
                opt(row.pos_frac_f64()),
                opt(row.neg_frac_f64()),
                opt(row.ratio_f64()),
                row.n_pos.to_string(),
                row.n_neg.to_string(),
                row.n_papers.to_string(),
            ])?;
        }
        writer.flush()?;
        Ok(())
    };
    write(&mut writer).map_err(|e| Error::Internal(format!("writing {}: {e}", path.display())))
}

/// Re-reads an aggregate CSV; fractions are reconstructed exactly from the
/// integer counts, so write→read is the identity on normalized rows.
pub fn read_aggregate_csv(path: impl AsRef<Path>) -> Result<Vec<AggregateRow>> {
    let path = path.as_ref();
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .from_path(path)
        .map_err(|e| match e.into_kind() {
            csv::ErrorKind::Io(io) => Error::io(path, io),
            other => Error::malformed(path, 0, format!("{other:?}")),
        })?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let line = i + 2;
        let record = record.map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let get = |idx: usize| record.get(idx).unwrap_or("").trim();
        let bin = RsBin::parse(get(0)).map_err(|e| Error::malformed(path, line, e.to_string()))?;
        let n_pos: u64 = get(4)
            .parse()
            .map_err(|e| Error::malformed(path, line, format!("n_pos: {e}")))?;
        let n_neg: u64 = get(5)
            .parse()
            .map_err(|e| Error::malformed(path, line, format!("n_neg: {e}")))?;
        let n_papers: usize = get(6)
            .parse()
            .map_err(|e| Error::malformed(path, line, format!("n_papers: {e}")))?;
        let had_fracs = !get(1).is_empty();
        let mut row = AggregateRow::from_counts(bin, n_papers, 0, n_pos, n_neg);
        if had_fracs {
            row = normalize(row);
        }
        rows.push(row);
    }
    Ok(rows)
}

/// Machine-readable analysis block for one model.
#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct ModelAnalysis {
    pub model: String,
    pub min_neg: u64,
    pub rows: Vec<AnalysisRow>,
    pub survivors: Vec<AnalysisRow>,
    pub total_pos: u64,
    pub total_neg: u64,
    pub total_contexts: usize,
    pub total_papers: usize,
}

#[derive(Debug, Clone, Serialize, serde::Deserialize)]
pub struct AnalysisRow {
    pub rs_bin: String,
    pub n_papers: usize,
    pub n_contexts: usize,
    pub n_pos: u64,
    pub n_neg: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub pos_frac: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neg_frac: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ratio: Option<f64>,
}

impl ModelAnalysis {
    pub fn build(model: &str, rows: &[AggregateRow], min_neg: u64) -> Self {
        let to_row = |r: &AggregateRow| AnalysisRow {
            rs_bin: r.rs_bin.to_string(),
            n_papers: r.n_papers,
            n_contexts: r.n_contexts,
            n_pos: r.n_pos,
            n_neg: r.n_neg,
            pos_frac: r.pos_frac_f64(),
            neg_frac: r.neg_frac_f64(),
            ratio: r.ratio_f64(),
        };
        ModelAnalysis {
            model: model.to_string(),
            min_neg,
            rows: rows.iter().map(to_row).collect(),
            survivors: filter_bins(rows, min_neg).iter().map(to_row).collect(),
            total_pos: rows.iter().map(|r| r.n_pos).sum(),
            total_neg: rows.iter().map(|r| r.n_neg).sum(),
            total_contexts: rows.iter().map(|r| r.n_contexts).sum(),
            total_papers: rows.iter().map(|r| r.n_papers).sum(),
        }
    }
}
