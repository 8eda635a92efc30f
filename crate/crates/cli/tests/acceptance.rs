//! Acceptance suite: one test per criterion, each printing a PASS line when
//! it holds. Run with `cargo test -p repcite --test acceptance -- --nocapture`
//! to see the lines.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;
use std::sync::Arc;
use std::time::Instant;

use serde::Deserialize;

use repcite_core::corpus::{load_repstudies, RepStudy};
use repcite_core::correlate::{filter_bins, load_bin_table, normalize_all};
use repcite_core::eval::{confusion, cross_validate, weighted_prf, ConfusionMatrix};
use repcite_core::groundtruth::{
    balance_downsample, build_polarity_dataset, build_related_dataset, LabeledItem, LabeledSet,
};
use repcite_core::label::{ClassLabel, SentimentLabel};
use repcite_core::rng::SplitMix64;
use repcite_core::scoring::{bin_rs_score, compute_rs_score, pool_paper_score, RsBin, RsScore};
use repcite_core::textmodel::{ClassifierConfig, SentimentClassifier};
use repcite_harvest::{CountingTransport, HarvestConfig, ManualClock, OfflineTransport, S2Client};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .expect("workspace root")
}

fn fixtures_dir() -> PathBuf {
    workspace_root().join("fixtures")
}

// ---------------------------------------------------------------------------
// Criterion 1: analysis math on the transcribed bin table.

#[test]
fn criterion_1_analysis_math_matches_published_table() {
    let started = Instant::now();
    let table = load_bin_table(fixtures_dir().join("table2.csv")).unwrap();

    let expectations: [(&str, Vec<_>, [f64; 3]); 2] = [
        ("m6", table.m6, [3.439, 4.551, 7.035]),
        ("m7", table.m7, [2.514, 4.114, 5.504]),
    ];
    for (tag, rows, expected_ratios) in expectations {
        let rows = normalize_all(rows);
        let survivors = filter_bins(&rows, 50);
        let bins: Vec<f64> = survivors.iter().map(|r| r.rs_bin.as_f64()).collect();
        assert_eq!(bins, vec![0.0, 0.5, 1.0], "{tag}: surviving bins");

        let ratios: Vec<f64> = survivors.iter().map(|r| r.ratio_f64().unwrap()).collect();
        for (got, want) in ratios.iter().zip(expected_ratios) {
            assert!(
                (got - want).abs() <= 0.01,
                "{tag}: ratio {got} differs from {want} by more than 0.01"
            );
        }

        let pos: Vec<f64> = survivors.iter().map(|r| r.pos_frac_f64().unwrap()).collect();
        let neg: Vec<f64> = survivors.iter().map(|r| r.neg_frac_f64().unwrap()).collect();
        assert!(
            pos.windows(2).all(|w| w[1] > w[0]),
            "{tag}: positive fraction must strictly increase over survivors: {pos:?}"
        );
        assert!(
            neg.windows(2).all(|w| w[1] < w[0]),
            "{tag}: negative fraction must strictly decrease over survivors: {neg:?}"
        );
    }

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs_f64() < 1.0,
        "analysis took {elapsed:?}, budget is 1 s"
    );
    println!(
        "ACCEPTANCE 1 PASS — bin filter leaves rs ∈ {{0.0, 0.5, 1.0}} with ratios 3.439/4.551/7.035 (m6) and 2.514/4.114/5.504 (m7), monotone fractions, in {elapsed:?}"
    );
}

// ---------------------------------------------------------------------------
// Criterion 2: column conservation.

#[test]
fn criterion_2_column_sums_are_conserved() {
    let table = load_bin_table(fixtures_dir().join("table2.csv")).unwrap();
    let sum = |rows: &[repcite_core::correlate::AggregateRow]| {
        (
            rows.iter().map(|r| r.n_pos).sum::<u64>(),
            rows.iter().map(|r| r.n_neg).sum::<u64>(),
            rows.iter().map(|r| r.n_contexts).sum::<usize>(),
        )
    };
    let (m6_pos, m6_neg, contexts) = sum(&table.m6);
    let (m7_pos, m7_neg, contexts_again) = sum(&table.m7);
    assert_eq!(m6_pos, 15_744);
    assert_eq!(m6_neg, 2_366);
    assert_eq!(m7_pos, 10_300);
    assert_eq!(m7_neg, 1_939);
    assert_eq!(contexts, 41_244);
    assert_eq!(contexts_again, 41_244);

    let positive_pct = 100.0 * m6_pos as f64 / contexts as f64;
    assert!(
        (positive_pct - 38.17).abs() <= 0.01,
        "positive share {positive_pct}% should be 38.17% ± 0.01 pt"
    );
    println!(
        "ACCEPTANCE 2 PASS — sums 15744/2366 (m6), 10300/1939 (m7), 41244 contexts, positive share {positive_pct:.4}%"
    );
}

// ---------------------------------------------------------------------------
// Criterion 3: ground-truth arithmetic from the pilot class counts.

#[test]
fn criterion_3_groundtruth_sizes_from_pilot_counts() {
    let mut items = Vec::new();
    let mut push = |label: SentimentLabel, n: usize| {
        for i in 0..n {
            items.push(LabeledItem {
                context_id: format!("{label}-{i}"),
                text: format!("pilot context {label} {i}"),
                label,
            });
        }
    };
    push(SentimentLabel::Positive, 158);
    push(SentimentLabel::Negative, 23);
    push(SentimentLabel::Neutral, 1756);
    let set = LabeledSet::new(items, 0).unwrap();
    assert_eq!(set.len(), 1937);

    let balanced = balance_downsample(&set, 7).unwrap();
    assert_eq!(balanced.len(), 69);
    let related = build_related_dataset(&set, 7).unwrap();
    assert_eq!(related.len(), 362);
    let polarity = build_polarity_dataset(&set, 7).unwrap();
    assert_eq!(polarity.len(), 46);
    println!("ACCEPTANCE 3 PASS — class counts {{158, 23, 1756}} give balanced 69, related 362, polarity 46");
}

// ---------------------------------------------------------------------------
// Criterion 4: rs_score on the dichotomous studies plus scoring properties.

#[test]
fn criterion_4_tsr_scores_and_scoring_properties() {
    let studies = load_repstudies(fixtures_dir().join("tsr2023.csv")).unwrap();
    assert_eq!(studies.len(), 16);
    let scores: Vec<f64> = studies
        .iter()
        .map(|s| {
            compute_rs_score(s.n_findings_reproduced, s.n_findings_total)
                .unwrap()
                .value()
        })
        .collect();
    assert_eq!(scores.iter().filter(|v| **v == 1.0).count(), 5);
    assert_eq!(scores.iter().filter(|v| **v == 0.0).count(), 11);

    // Monotonicity in the numerator at fixed denominator.
    let mut rng = SplitMix64::new(0xACC4);
    for _ in 0..2000 {
        let den = 1 + rng.bounded(200) as u32;
        let num = rng.bounded(u64::from(den)) as u32;
        let lo = RsScore::new(num, den).unwrap();
        let hi = RsScore::new(num + 1, den).unwrap();
        assert!(hi.as_ratio() > lo.as_ratio());
        assert!(bin_rs_score(&hi) >= bin_rs_score(&lo));
    }

    // Pooling permutation invariance.
    let mk_study = |r: u32, t: u32, i: usize| RepStudy {
        rep_id: format!("s{i}"),
        source: repcite_core::corpus::RepSource::Mlrc2022,
        year: 2022,
        original_doi: "10.1/same".into(),
        n_findings_total: t,
        n_findings_reproduced: r,
    };
    for _ in 0..500 {
        let n = 1 + rng.bounded(6) as usize;
        let mut studies: Vec<RepStudy> = (0..n)
            .map(|i| {
                let t = 1 + rng.bounded(9) as u32;
                let r = rng.bounded(u64::from(t) + 1) as u32;
                mk_study(r, t, i)
            })
            .collect();
        let pooled = pool_paper_score(&studies).unwrap();
        rng.shuffle(&mut studies);
        assert_eq!(pooled, pool_paper_score(&studies).unwrap());
    }

    // Binning idempotence on already-binned values.
    for tenths in 0..=10u8 {
        let rebinned = bin_rs_score(&RsScore::new(u32::from(tenths), 10).unwrap());
        assert_eq!(rebinned, RsBin::from_tenths(tenths).unwrap());
    }
    println!("ACCEPTANCE 4 PASS — 16 dichotomous studies score 5 × 1.0 and 11 × 0.0; monotonicity, permutation invariance, and idempotence hold");
}

// ---------------------------------------------------------------------------
// Criterion 5: classifier property battery.

/// Dense random vector as a sparse one.
fn dense(values: &[f64]) -> repcite_core::textmodel::SparseVec {
    repcite_core::textmodel::SparseVec(
        values
            .iter()
            .enumerate()
            .filter(|(_, v)| **v != 0.0)
            .map(|(i, v)| (i as u32, *v))
            .collect(),
    )
}

/// Disjoint-keyword corpus: trivially linearly separable.
fn separable_corpus(total: usize) -> LabeledSet<SentimentLabel> {
    let fillers = ["model", "data", "training", "evaluation", "study", "result"];
    let keywords = [
        (SentimentLabel::Positive, ["replicable", "confirmed"]),
        (SentimentLabel::Negative, ["unreproducible", "contradicted"]),
        (SentimentLabel::Neutral, ["background", "overview"]),
    ];
    let mut items = Vec::new();
    for i in 0..total {
        let (label, words) = keywords[i % 3];
        let filler_a = fillers[i % fillers.len()];
        let filler_b = fillers[(i / 3) % fillers.len()];
        items.push(LabeledItem {
            context_id: format!("doc{i}"),
            text: format!(
                "the {filler_a} {} {} appears with {filler_b} in sample {i}",
                words[0], words[1]
            ),
            label,
        });
    }
    LabeledSet::new(items, 0).unwrap()
}

#[test]
fn criterion_5_classifier_property_battery() {
    use repcite_core::textmodel::linear::{loss_gradient, regularized_loss};
    use repcite_core::textmodel::softmax;

    // 5a: analytic vs central-difference gradients, 100 random instances.
    let mut rng = SplitMix64::new(0x9AD);
    let (n_samples, n_features, n_classes) = (20usize, 10usize, 3usize);
    for instance in 0..100 {
        let xs: Vec<_> = (0..n_samples)
            .map(|_| {
                let values: Vec<f64> =
                    (0..n_features).map(|_| rng.next_f64() * 2.0 - 1.0).collect();
                dense(&values)
            })
            .collect();
        let ys: Vec<usize> = (0..n_samples)
            .map(|_| rng.bounded(n_classes as u64) as usize)
            .collect();
        let mut weights: Vec<f64> = (0..n_classes * n_features)
            .map(|_| rng.next_f64() - 0.5)
            .collect();
        let mut bias: Vec<f64> = (0..n_classes).map(|_| rng.next_f64() - 0.5).collect();
        let l2 = 1e-3;
        let (grad_w, grad_b) =
            loss_gradient(&xs, &ys, &weights, &bias, n_features, n_classes, l2);
        let h = 1e-6;
        for p in 0..weights.len() {
            let original = weights[p];
            weights[p] = original + h;
            let up = regularized_loss(&xs, &ys, &weights, &bias, n_features, n_classes, l2);
            weights[p] = original - h;
            let down = regularized_loss(&xs, &ys, &weights, &bias, n_features, n_classes, l2);
            weights[p] = original;
            let numeric = (up - down) / (2.0 * h);
            let denom = numeric.abs().max(grad_w[p].abs()).max(1e-8);
            assert!(
                ((grad_w[p] - numeric) / denom).abs() < 1e-5,
                "instance {instance} weight {p}: analytic {} vs numeric {numeric}",
                grad_w[p]
            );
        }
        for p in 0..bias.len() {
            let original = bias[p];
            bias[p] = original + h;
            let up = regularized_loss(&xs, &ys, &weights, &bias, n_features, n_classes, l2);
            bias[p] = original - h;
            let down = regularized_loss(&xs, &ys, &weights, &bias, n_features, n_classes, l2);
            bias[p] = original;
            let numeric = (up - down) / (2.0 * h);
            let denom = numeric.abs().max(grad_b[p].abs()).max(1e-8);
            assert!(((grad_b[p] - numeric) / denom).abs() < 1e-5);
        }
    }

    // 5b: softmax normalization within 1e-9.
    for _ in 0..1000 {
        let scores: Vec<f64> = (0..3).map(|_| (rng.next_f64() - 0.5) * 100.0).collect();
        let probs = softmax(&scores);
        assert!((probs.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }

    // 5c: training-loss monotonicity over accepted steps.
    {
        let xs: Vec<_> = (0..40)
            .map(|_| {
                let values: Vec<f64> = (0..6).map(|_| rng.next_f64()).collect();
                dense(&values)
            })
            .collect();
        let ys: Vec<usize> = (0..40).map(|_| rng.bounded(3) as usize).collect();
        let mut weights = vec![0.0; 3 * 6];
        let mut bias = vec![0.0; 3];
        let mut lr = 0.5;
        let mut losses = vec![regularized_loss(&xs, &ys, &weights, &bias, 6, 3, 1e-4)];
        for _ in 0..200 {
            let (gw, gb) = loss_gradient(&xs, &ys, &weights, &bias, 6, 3, 1e-4);
            loop {
                let tw: Vec<f64> = weights.iter().zip(&gw).map(|(w, g)| w - lr * g).collect();
                let tb: Vec<f64> = bias.iter().zip(&gb).map(|(b, g)| b - lr * g).collect();
                let tl = regularized_loss(&xs, &ys, &tw, &tb, 6, 3, 1e-4);
                if tl <= *losses.last().unwrap() {
                    weights = tw;
                    bias = tb;
                    losses.push(tl);
                    break;
                }
                lr *= 0.5;
                assert!(lr > 1e-15, "no descent step found");
            }
        }
        assert!(losses.windows(2).all(|w| w[1] <= w[0]));
    }

    // 5d: bit-identical retrain.
    let set = separable_corpus(60);
    let a = SentimentClassifier::train(set.items(), ClassifierConfig::default()).unwrap();
    let b = SentimentClassifier::train(set.items(), ClassifierConfig::default()).unwrap();
    assert_eq!(
        serde_json::to_string(&a).unwrap(),
        serde_json::to_string(&b).unwrap()
    );

    // 5e: perfect 5-fold weighted F1 on a 200-document separable corpus.
    let started = Instant::now();
    let set = separable_corpus(200);
    let separable_report = cross_validate(&set, 5, 0xCAFE, |train| {
        let clf = SentimentClassifier::train(train.items(), ClassifierConfig::default())?;
        Ok(move |text: &str| clf.predict(text).0)
    })
    .unwrap();
    assert!(
        separable_report.mean_weighted_f1 >= 1.0 - 1e-12,
        "mean weighted F1 {} on separable corpus",
        separable_report.mean_weighted_f1
    );
    let separable_elapsed = started.elapsed();
    assert!(separable_elapsed.as_secs() < 60);

    // 5f: chance-level accuracy on label-permuted data, 20 seeds.
    let mut accuracies = Vec::new();
    for seed in 0..20u64 {
        let mut rng = SplitMix64::new(seed.wrapping_mul(0x9E3779B9) + 1);
        let words = [
            "alpha", "beta", "gamma", "delta", "epsilon", "zeta", "eta", "theta", "iota",
            "kappa", "lambda", "mu",
        ];
        let mut items = Vec::new();
        // Balanced labels assigned independently of the text.
        for i in 0..90 {
            let text: Vec<&str> = (0..8)
                .map(|_| words[rng.bounded(words.len() as u64) as usize])
                .collect();
            items.push(LabeledItem {
                context_id: format!("r{i}"),
                text: text.join(" "),
                label: SentimentLabel::CLASSES[i % 3],
            });
        }
        let mut permuted: Vec<SentimentLabel> = items.iter().map(|i| i.label).collect();
        rng.shuffle(&mut permuted);
        for (item, label) in items.iter_mut().zip(permuted) {
            item.label = label;
        }
        let set = LabeledSet::new(items, seed).unwrap();
        let report = cross_validate(&set, 5, seed, |train| {
            let clf = SentimentClassifier::train(train.items(), ClassifierConfig::default())?;
            Ok(move |text: &str| clf.predict(text).0)
        })
        .unwrap();
        accuracies.push(report.mean_accuracy);
    }
    let mean_accuracy: f64 = accuracies.iter().sum::<f64>() / accuracies.len() as f64;
    assert!(
        (mean_accuracy - 1.0 / 3.0).abs() <= 0.1,
        "label-permuted mean accuracy {mean_accuracy} should be 1/3 ± 0.1"
    );

    println!(
        "ACCEPTANCE 5 PASS — gradients within 1e-5 on 100 instances, softmax within 1e-9, monotone loss, bit-identical retrain, separable 5-fold mAF1 = {:.3} in {separable_elapsed:?}, permuted-label accuracy {mean_accuracy:.3}",
        separable_report.mean_weighted_f1
    );
}

// ---------------------------------------------------------------------------
// Criterion 6: metrics against hand-computed confusion matrices.

#[test]
fn criterion_6_weighted_metrics_match_hand_computed_values() {
    const TOL: f64 = 1e-12;
    struct Case {
        counts: Vec<u64>,
        weighted: [f64; 3], // precision, recall, f1
    }
    // Hand-computed with exact fractions from the gold-row-major matrices.
    let three_class_cases = [
        Case {
            counts: vec![5, 0, 0, 0, 3, 0, 0, 0, 2],
            weighted: [1.0, 1.0, 1.0],
        },
        Case {
            counts: vec![3, 0, 0, 3, 0, 0, 4, 0, 0],
            weighted: [0.09, 0.3, 0.13846153846153847],
        },
        Case {
            counts: vec![5, 2, 1, 1, 6, 1, 0, 2, 4],
            weighted: [0.703030303030303, 0.6818181818181818, 0.683982683982684],
        },
        Case {
            counts: vec![0, 0, 0, 2, 5, 0, 1, 0, 7],
            weighted: [1.0, 0.8, 0.8866666666666667],
        },
    ];
    for (i, case) in three_class_cases.iter().enumerate() {
        let matrix =
            ConfusionMatrix::<SentimentLabel>::from_counts(case.counts.clone()).unwrap();
        let report = weighted_prf(&matrix);
        assert!((report.weighted_precision - case.weighted[0]).abs() <= TOL, "case {i} P");
        assert!((report.weighted_recall - case.weighted[1]).abs() <= TOL, "case {i} R");
        assert!((report.weighted_f1 - case.weighted[2]).abs() <= TOL, "case {i} F1");
    }

    // The worked two-class example: gold [pos, pos, neg], pred [pos, neg, neg].
    use repcite_core::label::Polarity::{Negative as N, Positive as P};
    let report = weighted_prf(&confusion(&[P, P, N], &[P, N, N]).unwrap());
    let two_thirds = 2.0 / 3.0;
    assert!((report.per_class[P.index()].precision - 1.0).abs() <= TOL);
    assert!((report.per_class[P.index()].recall - 0.5).abs() <= TOL);
    assert!((report.per_class[P.index()].f1 - two_thirds).abs() <= TOL);
    assert!((report.per_class[N.index()].precision - 0.5).abs() <= TOL);
    assert!((report.per_class[N.index()].recall - 1.0).abs() <= TOL);
    assert!((report.weighted_f1 - two_thirds).abs() <= TOL);
    assert!((report.weighted_precision - 0.8333333333333334).abs() <= TOL);
    assert!((report.weighted_recall - two_thirds).abs() <= TOL);
    println!("ACCEPTANCE 6 PASS — weighted P/R/F1 match hand-computed values on 5 fixed matrices to 1e-12");
}

// ---------------------------------------------------------------------------
// Criterion 7: harvester against the recorded pagination fixture and the
// warm cache.

#[derive(Deserialize)]
struct PaginationManifest {
    paper_id: String,
    page_limit: usize,
    pages: Vec<usize>,
    citations: usize,
    contexts: usize,
}

#[test]
fn criterion_7_recorded_fixtures_and_warm_cache() {
    let manifest: PaginationManifest = serde_json::from_str(
        &fs::read_to_string(fixtures_dir().join("pagination/manifest.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(manifest.pages, vec![100, 100, 37]);

    let mut config = HarvestConfig::new(fixtures_dir().join("pagination/cache"));
    config.page_limit = manifest.page_limit;
    config.min_request_interval_ms = 0;
    let transport = Arc::new(CountingTransport::new(OfflineTransport));
    let client = S2Client::new(config, transport.clone(), Arc::new(ManualClock::new())).unwrap();

    let harvest = client.fetch_citation_contexts(&manifest.paper_id).unwrap();
    assert_eq!(harvest.citations_seen, manifest.citations);
    assert_eq!(harvest.contexts.len(), manifest.contexts);
    let mut ids: Vec<&str> = harvest
        .contexts
        .iter()
        .map(|c| c.context_id.as_str())
        .collect();
    ids.sort_unstable();
    ids.dedup();
    assert_eq!(ids.len(), manifest.contexts, "duplicate context ids in pagination union");
    assert_eq!(transport.requests(), 0, "warm cache must issue no network requests");

    // Warm-cache e2e harvest: zero requests and byte-identical corpus files.
    let out_a = tempfile::tempdir().unwrap();
    let out_b = tempfile::tempdir().unwrap();
    let run = |out: &Path| {
        let mut config = HarvestConfig::new(fixtures_dir().join("e2e/cache"));
        config.min_request_interval_ms = 0;
        let transport = Arc::new(CountingTransport::new(OfflineTransport));
        let client =
            S2Client::new(config, transport.clone(), Arc::new(ManualClock::new())).unwrap();
        let studies = load_repstudies(fixtures_dir().join("e2e/repstudies.csv")).unwrap();
        let (corpus, report) = repcite_harvest::harvest_corpus(&studies, &client).unwrap();
        assert_eq!(report.papers_resolved, report.papers_requested);
        assert!(report.accounts_for_all());
        assert_eq!(transport.requests(), 0);
        repcite_core::corpus::write_contexts(&corpus.contexts, out.join("corpus.jsonl")).unwrap();
        repcite_core::corpus::write_papers(&corpus.papers, out.join("papers.json")).unwrap();
    };
    run(out_a.path());
    run(out_b.path());
    for file in ["corpus.jsonl", "papers.json"] {
        assert_eq!(
            fs::read(out_a.path().join(file)).unwrap(),
            fs::read(out_b.path().join(file)).unwrap(),
            "{file} differs between warm-cache harvests"
        );
    }
    println!("ACCEPTANCE 7 PASS — pagination fixture yields 237/237 per its manifest, duplicate-free; warm-cache harvest issues 0 requests and is byte-identical");
}

// ---------------------------------------------------------------------------
// Criterion 8: full pipeline on the bundled fixture corpus.

fn repcite_binary() -> &'static str {
    env!("CARGO_BIN_EXE_repcite")
}

fn run_subcommand(config: &Path, dir: &Path, args: &[&str]) {
    let output = Command::new(repcite_binary())
        .arg("--config")
        .arg(config)
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .output()
        .expect("spawn repcite");
    assert!(
        output.status.success(),
        "`repcite {}` failed:\nstdout: {}\nstderr: {}",
        args.join(" "),
        String::from_utf8_lossy(&output.stdout),
        String::from_utf8_lossy(&output.stderr)
    );
}

#[test]
fn criterion_8_end_to_end_recovers_planted_trend() {
    let started = Instant::now();
    let work = tempfile::tempdir().unwrap();
    let fixtures = fixtures_dir();
    let out_dir = work.path().join("out");
    let config_path = work.path().join("config.toml");
    fs::write(
        &config_path,
        format!(
            "version = 1\nseed = 42\n\n[paths]\nrepstudies = {rep:?}\nlabels = {labels:?}\ncache_dir = {cache:?}\nout_dir = {out:?}\n\n[harvest]\noffline = true\nmin_request_interval_ms = 0\n\n[analysis]\nmin_neg = 5\n",
            rep = fixtures.join("e2e/repstudies.csv"),
            labels = fixtures.join("e2e/labels.csv"),
            cache = fixtures.join("e2e/cache"),
            out = out_dir,
        ),
    )
    .unwrap();

    for step in [
        vec!["harvest"],
        vec!["score"],
        vec!["build-gt"],
        vec!["train"],
        vec!["eval"],
        vec!["predict"],
        vec!["aggregate"],
        vec!["report"],
    ] {
        run_subcommand(&config_path, work.path(), &step);
    }

    // The analysis must recover the planted positive trend of N'_pos in
    // rs_bin: least-squares slope over surviving bins strictly positive.
    #[derive(Deserialize)]
    struct AnalysisFile {
        models: Vec<ModelBlock>,
    }
    #[derive(Deserialize)]
    struct ModelBlock {
        model: String,
        survivors: Vec<RowBlock>,
    }
    #[derive(Deserialize)]
    struct RowBlock {
        rs_bin: String,
        pos_frac: Option<f64>,
    }
    let analysis: AnalysisFile =
        serde_json::from_str(&fs::read_to_string(out_dir.join("analysis.json")).unwrap()).unwrap();
    assert_eq!(analysis.models.len(), 2);
    for model in &analysis.models {
        let points: Vec<(f64, f64)> = model
            .survivors
            .iter()
            .filter_map(|r| {
                r.pos_frac
                    .map(|f| (r.rs_bin.parse::<f64>().unwrap(), f))
            })
            .collect();
        assert!(
            points.len() >= 3,
            "{}: need at least 3 surviving bins, got {points:?}",
            model.model
        );
        let n = points.len() as f64;
        let sum_x: f64 = points.iter().map(|(x, _)| x).sum();
        let sum_y: f64 = points.iter().map(|(_, y)| y).sum();
        let sum_xy: f64 = points.iter().map(|(x, y)| x * y).sum();
        let sum_xx: f64 = points.iter().map(|(x, _)| x * x).sum();
        let slope = (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x);
        assert!(
            slope > 0.0,
            "{}: N'_pos-vs-rs_bin slope {slope} must be positive over {points:?}",
            model.model
        );
    }

    // The report and figures exist.
    assert!(out_dir.join("report.txt").exists());
    assert!(out_dir.join("figure3_flat.svg").exists());
    assert!(out_dir.join("figure4_hier.svg").exists());

    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < 60,
        "end-to-end pipeline took {elapsed:?}, budget 60 s"
    );
    println!(
        "ACCEPTANCE 8 PASS — full pipeline on the 30-paper fixture corpus recovers a positive N'_pos trend for both models in {elapsed:?}"
    );
}
