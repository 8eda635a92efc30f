//! CLI behavior: artifact dependency errors, exit-code classes, the
//! annotation loop, and re-run idempotence.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .canonicalize()
        .unwrap()
}

fn binary() -> &'static str {
    env!("CARGO_BIN_EXE_repcite")
}

/// Writes a config pointing at the bundled fixtures with a temp out dir.
fn fixture_config(dir: &Path) -> PathBuf {
    let fixtures = workspace_root().join("fixtures");
    let config_path = dir.join("config.toml");
    fs::write(
        &config_path,
        format!(
            "version = 1\nseed = 42\n\n[paths]\nrepstudies = {rep:?}\nlabels = {labels:?}\ncache_dir = {cache:?}\nout_dir = {out:?}\n\n[harvest]\noffline = true\nmin_request_interval_ms = 0\n\n[analysis]\nmin_neg = 5\n",
            rep = fixtures.join("e2e/repstudies.csv"),
            labels = dir.join("labels.csv"),
            cache = fixtures.join("e2e/cache"),
            out = dir.join("out"),
        ),
    )
    .unwrap();
    config_path
}

fn run(config: &Path, dir: &Path, args: &[&str]) -> std::process::Output {
    Command::new(binary())
        .arg("--config")
        .arg(config)
        .args(args)
        .current_dir(dir)
        .env("RUST_LOG", "error")
        .output()
        .unwrap()
}

#[test]
fn predict_before_train_names_the_producer() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture_config(dir.path());
    let output = run(&config, dir.path(), &["harvest"]);
    assert!(output.status.success());

    let output = run(&config, dir.path(), &["predict"]);
    assert!(!output.status.success());
    assert_eq!(output.status.code(), Some(1), "dependency errors are validation errors");
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(
        stderr.contains("repcite train"),
        "error should name the producing subcommand: {stderr}"
    );
}

#[test]
fn missing_input_file_exits_with_io_class() {
    let dir = tempfile::tempdir().unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        format!(
            "version = 1\n[paths]\nrepstudies = {rep:?}\nlabels = \"labels.csv\"\ncache_dir = \"cache\"\nout_dir = {out:?}\n",
            rep = dir.path().join("nonexistent.csv"),
            out = dir.path().join("out"),
        ),
    )
    .unwrap();
    let output = run(&config_path, dir.path(), &["harvest", "--offline"]);
    assert_eq!(output.status.code(), Some(2));
}

#[test]
fn malformed_repstudies_exits_with_validation_class() {
    let dir = tempfile::tempdir().unwrap();
    let bad_csv = dir.path().join("bad.csv");
    fs::write(
        &bad_csv,
        "rep_id,source,year,original_doi,n_findings_total,n_findings_reproduced\nR1,MLRC2020,2020,10.1/x,2,5\n",
    )
    .unwrap();
    let config_path = dir.path().join("config.toml");
    fs::write(
        &config_path,
        format!(
            "version = 1\n[paths]\nrepstudies = {rep:?}\nlabels = \"labels.csv\"\ncache_dir = \"cache\"\nout_dir = {out:?}\n",
            rep = bad_csv,
            out = dir.path().join("out"),
        ),
    )
    .unwrap();
    let output = run(&config_path, dir.path(), &["harvest", "--offline"]);
    assert_eq!(output.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&output.stderr);
    assert!(stderr.contains(":2:"), "row number expected in: {stderr}");
}

#[test]
fn annotate_appends_resumably_and_never_overwrites_without_flag() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture_config(dir.path());
    assert!(run(&config, dir.path(), &["harvest"]).status.success());

    let annotate = |input: &str, extra: &[&str]| -> String {
        let mut child = Command::new(binary())
            .arg("--config")
            .arg(&config)
            .arg("annotate")
            .args(extra)
            .current_dir(dir.path())
            .env("RUST_LOG", "error")
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::piped())
            .spawn()
            .unwrap();
        child
            .stdin
            .as_mut()
            .unwrap()
            .write_all(input.as_bytes())
            .unwrap();
        let output = child.wait_with_output().unwrap();
        assert!(output.status.success());
        String::from_utf8_lossy(&output.stdout).into_owned()
    };

    // First session labels two contexts, then quits.
    annotate("p\nn\nq\n", &[]);
    let labels_path = dir.path().join("labels.csv");
    let labels = fs::read_to_string(&labels_path).unwrap();
    assert_eq!(labels.lines().count(), 3); // header + 2 rows
    assert!(labels.contains("positive"));
    assert!(labels.contains("negative"));

    // Second session resumes: the first two contexts are not shown again
    // (their ids keep their labels), one more gets labeled.
    annotate("u\nq\n", &[]);
    let labels_after = fs::read_to_string(&labels_path).unwrap();
    assert_eq!(labels_after.lines().count(), 4);
    for line in labels.lines().skip(1) {
        assert!(
            labels_after.contains(line),
            "existing label {line:?} was changed without --relabel"
        );
    }

    // An unrecognized answer re-prompts instead of consuming the item.
    let stdout = annotate("bogus\ns\nq\n", &[]);
    assert!(stdout.contains("unrecognized"));
    assert_eq!(
        fs::read_to_string(&labels_path).unwrap().lines().count(),
        4,
        "skip must not add labels"
    );

    // Relabel mode may change an existing label.
    let first_id = fs::read_to_string(&labels_path)
        .unwrap()
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .to_string();
    annotate("n\nq\n", &["--relabel"]);
    let relabeled = fs::read_to_string(&labels_path).unwrap();
    assert!(relabeled.lines().any(|l| l.starts_with(&first_id) && l.ends_with("negative")));
}

#[test]
fn reruns_with_unchanged_inputs_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture_config(dir.path());
    let out = dir.path().join("out");

    for step in [vec!["harvest"], vec!["score"]] {
        assert!(run(&config, dir.path(), &step).status.success());
    }
    let artifacts = [
        out.join("papers.json"),
        out.join("corpus.jsonl"),
        out.join("scores.csv"),
        out.join("manifests/harvest.json"),
        out.join("manifests/score.json"),
    ];
    let before: Vec<Vec<u8>> = artifacts.iter().map(|p| fs::read(p).unwrap()).collect();

    for step in [vec!["harvest"], vec!["score"]] {
        assert!(run(&config, dir.path(), &step).status.success());
    }
    for (path, expected) in artifacts.iter().zip(&before) {
        assert_eq!(
            &fs::read(path).unwrap(),
            expected,
            "{} changed across identical re-runs",
            path.display()
        );
    }
}

#[test]
fn aggregate_from_table_bypass_works_without_models() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture_config(dir.path());
    let table = workspace_root().join("fixtures/table2.csv");
    let output = run(
        &config,
        dir.path(),
        &["aggregate", "--from-table2", table.to_str().unwrap()],
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    let out = dir.path().join("out");
    assert!(out.join("aggregate_m6.csv").exists());
    assert!(out.join("figure4_m7.svg").exists());
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("7.035"), "m6 top ratio expected in: {stdout}");
}

#[test]
fn external_predictions_round_trip_through_predict_and_eval() {
    let dir = tempfile::tempdir().unwrap();
    let config = fixture_config(dir.path());
    for step in [vec!["harvest"], vec!["score"]] {
        assert!(run(&config, dir.path(), &step).status.success());
    }

    // Build a predictions CSV from the gold labels of the fixture corpus.
    let corpus = repcite_core::corpus::read_contexts(dir.path().join("out/corpus.jsonl")).unwrap();
    let labels = repcite_core::groundtruth::read_labels_csv(
        workspace_root().join("fixtures/e2e/labels.csv"),
    )
    .unwrap();
    let preds_path = dir.path().join("external.csv");
    let mut content = String::from("context_id,label\n");
    for (id, label) in &labels {
        use repcite_core::label::ClassLabel;
        content.push_str(&format!("{id},{}\n", label.as_str()));
    }
    fs::write(&preds_path, content).unwrap();
    drop(corpus);

    // Import under a tag, then build-gt against the fixture labels and
    // evaluate the tagged predictions on the balanced subset.
    fs::copy(
        workspace_root().join("fixtures/e2e/labels.csv"),
        dir.path().join("labels.csv"),
    )
    .unwrap();
    let output = run(
        &config,
        dir.path(),
        &[
            "predict",
            "--external",
            preds_path.to_str().unwrap(),
            "--tag",
            "m3",
        ],
    );
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    assert!(run(&config, dir.path(), &["build-gt"]).status.success());
    let output = run(&config, dir.path(), &["eval", "--external", "m3"]);
    assert!(
        output.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&output.stderr)
    );
    // Predictions copied from gold labels must evaluate perfectly.
    let stdout = String::from_utf8_lossy(&output.stdout);
    assert!(stdout.contains("1.00"), "expected perfect scores: {stdout}");
}
