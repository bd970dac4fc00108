mod support;

use support::{code, mtula, read_json};

fn stderr(out: &std::process::Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        vec!["sample", "--bogus"],
        vec!["sample", "--target", "gaussian", "--lambda", "-1"],
        vec!["sample", "--target", "banana", "--lambda", "0.1"],
        vec!["sample", "--target", "gaussian"],
        vec![
            "sample", "--target", "gaussian", "--lambda", "0.1", "--dim", "0",
        ],
        vec!["check", "--target", "gaussian", "--points", "0"],
        vec!["rate", "--target", "gaussian", "--lambdas", "0.1,-2"],
    ] {
        let out = mtula(dir.path(), &args);
        assert_eq!(code(&out), 2, "{args:?}: {}", stderr(&out));
    }
}

#[test]
fn empty_histogram_input_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("empty.csv"), "").unwrap();
    let out = mtula(
        dir.path(),
        &["histogram", "--input", "empty.csv", "--target", "gaussian"],
    );
    assert_eq!(code(&out), 2, "{}", stderr(&out));
}

#[test]
fn existing_outputs_need_force() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sample",
        "--target",
        "gaussian",
        "--dim",
        "2",
        "--lambda",
        "0.1",
        "--chains",
        "4",
        "--horizon",
        "1",
    ];
    assert_eq!(code(&mtula(dir.path(), &args)), 0);
    let before = std::fs::read(dir.path().join("samples.csv")).unwrap();
    assert_eq!(code(&mtula(dir.path(), &args)), 2);
    let mut forced = args.to_vec();
    forced.push("--force");
    assert_eq!(code(&mtula(dir.path(), &forced)), 0);
    assert_eq!(
        before,
        std::fs::read(dir.path().join("samples.csv")).unwrap()
    );
}

#[test]
fn sample_writes_manifest_and_meta() {
    let dir = tempfile::tempdir().unwrap();
    let out = mtula(
        dir.path(),
        &[
            "sample",
            "--target",
            "mixture",
            "--dim",
            "3",
            "--lambda",
            "0.05",
            "--chains",
            "8",
            "--horizon",
            "1",
            "--seed",
            "7",
        ],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let manifest = read_json(&dir.path().join("samples.manifest.json"));
    assert!(manifest["command"].as_str().unwrap().contains(" sample "));
    assert_eq!(manifest["resolved_config"]["seed"], 7);
    assert_eq!(manifest["resolved_config"]["dim"], 3);
    assert!(manifest["version"].as_str().unwrap().starts_with("mtula"));
    assert!(manifest["timestamp"].is_string());
    let outputs: Vec<&str> = manifest["outputs"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_str().unwrap())
        .collect();
    assert!(outputs.contains(&"samples.csv") && outputs.contains(&"samples.meta.json"));
    let meta = read_json(&dir.path().join("samples.meta.json"));
    assert_eq!(meta["manifest"], "samples.manifest.json");
    let csv = std::fs::read_to_string(dir.path().join("samples.csv")).unwrap();
    assert_eq!(csv.lines().count(), 9);
    assert_eq!(csv.lines().next().unwrap().split(',').count(), 4);
}

#[test]
fn config_file_is_overridden_by_flags() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("run.json"),
        r#"{"target": "gaussian", "dim": 4, "lambda": 0.2, "chains": 3, "horizon": 1.0, "seed": 5}"#,
    )
    .unwrap();
    let out = mtula(
        dir.path(),
        &["sample", "--config", "run.json", "--dim", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let cfg = &read_json(&dir.path().join("samples.manifest.json"))["resolved_config"];
    assert_eq!(cfg["dim"], 2);
    assert_eq!(cfg["seed"], 5);
    assert_eq!(cfg["lambda"], 0.2);
}

#[test]
fn universal_divergence_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = mtula(
        dir.path(),
        &[
            "sample",
            "--target",
            "double-well",
            "--dim",
            "2",
            "--lambda",
            "0.5",
            "--algorithm",
            "ula",
            "--chains",
            "10",
            "--horizon",
            "500",
        ],
    );
    assert_eq!(code(&out), 3, "{}", stderr(&out));
}

#[test]
fn constants_report_step_bound() {
    let dir = tempfile::tempdir().unwrap();
    let out = mtula(
        dir.path(),
        &["constants", "--target", "gaussian", "--dim", "2"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let report = read_json(&dir.path().join("constants.json"));
    assert_eq!(
        report["constants"]["lambda_max"]["value"].as_f64(),
        Some(0.125)
    );
    assert_eq!(report["manifest"], "constants.manifest.json");
}

#[test]
fn histogram_reads_target_from_meta() {
    let dir = tempfile::tempdir().unwrap();
    let sample = [
        "sample",
        "--target",
        "gaussian",
        "--dim",
        "2",
        "--lambda",
        "0.05",
        "--chains",
        "200",
        "--horizon",
        "5",
    ];
    assert_eq!(code(&mtula(dir.path(), &sample)), 0);
    let out = mtula(
        dir.path(),
        &["histogram", "--input", "samples.csv", "--bins", "10"],
    );
    assert_eq!(code(&out), 0, "{}", stderr(&out));
    let summary = read_json(&dir.path().join("histogram.summary.json"));
    assert_eq!(summary["target"], "gaussian");
    assert_eq!(summary["samples"], 200);
    let csv = std::fs::read_to_string(dir.path().join("histogram.csv")).unwrap();
    assert_eq!(
        csv.lines().next().unwrap(),
        "bin_center,empirical_density,analytic_density"
    );
    assert_eq!(csv.lines().count(), 11);
}
