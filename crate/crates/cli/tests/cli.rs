use std::process::{Command, Output};

use serde_json::Value;

fn kmuforge(args: &str) -> Output {
    Command::new(env!("CARGO_BIN_EXE_kmuforge"))
        .args(args.split_whitespace())
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn golden(name: &str) -> String {
    let path = format!("{}/tests/golden/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn models_match_golden() {
    let out = kmuforge("models --json");
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        golden("models.json")
    );
    let out = kmuforge("models");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden("models.txt"));
}

#[test]
fn classify_matches_golden() {
    let out = kmuforge("classify --invariant -2");
    assert!(out.status.success());
    assert_eq!(
        String::from_utf8(out.stdout).unwrap(),
        golden("classify_minus_two.json")
    );
}

#[test]
fn classify_from_kmu() {
    let out = kmuforge("classify --k 0 --mu 4");
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["invariant"].as_f64(), Some(-1.0));
    assert_eq!(v["class_label"], "e");
}

#[test]
fn sasakian_kmu_is_an_error_record() {
    let out = kmuforge("classify --k 1 --mu 3");
    assert_eq!(out.status.code(), Some(1));
    let v = stdout_json(&out);
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["error"]["kind"], "sasakian_input");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        "report --kind lorentzian --c 0 --samples 3",
        "report --kind hyperbolic --c 0",
        "report --kind riemannian --c 0 --dim 1",
        "classify --k 0",
        "frobnicate",
    ] {
        let out = kmuforge(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn numerical_failure_writes_error_record() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let out = Command::new(env!("CARGO_BIN_EXE_kmuforge"))
        .args([
            "report",
            "--kind",
            "lorentzian",
            "--c",
            "1e6",
            "--no-timestamp",
            "--json",
        ])
        .arg(&path)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["error"]["kind"], "numerical");
}

#[test]
fn report_layout() {
    let out = kmuforge("report --kind riemannian --c -1 --samples 8 --seed 3 --no-timestamp");
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = stdout_json(&out);
    let mut keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    keys.sort();
    assert_eq!(
        keys,
        [
            "boeckx_invariant",
            "checks",
            "class_b_reading",
            "closed_form",
            "config",
            "d_homothety",
            "failed_checks",
            "frame_residuals",
            "h_spectrum",
            "integrability_residual",
            "kmu_fit",
            "pang",
            "passed",
            "schema_version",
            "symmetry",
        ]
    );
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["pang"]["class_label"], "b");
    assert_eq!(
        v["config"]["derivative_scheme"],
        "forward-mode dual numbers"
    );
    assert_eq!(v["config"]["rng"], "ChaCha8Rng");
    assert!(v["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["passed"] == true));
    // floats carry 17 significant digits
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"c\": -1.0000000000000000e0"));
}

#[test]
fn sasakian_report_has_no_pang_section() {
    let out = kmuforge("report --kind lorentzian --c -1 --samples 8 --no-timestamp");
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert_eq!(v["boeckx_invariant"], "sasakian");
    assert!(v.get("pang").is_none());
    assert!(v["d_homothety"].as_array().unwrap().is_empty());
    assert_eq!(v["h_spectrum"]["sasakian"], true);
}

#[test]
fn timestamp_present_by_default() {
    let out = kmuforge("report --kind riemannian --c 2 --samples 8");
    assert!(out.status.success());
    let v = stdout_json(&out);
    assert!(v["timestamp"].is_string());
    assert!(v["wall_clock_seconds"].as_f64().unwrap() >= 0.0);
}

#[test]
fn seed_changes_samples_but_not_verdict() {
    let run = |seed: u64| {
        kmuforge(&format!(
            "report --kind lorentzian --c 0.5 --samples 8 --seed {seed} --no-timestamp"
        ))
    };
    let (a, b) = (run(1), run(2));
    assert!(a.status.success() && b.status.success());
    assert_ne!(a.stdout, b.stdout);
    assert_eq!(
        stdout_json(&a)["kmu_fit"]["k"]
            .as_f64()
            .map(|k| (k + 1.25).abs() < 1e-8),
        Some(true)
    );
}
