//! End-to-end tests of the `voalab` binary: exit codes, report rendering,
//! determinism across reruns and worker counts, and the auxiliary commands.

use std::path::Path;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_voalab"))
}

fn write_cfg(dir: &Path, text: &str) -> std::path::PathBuf {
    let path = dir.join("run.cfg");
    std::fs::write(&path, text).expect("write config");
    path
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

fn canonical_section(full_json: &str) -> serde_json::Value {
    let doc: serde_json::Value = serde_json::from_str(full_json).expect("valid JSON report");
    assert!(doc.get("timingsMs").is_some(), "timings live outside the canonical body");
    doc.get("canonical").expect("canonical body").clone()
}

#[test]
fn passing_run_exits_zero_with_a_full_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "lattice = A1\np = 2\nsuites = virasoro\nmaxWeight = 4\n");
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let body = canonical_section(&stdout_of(&out));
    assert_eq!(body["schemaVersion"], 1);
    assert_eq!(body["config"]["p"], "2");
    let checks = body["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    for c in checks {
        assert_eq!(c["status"], "pass", "{c}");
        assert!(c["paperAnchor"].as_str().unwrap().len() > 4);
    }
}

#[test]
fn failing_checks_exit_one_but_still_report() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "p = 2\nsuites = tv1-com2\n");
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let body = canonical_section(&stdout_of(&out));
    let checks = body["checks"].as_array().unwrap();
    let failing: Vec<&str> = checks
        .iter()
        .filter(|c| c["status"] == "fail")
        .map(|c| c["name"].as_str().unwrap())
        .collect();
    assert!(failing.contains(&"tv1-com2/screening-g-translation"), "{failing:?}");
    for c in checks.iter().filter(|c| c["status"] == "fail") {
        assert!(c["counterexample"].as_str().unwrap().contains("lhs = "));
    }
}

#[test]
fn unknown_suite_is_rejected_before_any_computation() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "p = 2\nsuites = virasoro,everything\n");
    let started = std::time::Instant::now();
    let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("everything"));
    assert!(started.elapsed().as_secs() < 5, "rejection must not wait for computations");
}

#[test]
fn malformed_config_and_missing_file_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    for bad in ["wibble = 3\n", "p = nope\n", "lattice = E8\n", "suites =\n"] {
        let cfg = write_cfg(dir.path(), bad);
        let out = bin().args(["run", "--config"]).arg(&cfg).output().unwrap();
        assert_eq!(out.status.code(), Some(2), "config {bad:?}");
    }
    let out = bin()
        .args(["run", "--config", dir.path().join("absent.cfg").to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reruns_and_worker_counts_leave_the_canonical_body_unchanged() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(
        dir.path(),
        "p = 2\nsuites = virasoro,screening-commute,triplet-kernel\nmaxWeight = 4\nseed = 11\n",
    );
    let first = dir.path().join("a.json");
    let second = dir.path().join("b.json");
    let out = bin().args(["run", "--config"]).arg(&cfg).arg("--out").arg(&first).output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .arg("--out")
        .arg(&second)
        .env("VOALAB_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let a = std::fs::read_to_string(&first).unwrap();
    let b = std::fs::read_to_string(&second).unwrap();
    assert_eq!(
        serde_json::to_string(&canonical_section(&a)).unwrap(),
        serde_json::to_string(&canonical_section(&b)).unwrap(),
        "canonical body must not depend on timing or worker count"
    );
}

#[test]
fn csv_format_renders_the_dimension_tables() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_cfg(dir.path(), "p = 2\nsuites = triplet-kernel\nmaxWeight = 4\n");
    let out = bin()
        .args(["run", "--config"])
        .arg(&cfg)
        .args(["--format", "csv"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("table,weight,dim"));
    assert!(text.contains("triplet-kernel-dims,0,1"));
}

#[test]
fn suites_subcommand_lists_the_whole_catalog() {
    let out = bin().arg("suites").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    for name in [
        "virasoro",
        "screening-commute",
        "triplet-kernel",
        "strong-generation",
        "c2-structure",
        "singlet-zhu",
        "tv1-com2",
        "locality",
        "log-deform",
        "wpp2-generators",
    ] {
        assert!(text.contains(name), "catalog missing {name}");
    }
}

#[test]
fn char_prints_coset_dimensions_as_csv() {
    let out = bin()
        .args(["char", "--p", "2", "--coset", "1/2", "--max-weight", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    // Exponentials e^{t a}, t in 1/2 + Z, carry weight 2t^2 - t: weight 0 at
    // t = 1/2, weight 1 at t = -1/2, weight 3 at t = 3/2; each contributes a
    // partition tower, so the dimensions are 1, 1+1, 2+1, 3+2+1.
    assert_eq!(stdout_of(&out), "weight,dim\n0,1\n1,2\n2,3\n3,6\n");
    let out = bin()
        .args(["char", "--p", "2", "--pprime", "4", "--coset", "0", "--max-weight", "2"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2), "non-coprime parameters must be rejected");
}
