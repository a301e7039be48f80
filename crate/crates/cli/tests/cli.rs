use std::path::Path;
use std::process::{Command, Output};

use epkit::{CMatrix, MatrixFile};
use epkit_cli::{Payload, ReportFile};

fn epkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_epkit"))
        .args(args)
        .env_remove("EPKIT_SEED")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> ReportFile {
    ReportFile::from_json(std::str::from_utf8(&out.stdout).unwrap()).expect("valid report")
}

fn write_matrix(dir: &Path, name: &str, rows: &[[f64; 2]]) -> String {
    let path = dir.join(name);
    let file = MatrixFile::from_matrix(&CMatrix::from_real_rows(rows));
    std::fs::write(&path, serde_json::to_string(&file).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

fn classification(out: &Output) -> epkit::ClassificationReport {
    match report(out).payload {
        Payload::Classification(c) => c,
        other => panic!("unexpected payload {other:?}"),
    }
}

#[test]
fn classify_projection_and_jordan_cell() {
    let dir = tempfile::tempdir().unwrap();
    let out = epkit(&[
        "classify",
        "--input",
        &write_matrix(dir.path(), "p.json", &[[1.0, 0.0], [0.0, 0.0]]),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(classification(&out).is_ep);

    let out = epkit(&[
        "classify",
        "--input",
        &write_matrix(dir.path(), "j.json", &[[0.0, 1.0], [0.0, 0.0]]),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let c = classification(&out);
    assert!(!c.is_ep);
    assert_eq!(c.gamma, 1.0);
    assert_eq!(c.spectral_radius, 0.0);
}

#[test]
fn classify_reads_handwritten_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(
        &path,
        r#"{"version": "1", "rows": 2, "cols": 2, "data": [[[0, 1], [0, 0]], [[0, 0], [0, -1]]]}"#,
    )
    .unwrap();
    let out = epkit(&["classify", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let c = classification(&out);
    assert!(c.is_normal && c.is_ep);
    assert_eq!(c.rank, 2);
}

#[test]
fn bad_inputs_exit_2_without_report() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("malformed.json", "{\"version\": \"1\", \"rows\": 2"),
        (
            "ragged.json",
            r#"{"version":"1","rows":2,"cols":2,"data":[[[1,0],[0,0]],[[1,0]]]}"#,
        ),
        (
            "wide.json",
            r#"{"version":"1","rows":1,"cols":2,"data":[[[1,0],[0,0]]]}"#,
        ),
        ("version.json", r#"{"version":"2","rows":1,"cols":1,"data":[[[1,0]]]}"#),
    ];
    for (name, text) in cases {
        let path = dir.path().join(name);
        std::fs::write(&path, text).unwrap();
        let report_path = dir.path().join(format!("{name}.report"));
        let out = epkit(&[
            "classify",
            "--input",
            path.to_str().unwrap(),
            "--output",
            report_path.to_str().unwrap(),
        ]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(out.stdout.is_empty());
        assert!(!out.stderr.is_empty());
        assert!(!report_path.exists(), "{name}");
    }
    let out = epkit(&["classify", "--input", dir.path().join("missing.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_passes_and_unknown_id_fails() {
    let out = epkit(&[
        "verify", "thm2.1", "--dim", "6", "--rank", "4", "--trials", "200", "--seed", "42",
    ]);
    assert_eq!(out.status.code(), Some(0));
    match report(&out).payload {
        Payload::Verdict(v) => {
            assert_eq!(v.theorem_id, "thm2.1");
            assert_eq!((v.trials, v.failures), (200, 0));
        }
        other => panic!("unexpected payload {other:?}"),
    }
    let out = epkit(&["verify", "thm9.9"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let out = epkit(&["verify", "--theorem", "thm2.1", "--dim", "4", "--rank", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_is_byte_identical_across_runs() {
    let args = ["verify", "thm3.4", "--trials", "200", "--seed", "7"];
    let a = epkit(&args);
    let b = epkit(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_epkit"));
        cmd.args(["verify", "thm2.5", "--trials", "5"])
            .args(extra)
            .env_remove("EPKIT_SEED");
        if let Some(s) = env {
            cmd.env("EPKIT_SEED", s);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("9"), &[]), run(None, &["--seed", "9"]));
    assert_ne!(run(Some("9"), &[]), run(None, &[]));
    // An explicit flag wins over the environment.
    assert_eq!(run(Some("9"), &["--seed", "3"]), run(None, &["--seed", "3"]));
}

#[test]
fn injected_fault_exits_1_with_counterexample() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("suite.json");
    let out = epkit(&[
        "suite",
        "--trials",
        "4",
        "--inject-fault",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    let r = ReportFile::from_json(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let Payload::Suite(s) = r.payload else {
        panic!("expected a suite")
    };
    assert!(!s.passed);
    let failing = s.verdicts.iter().find(|v| v.failures > 0).expect("some failure");
    let cx = failing.counterexample.as_ref().expect("counterexample");
    assert!(!cx.matrices.is_empty());
}

#[test]
fn loose_tolerance_suite_still_passes() {
    let out = epkit(&["suite", "--seed", "1", "--trials", "20", "--tol-eq", "1e-2"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let r = report(&out);
    assert_eq!(r.tolerance.eq_atol, 1e-2);
    let Payload::Suite(s) = r.payload else {
        panic!("expected a suite")
    };
    assert_eq!(s.verdicts.len(), epkit_harness::THEOREM_IDS.len());
}

#[test]
fn model_tables() {
    let out = epkit(&["model", "diag_harmonic_truncated", "--n-max", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let Payload::LimitStudy(t) = report(&out).payload else {
        panic!("expected a table")
    };
    let gammas: Vec<f64> = t.rows.iter().map(|r| r.gamma).collect();
    let expected: Vec<f64> = (1..=10).map(|n| 1.0 / n as f64).collect();
    assert_eq!(gammas.len(), 10);
    for (g, e) in gammas.iter().zip(&expected) {
        assert!((g - e).abs() <= 1e-14);
    }

    let out = epkit(&["model", "--family", "diag_n", "--n-max", "5"]);
    assert_eq!(out.status.code(), Some(0));
    let Payload::LimitStudy(t) = report(&out).payload else {
        panic!("expected a table")
    };
    let radii: Vec<f64> = t.rows.iter().map(|r| r.spectral_radius).collect();
    assert_eq!(radii, [1.0, 2.0, 3.0, 4.0, 5.0]);

    assert_eq!(epkit(&["model", "bogus"]).status.code(), Some(2));
    assert_eq!(epkit(&["model", "diag_n", "--n-max", "1"]).status.code(), Some(2));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["frobnicate"][..],
        &["verify", "thm2.1", "--trials", "x"],
        &["classify"],
        &["suite", "--tol-eq", "2"],
    ] {
        let out = epkit(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
    assert_eq!(epkit(&["--help"]).status.code(), Some(0));
}

#[test]
fn reports_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let outputs = [
        epkit(&[
            "classify",
            "--input",
            &write_matrix(dir.path(), "r.json", &[[2.0, 1.0], [0.0, 3.0]]),
        ]),
        epkit(&["verify", "thm1.5", "--trials", "3", "--timing"]),
        epkit(&["model", "mult_inv_sqrt", "--n-max", "6"]),
    ];
    for out in outputs {
        let text = String::from_utf8(out.stdout).unwrap();
        let r = ReportFile::from_json(&text).unwrap();
        assert_eq!(r.to_json().unwrap(), text);
        assert_eq!(ReportFile::from_json(&r.to_json().unwrap()).unwrap(), r);
    }
}
