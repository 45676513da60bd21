use std::fs;
use std::path::Path;

use frozen_spectra::cli::main_with;
use frozen_spectra::{Complex64, Problem};

const PI: f64 = std::f64::consts::PI;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("frozen-spectra").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn zero_problem(dir: &Path) -> String {
    let path = dir.join("zero.json");
    fs::write(&path, serde_json::to_string(&Problem::zero(1.0, 2.0).unwrap()).unwrap()).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn spectrum_of_the_zero_problem_is_n_squared() {
    let dir = tempfile::tempdir().unwrap();
    let problem = zero_problem(dir.path());
    let (code, out, err) = run(&["spectrum", "--problem", &problem, "--j", "0", "--n", "5"]);
    assert_eq!(code, 0, "{err}");
    let mut rows = csv::Reader::from_reader(out.as_bytes());
    assert_eq!(rows.headers().unwrap(), vec!["n", "re", "im", "kappa_re", "kappa_im"]);
    for (k, row) in rows.records().enumerate() {
        let row = row.unwrap();
        let n: usize = row[0].parse().unwrap();
        let re: f64 = row[1].parse().unwrap();
        assert_eq!(n, k + 1);
        assert!((re - (n * n) as f64).abs() < 1e-12, "row {n}: {re}");
    }
}

#[test]
fn malformed_problem_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, "{\"a\": 1.0, \"b\":").unwrap();
    let (code, _, err) = run(&["spectrum", "--problem", path.to_str().unwrap(), "--n", "3"]);
    assert_eq!(code, 2);
    assert!(err.contains("usage error"), "{err}");
}

#[test]
fn unknown_suite_is_a_usage_error() {
    let (code, _, err) = run(&["verify", "--suite", "everything"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown suite"), "{err}");
}

#[test]
fn nonuniq_demo_writes_both_pairs_and_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let bump = dir.path().join("bump.json");
    fs::write(
        &bump,
        r#"{"profile": {"breakpoints": [0.0, 0.1], "coeffs": [[[1.0, 0.0]]]}}"#,
    )
    .unwrap();
    let out_dir = dir.path().join("demo");
    let (code, out, err) = run(&[
        "nonuniq-demo",
        "--a",
        "1.0",
        "--b",
        "2.0",
        "--bump",
        bump.to_str().unwrap(),
        "--out-dir",
        out_dir.to_str().unwrap(),
        "--eigenvalues",
        "5",
    ]);
    assert_eq!(code, 0, "{err}");
    for name in ["pair1.json", "pair2.json", "coincidence.json"] {
        assert!(out_dir.join(name).exists(), "{name} missing");
    }
    let first: Problem = serde_json::from_str(&fs::read_to_string(out_dir.join("pair1.json")).unwrap()).unwrap();
    assert_eq!((first.a(), first.b()), (1.0, 2.0));
    let report: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert!(report["max_discrepancy"].as_f64().unwrap() <= 1e-10);
}

#[test]
fn charfn_export_of_the_zero_problem_is_phi_at_pi() {
    let dir = tempfile::tempdir().unwrap();
    let problem = zero_problem(dir.path());
    let csv_path = dir.path().join("grid.csv");
    for j in ["0", "1"] {
        let (code, _, err) = run(&[
            "charfn",
            "--problem",
            &problem,
            "--j",
            j,
            "--from",
            "-4",
            "--to",
            "90",
            "--count",
            "12",
            "--out",
            csv_path.to_str().unwrap(),
        ]);
        assert_eq!(code, 0, "{err}");
        let mut rows = csv::Reader::from_path(&csv_path).unwrap();
        let mut seen = 0;
        for row in rows.records() {
            let row = row.unwrap();
            let cell = |k: usize| row[k].parse::<f64>().unwrap();
            let l = Complex64::new(cell(0), cell(1));
            let sr = l.sqrt();
            let want = if j == "0" {
                (sr * PI).sin() / sr
            } else {
                (sr * PI).cos()
            };
            let got = Complex64::new(cell(2), cell(3));
            assert!((got - want).norm() < 1e-12, "lambda {l}: {got} vs {want}");
            seen += 1;
        }
        assert_eq!(seen, 12);
    }
}

#[test]
fn out_of_range_arguments_are_refused() {
    let dir = tempfile::tempdir().unwrap();
    let problem = zero_problem(dir.path());
    assert_eq!(run(&["spectrum", "--problem", &problem, "--j", "2"]).0, 2);
    assert_eq!(run(&["spectrum", "--problem", &problem, "--n", "0"]).0, 2);
    assert_eq!(run(&["frobnicate"]).0, 2);
}
