use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsler-lab"))
        .args(args)
        .env_remove("FINSLER_LAB_THREADS")
        .output()
        .unwrap()
}

fn run_with_threads(threads: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_finsler-lab"))
        .args(args)
        .env("FINSLER_LAB_THREADS", threads)
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn report_on_a_zoo_entry() {
    let out = run(&["report", "--zoo", "square", "--points", "3"]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    let run = &v.as_array().unwrap()[0];
    assert_eq!(run["entry"], "square");
    assert_eq!(run["n"], 3);
    assert_eq!(run["reports"].as_array().unwrap().len(), 3);
    assert_eq!(run["summary"]["pass"], true);
    assert!(run["summary"]["max_norm_j"].as_f64().unwrap() > 1e-3);
}

#[test]
fn verify_family_succeeds() {
    let out = run(&["verify", "--family", "m=1", "a=1,1", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["conditions_hold"], true);
    assert!(v["failures"].as_array().unwrap().is_empty());
}

#[test]
fn verify_concrete_polynomial() {
    let out = run(&["verify", "--poly", "c0=1", "c1=u^2", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["case1_shape"][0]["ratio"], "1/4");
}

#[test]
fn verify_reports_the_case2_discrepancy() {
    let out = run(&["verify", "--family", "m=2", "a=1,1,1", "--n", "2,3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for k in v["kappa"].as_array().unwrap() {
        assert_eq!(k["engine"], "162");
        assert_eq!(k["printed"], 927);
        assert_eq!(k["agrees"], false);
    }
    assert!(!v["notes"].as_array().unwrap().is_empty());
}

#[test]
fn scan_csv_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("scan.csv");
    let out = run(&[
        "scan",
        "--zoo",
        "family-m2",
        "--points",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "x1,x2,x3,y1,y2,y3,b,s,normB,normJ,normJplus,detg"
    );
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    for row in rows {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 12);
        assert!(cells[8] <= 1e-7 && cells[9] <= 1e-7);
    }
}

#[test]
fn scan_is_deterministic_across_thread_counts() {
    let args = ["scan", "--zoo", "randers", "--points", "40", "--seed", "9"];
    let one = run_with_threads("1", &args);
    let four = run_with_threads("4", &args);
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, run(&args).stdout);
}

#[test]
fn ctilde_shifts_by_the_mean_cartan_term() {
    let out = run(&[
        "report",
        "--zoo",
        "family-m1",
        "--points",
        "4",
        "--ctilde",
        "0.5",
    ]);
    assert_eq!(out.status.code(), Some(0));
    for r in json(&out)[0]["reports"].as_array().unwrap() {
        let f = r["F"].as_f64().unwrap();
        let want = 0.5 * f * r["norms"]["I"].as_f64().unwrap();
        let got = r["norms"]["J_plus"].as_f64().unwrap();
        assert!(
            (got - want).abs() <= 1e-7 * want.max(1.0),
            "{got} vs {want}"
        );
    }
}

#[test]
fn zoo_list_names_every_entry() {
    let out = run(&["zoo", "list", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 10);
    assert!(text.lines().all(|l| l.contains(" n=2 ")));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["report"][..],
        &["report", "--zoo", "nope"],
        &["report", "--zoo", "randers", "--tol-alg", "-1"],
        &["report", "--zoo", "randers", "--n", "1"],
        &["report", "--zoo", "randers", "--format", "csv"],
        &["scan", "--zoo", "randers", "--n", "2,3", "--format", "csv"],
        &["verify", "--family", "m=2", "a=1,1"],
        &["verify", "--poly", "c0=1", "c2=u"],
        &["report", "--family", "m=1", "a=1,-3"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(1), "{args:?}");
    }
    assert_eq!(
        run_with_threads("0", &["zoo", "list"]).status.code(),
        Some(1)
    );
    assert_eq!(
        run_with_threads("many", &["zoo", "list"]).status.code(),
        Some(1)
    );
}

#[test]
fn failures_exit_two() {
    // floating point residuals cannot meet a 1e-300 tolerance
    let out = run(&[
        "report",
        "--zoo",
        "randers",
        "--points",
        "3",
        "--tol-alg",
        "1e-300",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json(&out)[0]["summary"]["pass"], false);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}
