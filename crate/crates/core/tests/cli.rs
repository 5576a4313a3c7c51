use std::fs;
use std::process::{Command, Output};

use mixnorm_approx::harness::{parse_csv, Report, CSV_HEADER};

fn mixapprox(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixapprox")).args(args).output().expect("run mixapprox")
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

const SPACE: [&str; 12] = ["--n1", "16", "--n2", "16", "--p", "1", "--q", "inf", "--u", "inf", "--v", "1"];

#[test]
fn norm_of_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "2 2\n1 -1\n3 0\n").unwrap();
    let p = path.to_str().unwrap();
    let flat = stdout(&mixapprox(&["norm", p, "--p", "1", "--u", "1"]));
    assert_eq!(flat.trim().parse::<f64>().unwrap(), 1.25);
    let sup = stdout(&mixapprox(&["norm", p, "--p", "inf", "--u", "inf"]));
    assert_eq!(sup.trim().parse::<f64>().unwrap(), 3.0);
}

#[test]
fn malformed_matrix_file_fails() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    fs::write(&path, "2 2\n1 2\n3\n").unwrap();
    let out = mixapprox(&["norm", path.to_str().unwrap()]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("row 2"));
}

#[test]
fn selftest_passes() {
    let out = mixapprox(&["selftest"]);
    let text = stdout(&out);
    assert!(text.lines().all(|l| l.starts_with("PASS")), "{text}");
}

#[test]
fn rates_csv_has_one_row_per_budget() {
    let mut args = vec!["rates"];
    args.extend(SPACE);
    args.extend(["--budgets", "4,8,12", "--measure", "6", "--trials", "20", "--algorithm", "random_cells"]);
    let text = stdout(&mixapprox(&args));
    assert_eq!(text.lines().next().unwrap(), CSV_HEADER);
    let records = parse_csv(&text).unwrap();
    assert_eq!(records.iter().map(|r| r.n).collect::<Vec<_>>(), vec![4, 8, 12]);
    assert!(records.iter().all(|r| r.experiment == "random_cells_mu6" && r.m.is_none()));
}

#[test]
fn rates_json_written_to_file_parses() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let mut args = vec!["rates"];
    args.extend(SPACE);
    args.extend(["--budgets", "4,8", "--measure", "1", "--trials", "10", "--format", "json"]);
    args.extend(["--out", path.to_str().unwrap()]);
    stdout(&mixapprox(&args));
    let report = Report::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report.records.len(), 2);
    assert!(report.records.iter().all(|r| r.m.is_some()));
}

#[test]
fn rejects_unsorted_budgets_and_unknown_algorithm() {
    let mut args = vec!["rates"];
    args.extend(SPACE);
    args.extend(["--budgets", "8,4"]);
    assert!(!mixapprox(&args).status.success());
    let mut args = vec!["rates"];
    args.extend(SPACE);
    args.extend(["--budgets", "4", "--algorithm", "magic"]);
    assert!(!mixapprox(&args).status.success());
}

#[test]
fn approx_on_input_file_prints_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("f.txt");
    fs::write(&path, "3 4\n0 0 0 0\n1 2 3 4\n0 0 0 0\n").unwrap();
    let out = mixapprox(&[
        "approx", "--n1", "3", "--n2", "4", "--p", "1", "--q", "2", "--u", "2", "--v", "1", "--budget", "4",
        "--algorithm", "a2", "--m", "3", "--input", path.to_str().unwrap(),
    ]);
    let text = stdout(&out);
    assert_eq!(text, "3 4\n0 0 0 0\n1 2 3 4\n0 0 0 0\n");
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("queries: 22"), "{err}");
}

#[test]
fn lower_bound_subcommand() {
    let text = stdout(&mixapprox(&[
        "lower-bound", "--n1", "6", "--n2", "4", "--p", "1", "--q", "2", "--u", "2", "--v", "1", "--budget", "1",
        "--measure", "2",
    ]));
    assert!(text.contains("atoms 8"));
    assert!(text.contains("subset size 6"));
    let bad = mixapprox(&[
        "lower-bound", "--n1", "6", "--n2", "4", "--p", "1", "--q", "2", "--u", "2", "--v", "1", "--budget", "5",
    ]);
    assert!(!bad.status.success());
}

#[test]
fn gap_reports_all_competitors() {
    let out = mixapprox(&["gap", "--budgets", "64", "--trials", "10", "--seed", "3"]);
    let records = parse_csv(&stdout(&out)).unwrap();
    let names: Vec<&str> = records.iter().map(|r| r.experiment.as_str()).collect();
    assert_eq!(
        names,
        ["gap_dispatch", "gap_dispatch_matched", "gap_fixed_rows", "gap_random_cells", "gap_zero"]
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("not computable"));
}

#[test]
fn estimate_study_output() {
    let text = stdout(&mixapprox(&["estimate", "--n2", "256", "--budgets", "8,16,32", "--trials", "50"]));
    let records = parse_csv(&text).unwrap();
    assert_eq!(records.len(), 3);
    assert!(records.iter().all(|r| r.query_count == r.n as u64));
}
