use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn ulindley(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ulindley"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_csv(dir: &tempfile::TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, body).unwrap();
    p
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn fit_reports_mle_with_schema_envelope() {
    let o = ulindley(&["fit", path(&fixture("x.csv")), "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["schema"], "ulindley.report");
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["command"], "fit");
    assert_eq!(v["theta_hat"].as_f64().unwrap(), 0.112813);
    assert_eq!(v["dataset"]["m"], 14);
}

#[test]
fn numbers_carry_six_significant_digits() {
    let o = ulindley(&["gof", path(&fixture("y.csv")), "--format", "csv"]);
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert!(row.contains("0.0791566"), "{row}");
    assert!(row.contains("0.459056"), "{row}");
}

#[test]
fn missing_rows_are_reported_on_stderr() {
    let o = ulindley(&["fit", path(&fixture("who_north_america.csv")), "--scale", "percent101"]);
    assert!(o.status.success());
    let err = stderr(&o);
    assert!(err.contains("dropped 9 missing"), "{err}");
    assert!(err.contains("3, 6, 7, 11, 14, 17, 18, 21, 24"), "{err}");
}

#[test]
fn percent101_maps_header_and_values() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_csv(&dir, "p.csv", "share\n99\n50\n");
    let o = ulindley(&["fit", path(&p), "--scale", "percent101", "--format", "json"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["dataset"]["m"], 2);
    // w = x/(1−x) for 99/101 and 50/101.
    let want = 99.0 / 2.0 + 50.0 / 51.0;
    assert!((v["dataset"]["t"].as_f64().unwrap() - want).abs() < 1e-3 * want);
}

#[test]
fn value_mapped_to_one_is_a_domain_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_csv(&dir, "h.csv", "100\n");
    let o = ulindley(&["fit", path(&p), "--scale", "divisor=100"]);
    assert_eq!(o.status.code(), Some(4));
    let err = stderr(&o);
    assert!(err.contains("line 1: 100 -> 1"), "{err}");
    assert!(err.contains("--scale"), "{err}");
}

#[test]
fn unscaled_percentages_are_a_domain_error() {
    let o = ulindley(&["fit", path(&fixture("who_south_america.csv"))]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn malformed_number_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_csv(&dir, "bad.csv", "v\n0.2\nabc\n");
    let o = ulindley(&["fit", path(&p)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("line 3"));
}

#[test]
fn bad_flags_are_usage_errors() {
    assert_eq!(ulindley(&["fit", path(&fixture("x.csv")), "--method", "bogus"]).status.code(), Some(2));
    assert_eq!(ulindley(&["fit", path(&fixture("x.csv")), "--method", "conjugate"]).status.code(), Some(2));
    assert_eq!(ulindley(&["fit", path(&fixture("x.csv")), "--format", "xml"]).status.code(), Some(2));
}

#[test]
fn bad_simulation_file_is_a_parse_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write_csv(&dir, "s.toml", "table = \"custom\"\nbogus = 1\n");
    let o = ulindley(&["simulate", path(&p)]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
}

#[test]
fn missing_file_is_an_io_error() {
    let o = ulindley(&["fit", "/nonexistent/data.csv"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn conjugate_fit_with_zero_beta() {
    let o = ulindley(&[
        "fit", path(&fixture("x.csv")), "--method", "conjugate", "--prior", "1,0,1", "--format", "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["posterior"]["beta"].as_f64().unwrap(), 14.0);
    assert_eq!(v["posterior"]["p"].as_f64().unwrap(), 29.0);
}

#[test]
fn compare_orders_samples_and_reports_the_record() {
    let o = ulindley(&[
        "compare",
        path(&fixture("who_north_america.csv")),
        path(&fixture("who_south_america.csv")),
        "--scale",
        "percent101",
        "--format",
        "json",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let v = json(&o);
    assert_eq!(v["swapped"], true);
    assert_eq!(v["m"], 12);
    assert_eq!(v["n"], 14);
    assert!((v["D_hat"].as_f64().unwrap() + 0.25967).abs() < 1e-4);
    for key in ["R_hat", "CI_R", "CI_D", "method", "q", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn sample_chain_splits_draws_and_summary() {
    let o = ulindley(&[
        "sample", "--data", path(&fixture("x.csv")), "--burn-in", "100", "--chain-length", "399",
    ]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 300);
    assert!(stderr(&o).contains("acceptance_rate"));

    let dir = tempfile::tempdir().unwrap();
    let draws = dir.path().join("draws.txt");
    let o = ulindley(&[
        "sample", "--data", path(&fixture("x.csv")), "--burn-in", "100", "--chain-length", "399",
        "--out", path(&draws), "--format", "json",
    ]);
    assert!(o.status.success());
    assert_eq!(std::fs::read_to_string(&draws).unwrap().lines().count(), 300);
    assert_eq!(json(&o)["chain_length"], 399);
}

#[test]
fn runs_are_reproducible_and_seed_sensitive() {
    let args = |seed: &'static str| vec!["sample", "--theta", "0.7", "-n", "20", "--seed", seed];
    let a = ulindley(&args("4"));
    let b = ulindley(&args("4"));
    let c = ulindley(&args("5"));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 20);
}

#[test]
fn simulate_writes_csv_and_text() {
    let dir = tempfile::tempdir().unwrap();
    let o = ulindley(&["simulate", path(&fixture("sim/custom.toml")), "--out", path(dir.path())]);
    assert!(o.status.success(), "{}", stderr(&o));
    let csv = std::fs::read_to_string(dir.path().join("custom.csv")).unwrap();
    assert!(csv.starts_with("kind,m,n,truth"));
    // Two estimators for the θ cell, one for the R cell.
    assert_eq!(csv.lines().count(), 4);
    assert!(dir.path().join("custom.txt").exists());
}
