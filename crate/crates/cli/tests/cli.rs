use std::path::Path;
use std::process::{Command, Output};

use olhgen_core::metrics::{correlation, sig6};
use olhgen_core::seeds::{sixteen_run_hypercube, sixteen_run_nearly_orthogonal};
use olhgen_core::DesignMatrix;
use tempfile::TempDir;

fn olhgen(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_olhgen"))
        .args(args)
        .env("OLHGEN_CACHE", cache)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn parse_rows(csv: &str) -> DesignMatrix {
    let rows = csv
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').map(|f| f.trim().parse().unwrap()).collect())
        .collect();
    DesignMatrix::from_rows(rows).unwrap()
}

fn write_csv(path: &Path, d: &DesignMatrix) {
    let text: String = d
        .to_rows()
        .iter()
        .map(|r| r.iter().map(i64::to_string).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    std::fs::write(path, text).unwrap();
}

#[test]
fn construct_33_runs() {
    let tmp = TempDir::new().unwrap();
    let o = olhgen(tmp.path(), &["construct", "--n", "33"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = parse_rows(&stdout(&o));
    assert_eq!((d.runs(), d.factors()), (33, 12));
    assert!(d.is_olh());
}

#[test]
fn construct_impossible_size_exits_2() {
    let tmp = TempDir::new().unwrap();
    let o = olhgen(tmp.path(), &["construct", "--n", "6"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("4k+2"));
}

#[test]
fn construct_192_runs_to_file() {
    let tmp = TempDir::new().unwrap();
    let out = tmp.path().join("d.csv");
    let o = olhgen(tmp.path(), &["construct", "--n", "192", "--out", out.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("OLH(192, 48)"));
    let d = parse_rows(&std::fs::read_to_string(out).unwrap());
    assert_eq!((d.runs(), d.factors()), (192, 48));
    assert!(d.is_olh());
}

#[test]
fn construct_by_method() {
    let tmp = TempDir::new().unwrap();
    let o = olhgen(tmp.path(), &["construct", "--n", "64", "--method", "prop1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(parse_rows(&stdout(&o)).factors(), 32);
    let o = olhgen(tmp.path(), &["construct", "--n", "48", "--method", "prop1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = olhgen(
        tmp.path(),
        &["construct", "--n", "49", "--method", "theorem3", "--factor", "4", "--plus-one"],
    );
    assert!(o.status.success(), "{}", stderr(&o));
    let d = parse_rows(&stdout(&o));
    assert_eq!((d.runs(), d.factors()), (49, 12));
    let o = olhgen(tmp.path(), &["construct", "--n", "24", "--m", "3", "--method", "theorem1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert_eq!(parse_rows(&stdout(&o)).factors(), 3);
    let o = olhgen(tmp.path(), &["construct", "--n", "12", "--m", "7"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_sixteen_run_table() {
    let tmp = TempDir::new().unwrap();
    let all = tmp.path().join("all.csv");
    let head = tmp.path().join("head.csv");
    let b0 = sixteen_run_hypercube();
    write_csv(&all, &b0);
    write_csv(&head, &b0.first_columns(12).unwrap());
    let o = olhgen(tmp.path(), &["verify", head.to_str().unwrap(), "--expect", "olh"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let o = olhgen(tmp.path(), &["verify", all.to_str().unwrap(), "--expect", "olh"]);
    assert_eq!(o.status.code(), Some(1));
    let o = olhgen(tmp.path(), &["verify", all.to_str().unwrap(), "--expect", "lh"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn malformed_input_exits_64_with_position() {
    let tmp = TempDir::new().unwrap();
    let bad = tmp.path().join("bad.csv");
    std::fs::write(&bad, "1,-1\n-1,oops\n").unwrap();
    let o = olhgen(tmp.path(), &["verify", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("line 2, column 4"), "{}", stderr(&o));
    let bad = tmp.path().join("bad.json");
    std::fs::write(&bad, "{\"doubled\": [[1, -1],\n").unwrap();
    let o = olhgen(tmp.path(), &["metrics", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(64));
    assert!(stderr(&o).contains("line 2"), "{}", stderr(&o));
}

#[test]
fn bad_arguments_exit_64() {
    let tmp = TempDir::new().unwrap();
    assert_eq!(olhgen(tmp.path(), &["construct"]).status.code(), Some(64));
    let o = olhgen(tmp.path(), &["expand", "x.csv", "--factor", "3"]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn bound_reports_guarantee_and_recipe() {
    let tmp = TempDir::new().unwrap();
    let o = olhgen(tmp.path(), &["bound", "--n", "27"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("m* ≥ 7"), "{text}");
    assert!(text.contains("recipe: "), "{text}");
    assert_eq!(olhgen(tmp.path(), &["bound", "--n", "10"]).status.code(), Some(2));
}

#[test]
fn expand_catalog_seed() {
    let tmp = TempDir::new().unwrap();
    let seed = tmp.path().join("seed12x6.csv");
    let o = olhgen(tmp.path(), &["construct", "--n", "12", "--out", seed.to_str().unwrap()]);
    assert!(o.status.success());
    let o = olhgen(tmp.path(), &["expand", seed.to_str().unwrap(), "--factor", "16"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let d = parse_rows(&stdout(&o));
    assert_eq!((d.runs(), d.factors()), (192, 48));
    assert!(d.is_olh());
}

#[test]
fn search_is_reproducible_and_cached() {
    let tmp = TempDir::new().unwrap();
    let args = ["search", "--n", "5", "--m", "2", "--seed", "1", "--format", "json"];
    let first = olhgen(tmp.path(), &args);
    assert!(first.status.success(), "{}", stderr(&first));
    assert!(tmp.path().join("olh_5x2_1.json").exists());
    let second = olhgen(tmp.path(), &args);
    assert_eq!(first.stdout, second.stdout);
    let v: serde_json::Value = serde_json::from_slice(&first.stdout).unwrap();
    assert_eq!(v["source"], "search");
    assert_eq!(v["recipe"]["kind"], "search");
}

#[test]
fn round_trip_in_both_units() {
    let tmp = TempDir::new().unwrap();
    for (units, format) in [("doubled", "csv"), ("half", "csv"), ("doubled", "json"), ("half", "json")] {
        let path = tmp.path().join(format!("d_{units}.{format}"));
        let o = olhgen(
            tmp.path(),
            &["construct", "--n", "24", "--units", units, "--format", format, "--header", "--out", path.to_str().unwrap()],
        );
        assert!(o.status.success(), "{}", stderr(&o));
        let o = olhgen(tmp.path(), &["verify", path.to_str().unwrap(), "--units", units]);
        assert!(o.status.success(), "{units}/{format}: {}", stderr(&o));
        assert!(stdout(&o).contains("OLH(24, 6)"));
    }
}

#[test]
fn metrics_survive_a_half_unit_round_trip() {
    let tmp = TempDir::new().unwrap();
    let b = sixteen_run_nearly_orthogonal();
    let text: String = b
        .to_rows()
        .iter()
        .map(|r| r.iter().map(|&v| format!("{:.1}", v as f64 / 2.0)).collect::<Vec<_>>().join(",") + "\n")
        .collect();
    let path = tmp.path().join("nolh.csv");
    std::fs::write(&path, text).unwrap();
    let o = olhgen(tmp.path(), &["metrics", path.to_str().unwrap(), "--units", "half"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let report = correlation(&b).unwrap();
    let out = stdout(&o);
    assert!(out.contains(&format!("rho_max={}", sig6(report.rho_max))), "{out}");
    assert!(out.contains(&format!("rho_sq={}", sig6(report.rho_sq))), "{out}");
}

#[test]
fn json_envelope_reproduces_metrics() {
    let tmp = TempDir::new().unwrap();
    let o = olhgen(tmp.path(), &["construct", "--n", "64", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows: Vec<Vec<i64>> = serde_json::from_value(v["doubled"].clone()).unwrap();
    let d = DesignMatrix::from_rows(rows).unwrap();
    let report = correlation(&d).unwrap();
    assert!((report.rho_max - v["rho_max"].as_f64().unwrap()).abs() <= 1e-9);
    assert!((report.rho_sq - v["rho_sq"].as_f64().unwrap()).abs() <= 1e-9);
    assert_eq!(v["n"], 64);
    assert_eq!(v["m"], d.factors());
    assert_eq!(v["source"], "derived-recipe");
}
