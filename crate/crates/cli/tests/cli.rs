use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn lmg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lmg")).args(args).env_remove("LMG_LOG_LEVEL").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn sweep_to(path: &Path, extra: &[&str]) -> Output {
    let mut args = vec!["sweep", "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    lmg(&args)
}

fn csv_rows(text: &str) -> Vec<Vec<f64>> {
    text.lines().skip(1).map(|l| l.split(',').map(|f| f.parse().unwrap()).collect()).collect()
}

#[test]
fn sweep_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    let args = ["--gamma", "0.5", "--n-list", "2^8,2^10", "--h-step", "0.1"];
    assert_eq!(code(&sweep_to(&a, &args)), 0);
    assert_eq!(code(&sweep_to(&b, &["--jobs", "1", "--gamma", "0.5", "--n-list", "2^8,2^10", "--h-step", "0.1"])), 0);
    let (a, b) = (fs::read(a).unwrap(), fs::read(b).unwrap());
    assert_eq!(a, b);
    let text = String::from_utf8(a).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.starts_with("h,n,gamma,c_l1,c_r,asc_l1,asc_r,msc_l1,msc_r,tdl_c_l1,tdl_c_r,"));
    assert_eq!(text.lines().count(), 1 + 2 * 21);
}

#[test]
fn isotropic_sweep_matches_closed_form_columns() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("iso.csv");
    assert_eq!(code(&sweep_to(&out, &["--gamma", "1", "--n-list", "2^10", "--h-step", "0.1"])), 0);
    for row in csv_rows(&fs::read_to_string(out).unwrap()) {
        for k in 0..6 {
            assert!((row[3 + k] - row[9 + k]).abs() < 1e-10, "{row:?}");
        }
    }
}

#[test]
fn symmetric_phase_constants() {
    let out = lmg(&["sweep", "--h", "1.3", "--n-list", "2^16"]);
    assert_eq!(code(&out), 0);
    let row = &csv_rows(&String::from_utf8(out.stdout).unwrap())[0];
    let expect = [0.0, 0.0, 2.0, 2.0, 0.0, 0.0];
    let n = 65536f64;
    for k in 0..6 {
        // l1-MSC approaches its limit only as N^(-1/2), the rest as 1/N up
        // to a log factor in the rel-ent steered measures
        let bound = if k == 4 { 2.0 / n.sqrt() } else { 10.0 / n };
        assert!((row[3 + k] - expect[k]).abs() < bound, "{k}: {}", row[3 + k]);
    }
}

#[test]
fn json_sweep_is_versioned() {
    let out = lmg(&["sweep", "--h", "0.5", "--n-list", "64", "--format", "json"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["rows"].as_array().unwrap().len(), 1);
}

#[test]
fn config_errors_exit_4_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("never.csv");
    assert_eq!(code(&sweep_to(&out, &["--gamma", "2"])), 4);
    assert_eq!(code(&sweep_to(&out, &["--n-list", "2^q"])), 4);
    assert_eq!(code(&lmg(&["sweep", "--no-such-flag"])), 4);
    assert_eq!(code(&lmg(&["scaling", "--n-list", "2^10,2^8,2^12"])), 4);
    assert!(!out.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 0);

    let o = Command::new(env!("CARGO_BIN_EXE_lmg"))
        .args(["sweep", "--h", "1", "--n-list", "8"])
        .env("LMG_LOG_LEVEL", "loud")
        .output()
        .unwrap();
    assert_eq!(code(&o), 4);
    assert_eq!(code(&lmg(&["--help"])), 0);
}

#[test]
fn toy_scaling_recovers_minus_one() {
    let out = lmg(&["scaling", "--toy", "--format", "json", "--n-list", "2^8..2^16"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let toy = &v["measures"][0][1];
    assert!((toy["slope"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert!((toy["local_slope"].as_f64().unwrap() + 1.0).abs() < 1e-12);
    assert_eq!(v["pass"], true);
}

#[test]
fn scaling_writes_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let (csv, json) = (dir.path().join("s.csv"), dir.path().join("s.json"));
    let out = lmg(&[
        "scaling", "--h", "0.9", "--n-list", "2^8..2^12",
        "--out", csv.to_str().unwrap(), "--report", json.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(fs::read_to_string(csv).unwrap().lines().count(), 1 + 5 * 6);
    let v: Value = serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(v["schema_version"], "1");
    assert_eq!(v["phase"], "broken");
    for m in v["measures"].as_array().unwrap() {
        assert_eq!(m[1]["theory_slope"], -1.0);
    }
}

#[test]
fn table1_reports_deviation() {
    let out = lmg(&["table1", "--n", "2^12", "--gamma", "0.75", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    let row = &v["rows"][0];
    assert!((row["computed"]["a_xx"].as_f64().unwrap() - 0.5813).abs() < 0.02);
    assert_eq!(row["deviation"].as_array().unwrap().len(), 4);
}

fn suite<'a>(report: &'a Value, name: &str) -> &'a Value {
    report["suites"].as_array().unwrap().iter().find(|s| s["name"] == name).unwrap()
}

#[test]
fn injected_fault_fails_sector_suite() {
    let out = lmg(&["validate", "--quick", "--inject-fault"]);
    assert_eq!(code(&out), 2);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pass"], false);
    assert_eq!(suite(&v, "sector_vs_full_space")["pass"], false);
    assert_eq!(suite(&v, "partial_trace")["pass"], true);
}

#[test]
fn tolerance_override_uses_coarse_grid() {
    let out = lmg(&["validate", "--quick", "--tolerance", "1e-3"]);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["options"]["tolerance"], 1e-3);
    let msc = suite(&v, "msc_closed_vs_grid");
    for c in msc["checks"].as_array().unwrap() {
        assert_eq!(c["tolerance"], 1e-3);
        if c["name"].as_str().unwrap().ends_with(" l1") {
            assert_eq!(c["pass"], true, "{c}");
        }
    }
    assert_eq!(suite(&v, "sector_vs_full_space")["pass"], true);
    assert_eq!(code(&out), if v["pass"] == true { 0 } else { 2 });
}
