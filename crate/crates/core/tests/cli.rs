use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_affine-hecke")).args(args).output().expect("binary runs")
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

#[test]
fn empty_element_list_gives_an_empty_array() {
    let o = run(&["--type", "C2Q", "--q", "2,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o), Value::Array(vec![]));
}

#[test]
fn single_generator_has_zero_trace() {
    let o = run(&["--type", "A1Q", "--q", "2", "--element", "T1", "--resolution", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let r = &v[0];
    assert_eq!(r["lhs"], serde_json::json!({"re": 0.0, "im": 0.0}));
    assert!(r["abs_err"].as_f64().unwrap() < 1e-10);
}

#[test]
fn report_schema() {
    let o = run(&["--type", "G2Q", "--q", "2,3", "--element", "T1*T2 + 2*x[1,0]", "--element", "x[0,0]", "--resolution", "64"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    for r in rows {
        for key in ["schema_version", "type", "params", "element_src", "resolution", "lhs", "rhs", "breakdown", "abs_err", "rel_err"] {
            assert!(r.get(key).is_some(), "missing {key}");
        }
        assert_eq!(r["type"], "G2Q");
        assert_eq!(r["resolution"], 64);
        assert_eq!(r["params"].as_object().unwrap().len(), 2);
        for t in r["breakdown"].as_array().unwrap() {
            assert!(t["label"].is_string());
            assert!(t["value"]["re"].is_number() && t["value"]["im"].is_number());
        }
    }
    assert_eq!(rows[1]["lhs"], serde_json::json!({"re": 1.0, "im": 0.0}));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        &["--type", "E8", "--q", "2"][..],
        &["--type", "C2Q", "--q", "2"],
        &["--type", "A1Q", "--q", "-1"],
        &["--type", "A1Q", "--q", "2", "--element", "T1 +"],
        &["--type", "A1Q", "--q", "2", "--element", "T2"],
        &["--type", "A2Q", "--q", "2", "--element", "x[1]"],
        &["--type", "A1Q", "--q", "2", "--resolution", "4"],
        &["--q", "2"],
        &["--bogus"],
    ] {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
}

#[test]
fn failing_tolerance_exits_with_one() {
    let o = run(&["--type", "A1Q", "--q", "2", "--element", "x[1]*T1", "--resolution", "8", "--tolerance", "1e-300"]);
    assert_eq!(o.status.code(), Some(1), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(String::from_utf8_lossy(&o.stderr).contains("FAIL"));
}

#[test]
fn out_and_csv_files() {
    let (json, csv) = (tmp("out.json"), tmp("out.csv"));
    let o = run(&[
        "--type", "BC1Q", "--q", "2,3", "--element", "T0*T1", "--element", "x[1]", "--resolution", "64",
        "--out", json.to_str().unwrap(), "--csv", csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json).unwrap()).unwrap();
    let terms: usize = v.as_array().unwrap().iter().map(|r| r["breakdown"].as_array().unwrap().len()).sum();
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("type,params,element,term_label,value_re,value_im"));
    let body: Vec<&str> = lines.collect();
    assert_eq!(body.len(), terms);
    assert!(body[0].starts_with("BC1Q,q0=2;q1=3,T0*T1,"), "{}", body[0]);
}

#[test]
fn output_is_deterministic() {
    let args = ["--type", "C2P", "--q", "2,3", "--element", "T1*x[1,-1]", "--element", "(T0 + 0.5i)^2", "--resolution", "64"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn suite_at_low_resolution_uses_relaxed_tolerances() {
    let out = tmp("suite.json");
    let o = run(&["--suite", "--type", "C2Q", "--q", "2,3", "--resolution", "32", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["resolution"], 32);
    let rows = v["rows"].as_array().unwrap();
    let identity = rows.iter().find(|r| r["check"] == "plancherel").unwrap();
    assert_eq!(identity["status"], "pass");
    assert!(identity["detail"].as_str().unwrap().contains("tol 1e-3"));
}

#[test]
fn suite_skips_boundary_parameters() {
    let o = run(&["--suite", "--type", "BC2Q", "--q", "2,3,2", "--resolution", "32"]);
    assert_eq!(o.status.code(), Some(0));
    let table = String::from_utf8_lossy(&o.stdout);
    assert!(table.lines().any(|l| l.starts_with("plancherel") && l.contains("skipped")), "{table}");
    assert!(table.contains("0 failed"));
}
