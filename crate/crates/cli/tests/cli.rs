use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn ttk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ttk"))
        .args(args)
        .env_remove("TTK_SEARCH_BOUND")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is json")
}

fn certify_to(dir: &Path, args: &[&str]) -> std::path::PathBuf {
    let path = dir.join("cert.json");
    let mut full = vec!["certify-gaps"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["--out", path.to_str().unwrap()]);
    let o = ttk(&full);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

#[test]
fn info_reports() {
    let o = ttk(&["info", "3", "2", "2", "1"]);
    assert_eq!(code(&o), 0);
    let v = stdout_json(&o);
    assert_eq!(v["surface_slope"], 10);
    // b1 <= min(2, 1) = 1, so stabilization lowers the natural b2 <= 1 to 0
    assert_eq!(v["spectrum"][1]["upper"], 1);
    assert_eq!(v["spectrum"][2]["upper"], 0);

    let v = stdout_json(&ttk(&["info", "5", "7", "1", "3"]));
    assert_eq!(v["spectrum"][0]["exact"], 5);
    assert_eq!(v["torus_regime"], true);

    let v = stdout_json(&ttk(&["info", "6", "7", "6", "9"]));
    assert_eq!(v["hyperbolicity"]["link_status"], "unknown");
}

#[test]
fn negative_parameters_parse() {
    let v = stdout_json(&ttk(&["info", "5", "7", "1", "-4"]));
    assert_eq!(v["surface_slope"], 31);
}

#[test]
fn invalid_parameters_exit_two() {
    for args in [
        vec!["info", "4", "6", "1", "1"],
        vec!["info", "7", "9", "9", "1"],
        vec!["info", "1", "3", "0", "0"],
        vec!["braid", "3", "2", "-1", "0"],
        vec!["info", "x", "2", "2", "1"],
        vec!["info", "3", "2", "2", "1", "--format", "csv"],
    ] {
        let o = ttk(&args);
        assert_eq!(code(&o), 2, "{args:?}");
    }
    let o = ttk(&["info", "4", "6", "1", "1"]);
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "invalid_parameters");
}

#[test]
fn braid_and_invariants() {
    let o = ttk(&["braid", "3", "2", "2", "1", "--format", "text"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), "s:3 w:1 2 1 2 1 1\n");

    let v = stdout_json(&ttk(&["invariants", "2", "3", "0", "0"]));
    assert_eq!(v["alexander_text"], "t^-1 - 1 + t");
    assert_eq!(v["jones_text"], "-t^-4 + t^-3 + t^-1");
    assert_eq!(v["invariants"]["determinant"], 3);
    assert_eq!(v["torus_check"], "consistent");

    let v = stdout_json(&ttk(&["invariants", "3", "4", "0", "0", "--jones-cap", "5"]));
    assert_eq!(v["invariants"]["jones_status"], "too_large");
    assert_eq!(v["jones_text"], Value::Null);
}

#[test]
fn certify_gaps_examples() {
    let v = stdout_json(&ttk(&["certify-gaps", "3", "1", "1", "2", "3", "1", "1"]));
    assert_eq!(v["n"], 1296);
    assert_eq!(v["s"], 46675);
    assert_eq!(v["params"], serde_json::json!([2593, 3889, 1296, 46675]));

    let v = stdout_json(&ttk(&["certify-gaps", "1", "1", "1", "2", "3", "1", "1"]));
    assert_eq!(v["n"], 720);
    assert_eq!(v["bounds"]["b1"][0], 2);
}

#[test]
fn certify_gaps_exit_codes() {
    // χ(Q) >= 0 needs a degenerate pair, which is rejected as invalid
    assert_eq!(code(&ttk(&["certify-gaps", "5", "1", "0", "0", "1", "1", "1"])), 2);
    assert_eq!(code(&ttk(&["certify-gaps", "0", "1", "1", "2", "3", "1", "1"])), 2);
    assert_eq!(
        code(&ttk(&[
            "certify-gaps",
            "3",
            "1",
            "1",
            "2",
            "3",
            "1",
            "1",
            "--search-bound",
            "1000"
        ])),
        1
    );
    let o = Command::new(env!("CARGO_BIN_EXE_ttk"))
        .args(["certify-gaps", "3", "1", "1", "2", "3", "1", "1"])
        .env("TTK_SEARCH_BOUND", "1000")
        .output()
        .unwrap();
    assert_eq!(code(&o), 1);
}

#[test]
fn certify_then_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        ["3", "1", "1", "2", "3", "1", "1"],
        ["2", "1", "1", "2", "3", "1", "-1"],
        ["2", "1", "2", "3", "5", "2", "1"],
    ] {
        let path = certify_to(dir.path(), &args);
        let o = ttk(&["validate", path.to_str().unwrap()]);
        assert_eq!(code(&o), 0, "{args:?}: {}", String::from_utf8_lossy(&o.stdout));
    }
}

fn tampered(dir: &Path, edit: impl FnOnce(&mut Value)) -> Output {
    let path = certify_to(dir, &["3", "1", "1", "2", "3", "1", "1"]);
    let mut v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    edit(&mut v);
    let bad = dir.join("bad.json");
    fs::write(&bad, serde_json::to_string(&v).unwrap()).unwrap();
    ttk(&["validate", bad.to_str().unwrap()])
}

#[test]
fn tampered_b0_names_b0() {
    let dir = tempfile::tempdir().unwrap();
    let o = tampered(dir.path(), |v| v["bounds"]["b0"] = 2594.into());
    assert_eq!(code(&o), 1);
    let field = stdout_json(&o)["field"].as_str().unwrap().to_string();
    assert!(field.contains("b0"), "{field}");
    assert!(String::from_utf8_lossy(&o.stderr).contains("b0"));
}

#[test]
fn threshold_twist_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let o = tampered(dir.path(), |v| {
        v["s"] = (18 * 2593).into();
        v["params"][3] = (18 * 2593).into();
    });
    assert_eq!(code(&o), 1);
    assert_eq!(stdout_json(&o)["field"], "s");
}

#[test]
fn malformed_certificate_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{\"C\": 3").unwrap();
    assert_eq!(code(&ttk(&["validate", bad.to_str().unwrap()])), 2);
    assert_eq!(
        code(&ttk(&["validate", dir.path().join("missing.json").to_str().unwrap()])),
        2
    );
}

#[test]
fn enumerate_berge_rows() {
    let o = ttk(&["enumerate", "berge", "--m", "2..3", "--n", "1..5"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(&o.stdout[..]);
    let headers = rdr.headers().unwrap().clone();
    let dp = headers.iter().position(|h| h == "doubly_primitive").unwrap();
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| &r[dp] == "true"));
}

#[test]
fn enumerate_dean1_constraints() {
    let o = ttk(&["enumerate", "dean1", "--m", "2", "--n", "3..4", "--sign", "-1"]);
    assert_eq!(code(&o), 0);
    let mut rdr = csv::Reader::from_reader(&o.stdout[..]);
    let headers = rdr.headers().unwrap().clone();
    let col = |name| headers.iter().position(|h| h == name).unwrap();
    let (ri, ro) = (col("r_identity"), col("range_ok"));
    let rows: Vec<_> = rdr.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| &r[ri] == "true" && &r[ro] == "true"));
}

#[test]
fn enumerate_rejects_bad_ranges() {
    assert_eq!(code(&ttk(&["enumerate", "berge", "--m", "2", "--n", "0..0"])), 2);
    assert_eq!(code(&ttk(&["enumerate", "berge", "--m", "2", "--n", "5..1"])), 2);
    assert_eq!(code(&ttk(&["enumerate", "berge", "--m", "a..b", "--n", "1"])), 2);
    assert_eq!(
        code(&ttk(&["enumerate", "berge", "--m", "2", "--n", "1", "--sign", "2"])),
        2
    );
    assert_eq!(
        code(&ttk(&["enumerate", "dean2", "--l", "1", "--m", "2", "--n", "2"])),
        2
    );
}

#[test]
fn oracle_suites_pass() {
    let o = ttk(&["oracle", "torus"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout_json(&o)["passed"], true);
    assert_eq!(code(&ttk(&["oracle", "symmetry"])), 0);
}

#[test]
fn corrupted_burau_flags_trefoil() {
    let o = ttk(&["oracle", "torus", "--corrupt-burau"]);
    assert_eq!(code(&o), 1);
    let v = stdout_json(&o);
    let failures = v["suites"][0]["failures"].as_array().unwrap();
    assert!(failures.iter().any(|f| f["params"][0] == 2 && f["params"][1] == 3));
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["certify-gaps", "3", "1", "1", "2", "3", "1", "1"],
        vec!["info", "7", "9", "4", "2"],
        vec!["enumerate", "dean2", "--l", "2..4", "--m", "2..4", "--n", "2..20"],
        vec!["oracle", "all"],
    ] {
        let a = ttk(&args);
        let b = ttk(&args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn json_has_no_floats() {
    let o = ttk(&["certify-gaps", "3", "1", "1", "2", "3", "1", "1"]);
    fn walk(v: &Value) {
        match v {
            Value::Number(n) => assert!(n.is_i64() || n.is_u64(), "{n}"),
            Value::Array(a) => a.iter().for_each(walk),
            Value::Object(m) => m.values().for_each(walk),
            _ => {}
        }
    }
    walk(&stdout_json(&o));
}
