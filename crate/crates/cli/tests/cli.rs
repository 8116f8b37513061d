use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn gallery(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/gallery").join(name)
}

fn dct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dct"))
        .args(args)
        .env_remove("DCT_SEARCH_CAP")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn path(p: &std::path::Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn semidirect_example_runs() {
    let out = dct(&["example", "semidirect-z2-z3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("length 1"));
    assert!(text.contains("delooping of S3"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn every_example_exits_zero_with_json() {
    for name in ["semidirect-z2-z3", "no-indexing", "trivial-pi2", "free-length4"] {
        let out = dct(&["--format", "json", "example", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        assert_eq!(json(&out)["passed"], Value::Bool(true));
    }
}

#[test]
fn no_indexing_file_has_no_indexings() {
    let f = gallery("no-indexing.dct");
    for variance in ["co", "op"] {
        let out = dct(&["--format", "json", "indexings", path(&f), "--decorated", "D", "--variance", variance]);
        assert_eq!(out.status.code(), Some(0));
        let v = json(&out);
        assert_eq!(v["count"], 0);
        assert_eq!(v["indexings"], Value::Array(vec![]));
    }
}

#[test]
fn build_axioms_length_and_corruption() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("neg.json");
    let f = gallery("semidirect-z2-z3.dct");
    let out = dct(&["build", path(&f), "--decorated", "D", "--indexing", "Neg", "--out", path(&model)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let out = dct(&["--format", "json", "axioms", path(&model)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["ok"], Value::Bool(true));

    let out = dct(&["--format", "json", "length", path(&model)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["length"], 1);

    let mut doc: Value = serde_json::from_str(&std::fs::read_to_string(&model).unwrap()).unwrap();
    let row = doc["vcomp"]["|1>g<0|"].as_object_mut().unwrap();
    let entry = row.get_mut("|1>g<0|").unwrap();
    *entry = Value::String(if entry == "1" { "2".into() } else { "1".into() });
    let corrupted = dir.path().join("corrupted.json");
    std::fs::write(&corrupted, serde_json::to_string(&doc).unwrap()).unwrap();
    let out = dct(&["--format", "json", "axioms", path(&corrupted)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["ok"], Value::Bool(false));
    assert!(!v["violations"]["violations"].as_array().unwrap().is_empty());
}

#[test]
fn malformed_model_is_a_validation_failure() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{ not json").unwrap();
    assert_eq!(dct(&["axioms", path(&bad)]).status.code(), Some(1));
    std::fs::write(&bad, r#"{"name": "x"}"#).unwrap();
    assert_eq!(dct(&["length", path(&bad)]).status.code(), Some(1));
}

#[test]
fn io_and_usage_errors() {
    assert_eq!(dct(&["validate", "/nonexistent/file.dct"]).status.code(), Some(3));
    assert_eq!(dct(&["validate"]).status.code(), Some(2));
    assert_eq!(dct(&["frobnicate"]).status.code(), Some(2));
    let f = gallery("semidirect-z2-z3.dct");
    assert_eq!(dct(&["validate", path(&f), "--bogus"]).status.code(), Some(2));
    assert_eq!(dct(&["example", "nope"]).status.code(), Some(2));
    assert_eq!(dct(&["indexings", path(&f), "--decorated", "Nope"]).status.code(), Some(2));
}

#[test]
fn parse_errors_report_positions() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.dct");
    std::fs::write(&f, "category C {\n  obj a;\n  mor f: a->b;\n}\n").unwrap();
    let out = dct(&["--format", "json", "validate", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["detail"]["kind"], "unresolved_reference");
    assert_eq!(v["detail"]["span"]["line"], 3);
    assert_eq!(v["detail"]["span"]["col"], 13);
}

#[test]
fn validate_reports_bad_tables() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("nonassoc.dct");
    // a complete table that is not associative
    std::fs::write(
        &f,
        "monoid M { elements e a b; unit e; op { (e,e)->e; (e,a)->a; (e,b)->b; (a,e)->a; (a,a)->b; (a,b)->b; (b,e)->b; (b,a)->b; (b,b)->a; } }\n",
    )
    .unwrap();
    let out = dct(&["validate", path(&f)]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL  monoid M"));
}

#[test]
fn search_cap_from_the_environment() {
    let f = gallery("semidirect-z2-z3.dct");
    let run = |cap: &str| {
        Command::new(env!("CARGO_BIN_EXE_dct"))
            .args(["indexings", path(&f), "--decorated", "D"])
            .env("DCT_SEARCH_CAP", cap)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(1));
    assert_eq!(run("lots").status.code(), Some(2));
    assert_eq!(run("100000").status.code(), Some(0));
    let out = dct(&["indexings", path(&f), "--decorated", "D", "--cap", "1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn minfact_and_pi2() {
    let f = gallery("free-length4.dct");
    let out = dct(&["--format", "json", "minfact", path(&f), "--word", "m0 U(alpha) m1 U(beta)", "--budget", "6"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["length"], 4);
    let out = dct(&["minfact", path(&f), "--word", "m0 U(alpha) m1 U(beta)", "--budget", "3"]);
    assert_eq!(out.status.code(), Some(1));
    let out = dct(&["--format", "json", "pi2", path(&gallery("semidirect-z2-z3.dct")), "--twocat", "B2OmegaZ3", "--object", "pt"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["elements"], serde_json::json!(["0", "1", "2"]));
}

#[test]
fn json_output_is_deterministic() {
    let a = dct(&["--format", "json", "example", "trivial-pi2"]).stdout;
    let b = dct(&["--format", "json", "example", "trivial-pi2"]).stdout;
    assert_eq!(a, b);
}
