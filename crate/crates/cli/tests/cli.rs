use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn seqrel(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_seqrel")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(&stdout(o)).unwrap()
}

fn polys(v: &Value) -> Vec<String> {
    v["result"]["relations"].as_array().unwrap().iter().map(|r| r["poly"].as_str().unwrap().to_string()).collect()
}

#[test]
fn run_bms_binomial() {
    let v = json(&seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--order", "drl(y<x)", "--bound", "x^3"]));
    assert_eq!(polys(&v), ["y^2", "x*y - y - 1", "x^2 - 2*x + 1"]);
    for r in v["result"]["relations"].as_array().unwrap() {
        assert_eq!(r["shift"]["kind"], "up_to");
        assert_eq!(r["shift"]["monomial"], "x");
    }
    assert_eq!(v["certified"], true);
    assert_eq!(v["queries"], 10);
}

#[test]
fn run_sfglm_and_rank() {
    let v = json(&seqrel(&["run", "--algo", "sfglm", "--generator", "pow23", "--order", "drl(y<x)", "--degree", "2"]));
    assert_eq!(polys(&v), ["y - 3", "x^2 - 4*x + 4"]);
    let bms = json(&seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--bound", "x^3"]));
    let rank = json(&seqrel(&["run", "--algo", "rank", "--generator", "binomial", "--bound", "x^3"]));
    assert_eq!(polys(&bms), polys(&rank));
}

#[test]
fn trace_log() {
    let o = seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--bound", "x^3", "--trace", "--format", "text"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("monomial ")).count(), 10);
    assert!(text.contains("staircase gains"));
    assert!(text.contains("x*y - 1 -> x*y - y - 1 (combine)"));
}

#[test]
fn compare_reports() {
    let v = json(&seqrel(&["compare", "--generator", "binomial", "--algos", "bms,sfglm", "--bound", "x^5", "--degree", "3"]));
    let runs = v["runs"].as_array().unwrap();
    assert_eq!(runs[0]["zero_dimensional"], true);
    assert_eq!(runs[1]["zero_dimensional"], false);
    let step = json(&seqrel(&["compare", "--generator", "step", "--algos", "bms,sfglm", "--bound", "y^3", "--terms", "1,y,x,y^2"]));
    assert_eq!(step["differing"].as_array().unwrap().len(), 1);
    let same = json(&seqrel(&["compare", "--generator", "sq", "--algos", "bms,bms", "--bound", "y^5"]));
    assert!(same["differing"].as_array().unwrap().is_empty());
    assert_eq!(same["runs"][0], same["runs"][1]);
}

#[test]
fn bench_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("b.csv");
    let o = seqrel(&["bench", "--family", "simplex", "-n", "2", "-d", "2..6", "--algos", "bms,sfglm", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let csv = fs::read_to_string(&out).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "family,n,d,algorithm,queries,mults,adds,staircase_size,dmax,wall_ms");
    assert!(lines[1].starts_with("simplex,2,2,bms,10,"));
    assert!(lines[2].starts_with("simplex,2,2,sfglm,15,"));
    assert_eq!(lines.len(), 9);
    let empty = seqrel(&["bench", "--family", "simplex", "-d", "4..4"]);
    assert!(empty.status.success());
    assert_eq!(stdout(&empty).lines().count(), 1);
}

#[test]
fn gorenstein() {
    let v = json(&seqrel(&["gorenstein", "--ideal", "x^2,x*y,y^2", "--order", "drl(y<x)", "--trials", "5"]));
    assert_eq!(v["verdict"], "NotGorenstein");
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("ideal.txt");
    fs::write(&f, "y^2\nx^2\n").unwrap();
    let v = json(&seqrel(&["gorenstein", "--ideal", f.to_str().unwrap(), "--trials", "5"]));
    assert_eq!(v["verdict"], "Gorenstein-likely");
}

#[test]
fn round_trip_verifies() {
    let dir = tempfile::tempdir().unwrap();
    for (algo, bound) in [("bms", ["--bound", "y^5"]), ("sfglm", ["--degree", "3"]), ("rank", ["--bound", "y^5"])] {
        let o = seqrel(&["run", "--algo", algo, "--generator", "sq", bound[0], bound[1]]);
        let v = json(&o);
        let f = dir.path().join(format!("{algo}.json"));
        fs::write(&f, stdout(&o)).unwrap();
        let check = json(&seqrel(&["verify", "--result", f.to_str().unwrap(), "--generator", "sq"]));
        assert_eq!(check["certified"], v["certified"]);
        assert_eq!(check["zero_dimensional"], v["zero_dimensional"]);
    }
    // the same relations do not hold for another sequence
    let o = seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--bound", "x^5", "--field", "Q"]);
    let f = dir.path().join("bin.json");
    fs::write(&f, stdout(&o)).unwrap();
    let bad = seqrel(&["verify", "--result", f.to_str().unwrap(), "--generator", "kron", "--field", "Q"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn deterministic_output() {
    let args = ["bench", "--family", "lshape", "-n", "3", "-d", "2..5", "--algos", "bms,rank,sfglm", "--seed", "9"];
    assert_eq!(seqrel(&args).stdout, seqrel(&args).stdout);
    let args = ["gorenstein", "--ideal", "x^2,x*y,y^2", "--seed", "4"];
    assert_eq!(seqrel(&args).stdout, seqrel(&args).stdout);
}

#[test]
fn exit_codes() {
    assert_eq!(seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--bound", "x^^3"]).status.code(), Some(2));
    assert_eq!(seqrel(&["run", "--algo", "nope", "--generator", "binomial", "--bound", "x"]).status.code(), Some(2));
    assert_eq!(seqrel(&["run", "--algo", "sfglm", "--generator", "binomial", "--bound", "x"]).status.code(), Some(2));
    assert_eq!(seqrel(&["run", "--algo", "bms", "--generator", "binomial", "--field", "Fp:12"]).status.code(), Some(2));
    assert_eq!(seqrel(&["frobnicate"]).status.code(), Some(2));

    let dir = tempfile::tempdir().unwrap();
    let table = dir.path().join("t.json");
    fs::write(&table, r#"{"dim": 2, "field": "Q", "shape": [2, 2], "entries": [1, 1, 1, 1]}"#).unwrap();
    let o = seqrel(&["run", "--algo", "bms", "--table", table.to_str().unwrap(), "--bound", "x^3"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("is needed"), "{err}");
    let ok = json(&seqrel(&["run", "--algo", "bms", "--table", table.to_str().unwrap(), "--bound", "x"]));
    assert_eq!(ok["certified"], true);

    let bad = dir.path().join("bad.json");
    fs::write(&bad, "{not json").unwrap();
    assert_eq!(seqrel(&["run", "--algo", "bms", "--table", bad.to_str().unwrap(), "--bound", "x"]).status.code(), Some(2));
}

#[test]
fn ideal_spec_input() {
    let dir = tempfile::tempdir().unwrap();
    let spec = dir.path().join("ideal.json");
    fs::write(
        &spec,
        r#"{"field": "Fp:101", "ideal": {"order": "drl(y<x)", "gb": ["y^2 - 1", "x - 2*y"], "initial": {"1": 3, "y": 5}}}"#,
    )
    .unwrap();
    let v = json(&seqrel(&["run", "--algo", "bms", "--spec", spec.to_str().unwrap(), "--bound", "x^3"]));
    assert_eq!(polys(&v), ["x - 2*y", "y^2 - 1"]);
    assert_eq!(v["result"]["field"], "Fp:101");
}
