use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

const C42: &str = "q 2 n 4 k 2\n1 1 0 0\n0 0 1 1\n";
const REP3: &str = "q 2 n 3 k 1\n1 1 1\n";

fn posetcode(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_posetcode"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn hierarchy_json() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c42.txt", C42);
    let o = posetcode(&["hierarchy", "--code", s(&c), "--poset", "antichain:4", "--json"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weights"], serde_json::json!([2, 4]));
    assert_eq!(v["method"], "theorem2");

    let o = posetcode(&[
        "hierarchy",
        "--code",
        s(&c),
        "--poset",
        "chain:4",
        "--method",
        "bruteforce",
        "--json",
    ]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["weights"], serde_json::json!([2, 4]));
    assert_eq!(v["witnesses"][0]["kind"], "subcode");
}

#[test]
fn classify_repetition_code() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "rep3.txt", REP3);
    let o = posetcode(&["classify", "--code", s(&c), "--poset", "chain:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "MDS d1=3");
}

#[test]
fn size_mismatch_is_validation_error() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c42.txt", C42);
    let o = posetcode(&["hierarchy", "--code", s(&c), "--poset", "chain:5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("poset size 5 ≠ code length 4"), "{}", stderr(&o));
}

#[test]
fn bad_inputs_name_file_and_line() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "bad.txt", "q 2 n 4 k 2\n1 1 0 0\n0 0 5 1\n");
    let o = posetcode(&["classify", "--code", s(&c), "--poset", "chain:4"]);
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("bad.txt") && err.contains("line 3"), "{err}");

    let c = write(&dir, "c42.txt", C42);
    let p = write(&dir, "cycle.txt", "n 4\n1 < 2\n2 < 3\n3 < 1\n");
    let o = posetcode(&["classify", "--code", s(&c), "--poset", s(&p)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("cycle"), "{}", stderr(&o));

    let o = posetcode(&[
        "classify",
        "--code",
        s(&dir.path().join("missing.txt")),
        "--poset",
        "chain:4",
    ]);
    assert_eq!(o.status.code(), Some(1));

    let o = posetcode(&["hierarchy", "--code", s(&c), "--poset", "chain:4", "--method", "nope"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn duality_prints_partition() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c42.txt", C42);
    let p = write(&dir, "p.txt", "n 4\n1 < 2\n3 < 4\n");
    let o = posetcode(&["duality", "--code", s(&c), "--poset", s(&p)]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("A: {") && out.contains("\nB: {"), "{out}");
    assert!(out.trim_end().ends_with("PASS"));

    let o = posetcode(&["duality", "--code", s(&c), "--poset", s(&p), "--json"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let mut all: Vec<u64> = v["a"]
        .as_array()
        .unwrap()
        .iter()
        .chain(v["b"].as_array().unwrap())
        .map(|x| x.as_u64().unwrap())
        .collect();
    all.sort();
    assert_eq!(all, [1, 2, 3, 4]);
    assert_eq!(v["pass"], true);
}

#[test]
fn distribution_json_shape() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c42.txt", C42);
    for method in ["enumerate", "moebius", "closed-form"] {
        let o = posetcode(&[
            "distribution",
            "--code",
            s(&c),
            "--poset",
            "antichain:4",
            "--method",
            method,
            "--json",
        ]);
        assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["counts"], serde_json::json!([1, 0, 2, 0, 1]));
        assert_eq!(v["method"], method);
        assert_eq!(v["classification"], "NMDS");
        assert_eq!(v["d1"], 2);
        assert_eq!(v["d2"], 4);
    }
}

#[test]
fn closed_form_rejects_other_codes() {
    let dir = TempDir::new().unwrap();
    // d1 = 1 for a code with a weight-one word
    let c = write(&dir, "c.txt", "q 2 n 4 k 2\n1 0 0 0\n0 1 1 1\n");
    let o = posetcode(&[
        "distribution",
        "--code",
        s(&c),
        "--poset",
        "antichain:4",
        "--method",
        "closed-form",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("d1 = 1"), "{}", stderr(&o));
}

#[test]
fn rank_reports_lemma_triple() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.txt", "q 3 n 5 k 2\n1 0 1 1 2\n0 1 1 2 0\n");
    let o = posetcode(&["rank", "--code", s(&c), "--set", "1,3,5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["set"], serde_json::json!([1, 3, 5]));
    assert_eq!(v["rho"], 2);
    let t = v["lemma1g"].as_array().unwrap();
    assert!(t[0] == t[1] && t[1] == t[2]);
    assert_eq!(3 - v["rho_perp"].as_i64().unwrap(), t[0].as_i64().unwrap());

    let o = posetcode(&["rank", "--code", s(&c), "--set", "0,2"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dependent_rows_warn() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.txt", "q 2 n 3 k 2\n1 1 0\n1 1 0\n");
    let o = posetcode(&["classify", "--code", s(&c), "--poset", "chain:3"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"), "{}", stderr(&o));
}

#[test]
fn selftest_passes_and_is_deterministic() {
    let a = posetcode(&["selftest", "--seed", "1", "--trials", "50", "--json"]);
    assert_eq!(a.status.code(), Some(0), "{}", stdout(&a));
    let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert!(v["mds_instances"].as_u64().unwrap() >= 1);
    assert!(v["nmds_instances"].as_u64().unwrap() >= 1);
    assert_eq!(v["failures"], serde_json::json!([]));
    let b = posetcode(&["selftest", "--seed", "1", "--trials", "50", "--json"]);
    assert_eq!(a.stdout, b.stdout);
    let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
    assert_eq!(again, v);
}

#[test]
fn selftest_rejects_zero_trials() {
    let o = posetcode(&["selftest", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn corrupted_rank_exits_two_with_reproducer() {
    let o = posetcode(&["selftest", "--seed", "5", "--trials", "3", "--corrupt-rank"]);
    assert_eq!(o.status.code(), Some(2));
    let out = stdout(&o);
    assert!(
        out.contains("FAIL trial") && out.contains("# code\nq ") && out.contains("# poset\nn "),
        "{out}"
    );
}

#[test]
fn outputs_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let c = write(&dir, "c.txt", "q 4 n 6 k 3\n1 0 0 1 2 3\n0 1 0 1 3 2\n0 0 1 1 1 1\n");
    let p = write(&dir, "p.txt", "n 6\n1 < 4\n2 < 4\n4 < 6\n");
    for cmd in ["hierarchy", "duality", "distribution", "classify"] {
        let args = ["--code", s(&c), "--poset", s(&p), "--json"];
        let a = posetcode(&[&[cmd][..], &args].concat());
        let b = posetcode(&[&[cmd][..], &args].concat());
        assert_eq!(a.status.code(), Some(0), "{cmd}: {}", stderr(&a));
        assert_eq!(a.stdout, b.stdout, "{cmd}");
        let v: Value = serde_json::from_str(&stdout(&a)).unwrap();
        let again: Value = serde_json::from_str(&serde_json::to_string(&v).unwrap()).unwrap();
        assert_eq!(again, v, "{cmd}");
    }
}
