use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperlocus"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let o = run(&all);
    assert!(matches!(code(&o), 0 | 2), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn generate_nine_points_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("a9.json");
    let o = run(&["generate", "a4k1", "--k", "2", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let (rec, checks) = hyperlocus_core::atlas::load(&out).unwrap();
    assert_eq!(rec.len(), 9);
    assert!(checks.iter().any(|c| c.contains("weak table matches")));
    let raw: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(raw["manifest"]["command"], "generate");
    assert_eq!(raw["manifest"]["flags"]["k"], "2");
}

#[test]
fn generate_d4_and_dk() {
    let d4 = json(&["generate", "d4"]);
    assert_eq!(d4["points"].as_array().unwrap().len(), 12);
    assert_eq!(d4["metadata"]["validator"], "d4");
    let o = run(&["generate", "dk", "--variant", "seven"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("dk-seven: 7 points"));
    assert!(text.contains("(1 : 3 : -1)"));
    assert!(text.contains("(1 : 5/3 : 1/3)"));
}

#[test]
fn certify_exit_codes() {
    let o = run(&["certify", "a13-3-declared", "-d", "6", "-m", "5"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("31 > 30"));
    assert!(stdout(&o).contains("status: PROVEN"));

    let cert = json(&["certify", "a30-3-declared", "-d", "14", "-m", "13"]);
    assert_eq!(cert["certificate"]["kind"], "PlusOneCase");
    assert_eq!(cert["status"], "PROVEN");

    let o = run(&["certify", "dk-seven", "-d", "3", "-m", "2"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).contains("INCONCLUSIVE"));

    let o = run(&["certify", "d4", "-d", "3", "-m", "3"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn malformed_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"schema\": 1,\n \"name\": \"x\", \"N\": }").unwrap();
    let o = run(&["certify", path_str(&bad), "-d", "3", "-m", "2"]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));

    assert_eq!(code(&run(&["certify", "no-such-entry", "-d", "3", "-m", "2"])), 1);
    assert_eq!(code(&run(&["certify", "dk-seven", "-d", "3"])), 1);
    assert_eq!(code(&run(&["generate", "dk", "--variant", "eight"])), 1);
    // too few points for the square size
    assert_eq!(code(&run(&["certify", "dk-seven", "-d", "4", "-m", "2"])), 1);
    // a prime configuration cannot be moved to another prime
    assert_eq!(code(&run(&["--prime", "1099511627791", "analyze", "a4k1-2", "-d", "4", "-m", "3"])), 1);
}

#[test]
fn analyze_verdicts() {
    let dir = tempfile::tempdir().unwrap();
    let a9 = dir.path().join("a9.json");
    assert_eq!(code(&run(&["generate", "a4k1", "--k", "2", "--out", path_str(&a9)])), 0);
    let o = run(&["analyze", path_str(&a9), "-d", "4", "-m", "3"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("unexpected: yes"), "{text}");
    assert!(text.contains("F ≡ 0: ProbablyZero"), "{text}");
    assert!(text.contains("trials=20"));

    let text = stdout(&run(&["analyze", "dk-seven", "-d", "3", "-m", "2"]));
    assert!(text.contains("unexpected: no [PROVEN]"), "{text}");
    assert!(text.contains("locus nonzero"), "{text}");

    let rep = json(&["analyze", "d4", "-d", "3", "-m", "3"]);
    assert_eq!(rep["report"]["unexpected"], true);
    assert_eq!(rep["cone"], true);
    assert_eq!(rep["report"]["actual"], 1);
}

#[test]
fn locus_polynomials() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("l7.json");
    let o = run(&["locus", "dk-seven", "-d", "3", "-m", "2", "--sample", "10", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["zero"], false);
    assert_eq!(doc["polynomial"]["degree"], 6);
    assert_eq!(doc["multiplicities"], serde_json::json!([2, 2, 2, 2, 2, 2, 2]));
    assert_eq!(doc["samples"].as_array().unwrap().len(), 10);
    assert_eq!(doc["manifest"]["flags"]["sample"], "10");

    let nine = json(&["locus", "dk-nine", "-d", "4", "-m", "3"]);
    assert_eq!(nine["polynomial"]["degree"], 12);
    assert!(nine["multiplicities"].as_array().unwrap().iter().all(|m| m == 3));

    let zero = json(&["locus", "a4k1-2", "-d", "4", "-m", "3"]);
    assert_eq!(zero["zero"], true);

    // sampling needs real coordinates
    assert_eq!(code(&run(&["locus", "a4k1-2", "-d", "4", "-m", "3", "--sample", "4"])), 1);
}

#[test]
fn penrose_audit() {
    let o = run(&["audit-penrose"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("no 15-point subset has 6 points on every plane"), "{text}");
    assert!(text.contains("status: INCONCLUSIVE"));

    let trivial = stdout(&run(&["audit-penrose", "--remove", "0"]));
    assert!(trivial.contains("1  8^20"), "{trivial}");

    let doc = json(&["audit-penrose"]);
    assert_eq!(doc["audit"]["profiles"].as_array().unwrap().len(), 15504);
    assert_eq!(doc["audit"]["summary"]["uniform_profiles"], 0);
}

#[test]
fn outputs_do_not_depend_on_threads() {
    for args in [
        vec!["--format", "json", "analyze", "a4k1-2", "-d", "4", "-m", "3", "--seed", "5"],
        vec!["--format", "json", "audit-penrose"],
        vec!["locus", "dk-seven", "-d", "3", "-m", "2", "--sample", "6"],
        vec!["incidence", "fermat-z"],
    ] {
        let mut outs = Vec::new();
        for t in ["1", "4"] {
            let mut a = vec!["--threads", t];
            a.extend_from_slice(&args);
            let o = run(&a);
            assert_eq!(code(&o), 0);
            outs.push(o.stdout);
        }
        assert!(outs[0] == outs[1], "{args:?} differs across thread counts");
        assert!(outs[0] == run(&args).stdout, "{args:?} differs between runs");
    }
}

#[test]
fn incidence_and_catalog() {
    let doc = json(&["incidence", "a13-3"]);
    assert_eq!(doc["weak_table"], serde_json::json!({"3": 10, "4": 3, "5": 2}));
    assert_eq!(doc["double_counting"], true);
    let cat = json(&["catalog"]);
    assert!(cat["entries"].as_array().unwrap().len() >= 15);
}
