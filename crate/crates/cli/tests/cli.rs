use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn spreadlab(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(args)
        .current_dir(dir)
        .env_remove("SPREADLAB_BUDGET_CANDIDATES")
        .env_remove("SPREADLAB_BUDGET_ENUMERATION")
        .output()
        .unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn k4(dir: &Path) {
    let o = spreadlab(dir, &["generate", "--family", "complete", "--n", "4", "--r", "2", "--output", "k4.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn certify_k4_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let o = spreadlab(dir.path(), &["certify", "--mode", "q", "--q", "1/2", "--input", "k4.json"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["verdict"], "pass");
    assert_eq!(v["min_q"]["value"]["exact"], serde_json::json!({"num": "1", "den": "2"}));
    assert_eq!(v["run"]["command"], "certify");

    let o = spreadlab(dir.path(), &["certify", "--mode", "q", "--q", "2/5", "--input", "k4.json"]);
    assert_eq!(code(&o), 1);
    let v = json(&o);
    assert_eq!(v["verdict"], "fail");
    assert_eq!(v["witness"]["set"], serde_json::json!([0]));
    assert_eq!(v["witness"]["rhs"], serde_json::json!({"num": "12", "den": "5"}));
}

#[test]
fn tiered_and_multilevel_modes() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let o = spreadlab(dir.path(), &["certify", "--mode", "tiered", "--q", "5/6", "--r-seq", "2,1", "--input", "k4.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["min_q"]["value"]["exact"]["num"], "5");
    let o = spreadlab(dir.path(), &["certify", "--mode", "tiered", "--q", "1/2", "--r-seq", "2,1", "--input", "k4.json"]);
    assert_eq!(code(&o), 1);
    let o = spreadlab(dir.path(), &["certify", "--mode", "multilevel", "--q-list", "5/6", "--r-seq", "2,1", "--input", "k4.json"]);
    assert_eq!(code(&o), 0);
    // sampled mode never claims a pass
    let o = spreadlab(dir.path(), &["certify", "--mode", "q", "--q", "1/2", "--samples", "50", "--input", "k4.json"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["verdict"], "no_violation_found");
}

#[test]
fn threshold_full_set_is_certain() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let o = spreadlab(dir.path(), &["threshold", "--input", "k4.json", "--sizes", "4", "--trials", "10", "--seed", "1"]);
    assert_eq!(code(&o), 0);
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.lines().any(|l| l == "# command=threshold"));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows[0], "size,trials,successes,p_hat,lo,hi");
    assert!(rows[1].starts_with("4,10,10,1,"));
}

#[test]
fn threshold_exact_and_bound_columns() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["generate", "--family", "matchings", "--n", "4", "--output", "m4.json"]);
    assert_eq!(code(&o), 0);
    let o = spreadlab(
        dir.path(),
        &["threshold", "--input", "m4.json", "--sizes", "2..6", "--trials", "2000", "--exact", "--format", "json", "--bounds", "C=8,q=1/3,rseq=2,alpha=1/2"],
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0]["exact"], serde_json::json!({"num": "1", "den": "5"}));
    assert_eq!(rows[1]["exact"], serde_json::json!({"num": "3", "den": "5"}));
    assert!(v["bounds"]["entries"].as_array().unwrap().iter().any(|e| e["source"] == "second_moment"));
    let o = spreadlab(dir.path(), &["threshold", "--input", "m4.json", "--sizes", "2", "--bounds", "C=8,q=1/3,rseq=2,l=3"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    for args in [
        &["certify", "--mode", "q", "--q", "0.5", "--input", "k4.json"][..],
        &["certify", "--mode", "q", "--input", "k4.json"],
        &["certify", "--mode", "q", "--q", "1/2", "--input", "missing.json"],
        &["frobnicate"],
        &["certify", "--bogus"],
        &["fragment", "--input", "k4.json", "--r-seq", "2,1", "--q", "1/2", "--C", "2"],
    ] {
        let o = spreadlab(dir.path(), args);
        assert_eq!(code(&o), 2, "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    std::fs::write(dir.path().join("bad.json"), r#"{"n": 3, "edges": [[2, 1]]}"#).unwrap();
    let o = spreadlab(dir.path(), &["min-spread", "--input", "bad.json"]);
    assert_eq!(code(&o), 2);
    std::fs::write(dir.path().join("bad.json"), r#"{"n": 3, "edges": [[1, 3]]}"#).unwrap();
    let o = spreadlab(dir.path(), &["min-spread", "--input", "bad.json"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn budgets_come_from_env_with_flag_precedence() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let args = ["certify", "--mode", "q", "--q", "1/2", "--input", "k4.json"];
    let with_env = |extra: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_spreadlab"))
            .args(args)
            .args(extra)
            .current_dir(dir.path())
            .env("SPREADLAB_BUDGET_CANDIDATES", "3")
            .output()
            .unwrap()
    };
    let o = with_env(&[]);
    assert_eq!(code(&o), 3, "{}", String::from_utf8_lossy(&o.stderr));
    let o = with_env(&["--budget-candidates", "1000"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["run"]["budget_candidates"], "1000");
}

#[test]
fn version_flag() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["--version"]);
    assert_eq!(code(&o), 0);
    assert!(String::from_utf8(o.stdout).unwrap().starts_with("spreadlab "));
}

#[test]
fn fragment_trace_feeds_endgame_sampling() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["generate", "--family", "complete", "--n", "6", "--r", "2", "--output", "k6.json"]);
    assert_eq!(code(&o), 0);
    let o = spreadlab(dir.path(), &["fragment", "--input", "k6.json", "--r-seq", "2,1", "--q", "1/4", "--C", "2", "--seed", "7", "--audit", "--output", "t.json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let trace: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("t.json")).unwrap()).unwrap();
    assert_eq!(trace["rounds"][0]["size_after"], 15);
    assert_eq!(trace["audit"]["problems"], serde_json::json!([]));
    let o = spreadlab(dir.path(), &["threshold", "--trace", "t.json", "--sizes", "6", "--trials", "100", "--format", "json"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["extinct"], false);
    assert_eq!(v["rows"][0]["p_hat"], 1.0);

    let o = spreadlab(dir.path(), &["fragment", "--input", "k6.json", "--r-seq", "2,1", "--q", "1/4", "--C", "2", "--trials", "3"]);
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 4);
    for line in text.lines() {
        serde_json::from_str::<Value>(line).unwrap();
    }
}

#[test]
fn badpairs_and_expectation() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["generate", "--family", "matchings", "--n", "6", "--output", "m6.json"]);
    assert_eq!(code(&o), 0);
    let o = spreadlab(dir.path(), &["badpairs", "--input", "m6.json", "--k", "1", "--C", "4", "--q", "1/10", "--pn", "6"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let v = json(&o);
    assert_eq!(v["within_bound"], true);
    assert!(v["bound"]["coefficient"]["num"].is_string());
    let o = spreadlab(dir.path(), &["badpairs", "--input", "m6.json", "--k", "1", "--C", "2", "--q", "1/10", "--pn", "6"]);
    assert_eq!(code(&o), 2);

    k4(dir.path());
    let o = spreadlab(dir.path(), &["generate", "--family", "complete", "--n", "6", "--r", "2", "--output", "k6.json"]);
    assert_eq!(code(&o), 0);
    let o = spreadlab(dir.path(), &["expectation", "--input", "k6.json", "--s", "0,1", "--w", "2", "--k", "0", "--oracle"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    assert_eq!(v["value"], serde_json::json!({"num": "6", "den": "1"}));
    assert_eq!(v["agree"], true);
}

#[test]
fn bounds_command() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["bounds", "--C", "4", "--q", "1/100", "--r-seq", "3,2", "--n", "100"]);
    assert_eq!(code(&o), 0);
    let v = json(&o);
    let e = v["entries"].as_array().unwrap().iter().find(|e| e["source"] == "multi_round").unwrap().clone();
    assert_eq!(e["applicable"], false);
    let o = spreadlab(dir.path(), &["bounds", "--C", "8", "--q", "0.01", "--r-seq", "3,2", "--n", "100", "--K0", "2"]);
    let v = json(&o);
    let e = v["entries"].as_array().unwrap().iter().find(|e| e["source"] == "k0_single").unwrap().clone();
    assert_eq!(e["conditional"], true);
    assert!((e["value"].as_f64().unwrap() - (1.0 - 2.0 / 16.0)).abs() < 1e-12);
}

#[test]
fn results_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    let o = spreadlab(dir.path(), &["generate", "--family", "random", "--n", "12", "--r", "3", "--m", "25", "--seed", "4", "--output", "h.json"]);
    assert_eq!(code(&o), 0);
    let run = |jobs: &str| {
        let o = spreadlab(dir.path(), &["--jobs", jobs, "threshold", "--input", "h.json", "--sizes", "3..12", "--trials", "20000", "--seed", "8", "--format", "json"]);
        assert_eq!(code(&o), 0);
        json(&o)["rows"].clone()
    };
    assert_eq!(run("1"), run("4"));
}

#[test]
fn in_process_entry_point() {
    assert_eq!(spreadlab_cli::run(["spreadlab", "--version"]), 0);
    assert_eq!(spreadlab_cli::run(["spreadlab", "nope"]), 2);
}
