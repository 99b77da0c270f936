//! Runs `verify --suite all --seed 42` under one and eight worker threads and
//! prints one line per acceptance criterion.  The bands themselves live in
//! `eigenrand::constants`.

use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

const CRITERIA: usize = 14;

fn verify(threads: &str) -> (Option<i32>, String) {
    let path: PathBuf = [env!("CARGO_TARGET_TMPDIR"), &format!("acceptance_threads_{threads}.json")].iter().collect();
    let out = Command::new(env!("CARGO_BIN_EXE_eigenrand"))
        .args(["verify", "--suite", "all", "--seed", "42", "--threads", threads, "--out"])
        .arg(&path)
        .output()
        .expect("verify runs");
    (out.status.code(), std::fs::read_to_string(&path).expect("report written"))
}

#[test]
fn acceptance() {
    let (code_1, json_1) = verify("1");
    let (code_8, json_8) = verify("8");
    let identical = json_1 == json_8;
    let report: Value = serde_json::from_str(&json_1).unwrap();
    let criteria = report["result"]["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), CRITERIA);

    let mut failed = Vec::new();
    for c in criteria {
        let id: usize = c["id"].as_str().unwrap().parse().unwrap();
        let mut pass = c["pass"].as_bool().unwrap();
        if id == CRITERIA {
            pass &= identical;
        }
        let checks = c["checks"].as_array().unwrap();
        let good = checks.iter().filter(|k| k["pass"].as_bool().unwrap()).count();
        println!("criterion {id:>2} {} {} ({good}/{} checks)", if pass { "PASS" } else { "FAIL" }, c["title"].as_str().unwrap(), checks.len());
        for k in checks.iter().filter(|k| !k["pass"].as_bool().unwrap()) {
            println!("    failed: {} = {} not in [{}, {}]", k["name"].as_str().unwrap(), k["value"], k["band_lo"], k["band_hi"]);
        }
        if let Some(e) = c["error"].as_str() {
            println!("    error: {e}");
        }
        if id == CRITERIA {
            println!("    reports identical under 1 and 8 threads: {identical}");
        }
        if !pass {
            failed.push(id);
        }
    }
    for s in report["result"]["supplementary"].as_array().unwrap() {
        println!("supplementary {:<8} {} {}", s["id"].as_str().unwrap(), if s["pass"].as_bool().unwrap() { "PASS" } else { "FAIL" }, s["title"].as_str().unwrap());
    }
    let all_pass = report["result"]["pass"].as_bool().unwrap();
    assert_eq!(code_1, Some(if all_pass { 0 } else { 1 }));
    assert_eq!(code_1, code_8);
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
