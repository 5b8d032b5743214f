use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_parahoric"))
}

#[test]
fn profile_rank_one_midpoint() {
    let out = bin()
        .args(["profile", "--family", "A", "--rank", "1", "--point", "1/4,-1/4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["jumps"], serde_json::json!(["1/2", "1"]));
    let rows = v["rows"].as_array().unwrap();
    let pos = rows
        .iter()
        .find(|r| r["root"] == serde_json::json!([1, -1]))
        .unwrap();
    assert_eq!(pos["m"], 0);
    assert_eq!(pos["eps"], "1/2");
    assert_eq!(pos["reductive"], false);
}

#[test]
fn usage_errors_exit_2() {
    let out = bin()
        .args(["profile", "--family", "X", "--rank", "1", "--point", "0,0"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let out = bin()
        .args(["trace", "--config", "/nonexistent/path.json"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_group_suites_pass() {
    let out = bin().args(["verify", "--group"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    for check in v["group_suites"].as_array().unwrap() {
        assert_eq!(check["generated_matches_pattern"], true);
    }
}

#[test]
fn reports_are_byte_identical_across_runs() {
    let run = || {
        bin()
            .args(["verify", "--symbolic", "--max-denom", "2", "--max-level", "2"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
}
