//! The binary: output determinism, formats and exit codes.

use std::process::{Command, Output};

fn cubesaw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubesaw")).args(args).output().unwrap()
}

#[test]
fn output_is_identical_across_thread_counts() {
    for args in [
        &["enumerate", "--n-dim", "4", "--profile"][..],
        &["lace", "--n-dim", "3", "--max-steps", "6"][..],
        &["critical", "--n-dim", "3", "--lambda", "2", "--p", "1/3"][..],
    ] {
        let one = cubesaw(&[args, &["--threads", "1"]].concat());
        let many = cubesaw(&[args, &["--threads", "4"]].concat());
        assert!(one.status.success(), "{}", String::from_utf8_lossy(&one.stderr));
        assert_eq!(one.stdout, many.stdout, "{args:?}");
    }
    let env = Command::new(env!("CARGO_BIN_EXE_cubesaw"))
        .args(["enumerate", "--n-dim", "4"])
        .env("CUBESAW_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(env.stdout, cubesaw(&["enumerate", "--n-dim", "4"]).stdout);
}

#[test]
fn counts_are_strings() {
    let out = cubesaw(&["enumerate", "--n-dim", "5", "--max-steps", "4"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["result"]["counts"], serde_json::json!(["1", "5", "20", "80", "300"]));
    assert_eq!(v["meta"]["tool_version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["meta"]["config_echo"]["command"]["subcommand"], "enumerate");
}

#[test]
fn csv_has_header_and_rows() {
    let out = cubesaw(&["enumerate", "--n-dim", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("n,weight,count"));
    assert_eq!(lines.count(), 4 * 3);
    assert!(!text.contains('\r'));
}

#[test]
fn rationals_in_exact_mode() {
    let out = cubesaw(&["bubble", "--n-dim", "2", "--z", "1/2"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["bubble"].as_str().unwrap().contains('/'));
    let out = cubesaw(&["bubble", "--n-dim", "2", "--z", "1/2", "--scalar-mode", "float"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(v["result"]["bubble"].is_f64());
}

#[test]
fn exit_codes_and_error_lines() {
    assert_eq!(cubesaw(&["verify", "--suite", "recursion", "--n-dim", "3", "--max-steps", "7"]).status.code(), Some(0));
    assert_eq!(cubesaw(&["verify", "--suite", "goldens"]).status.code(), Some(0));

    let usage = cubesaw(&["expand", "--order", "3"]);
    assert_eq!(usage.status.code(), Some(2));
    let domain = cubesaw(&["critical", "--n-dim", "2", "--lambda", "1/4"]);
    assert_eq!(domain.status.code(), Some(2));
    let budget = cubesaw(&["enumerate", "--n-dim", "5", "--max-steps", "12", "--budget", "1000"]);
    assert_eq!(budget.status.code(), Some(3));
    for out in [usage, domain, budget] {
        let err = String::from_utf8(out.stderr).unwrap();
        assert_eq!(err.trim_end().lines().count(), 1, "{err}");
        let v: serde_json::Value = serde_json::from_str(err.trim_end()).unwrap();
        assert!(v["error"]["kind"].is_string());
    }
}
