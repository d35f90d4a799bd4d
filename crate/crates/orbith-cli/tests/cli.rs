//! End-to-end checks of the binary: exit codes, determinism, formats.

use std::process::{Command, Output};

fn orbith(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbith"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn orbits_listing_counts() {
    let out = orbith(&["orbits", "A2"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().map(str::trim).collect();
    assert_eq!(lines.len(), 4);
    let first: serde_json::Value = serde_json::from_str(lines[0]).unwrap();
    assert_eq!(first["orbit"]["dimM"], 6);
    assert_eq!(first["orbit"]["sigmaCount"], 6);

    let out = orbith(&["orbits", "A1"]);
    assert_eq!(stdout(&out).lines().count(), 2);
}

#[test]
fn bad_type_is_usage_error() {
    let out = orbith(&["orbits", "Z9"]);
    assert_eq!(out.status.code(), Some(2));
    let out = orbith(&["verify", "C2"]);
    assert_eq!(out.status.code(), Some(2));
    let out = orbith(&["nonsense-subcommand"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn verify_full_flag_confirms() {
    let out = orbith(&["verify", "A2", "--full-flag"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7); // 6 reports + summary
    for line in &lines[..6] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert_eq!(v["verdict"], "confirmed");
    }
    let summary: serde_json::Value = serde_json::from_str(lines[6]).unwrap();
    assert_eq!(summary["confirmed"], 6);

    let out = orbith(&["verify", "A1xA1", "--full-flag"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("\"trivial\":4"));
}

#[test]
fn verify_replay_logs_derivations() {
    let out = orbith(&["verify", "G2", "--full-flag", "--replay"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let first: serde_json::Value = serde_json::from_str(text.lines().next().unwrap()).unwrap();
    assert_eq!(first["verdict"], "confirmed");
    assert_eq!(first["replay"]["steps"].as_array().unwrap().len(), 5);
}

#[test]
fn sweep_csv_and_exit() {
    let out = orbith(&["sweep", "--types", "A1,A2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("type,s,sigmaIndex"));
    assert!(text.contains("A2,,5,6,3,1,1,confirmed"));

    let out = orbith(&["sweep", "--types", ""]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gk_reports_are_seed_deterministic() {
    let a = orbith(&["gk", "A2", "--samples", "5", "--seed", "7"]);
    let b = orbith(&["gk", "A2", "--samples", "5", "--seed", "7"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let last = text.lines().last().unwrap();
    let summary: serde_json::Value = serde_json::from_str(last).unwrap();
    assert_eq!(summary["violations"], 0);
    assert_eq!(summary["samples"], 5);

    let c = orbith(&["gk", "A2", "--samples", "5", "--seed", "8"]);
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn config_file_supplies_defaults() {
    let dir = std::env::temp_dir().join(format!("orbith-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let cfg = dir.join("run.json");
    std::fs::write(&cfg, r#"{"types": ["A1"], "seed": 7}"#).unwrap();
    let out = orbith(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.lines().count() == 4); // 3 reports + summary
    assert!(text.contains("\"type\":\"A1\""));

    std::fs::write(&cfg, r#"{"unknownField": 3}"#).unwrap();
    let out = orbith(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn out_file_receives_reports() {
    let dir = std::env::temp_dir().join(format!("orbith-out-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("reports.jsonl");
    let out = orbith(&["verify", "B2", "--full-flag", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 9); // 8 reports + summary
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn markdown_output_prints_root_vectors() {
    let out = orbith(&["verify", "A2", "--full-flag", "--format", "markdown"]);
    let text = stdout(&out);
    assert!(text.contains("| type | S |"));
    assert!(text.contains("[1, 1]"));
    let out = orbith(&["structures", "A2", "--s", "1", "--format", "markdown"]);
    let text = stdout(&out);
    assert!(text.contains("### A2 S={a1}"));
}

#[test]
fn constants_dump_is_json() {
    let out = orbith(&["constants", "A2"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["type"], "A2");
    assert!(!v["weyl"].as_array().unwrap().is_empty());
    // normalized values carry sign, rational part and radicand
    let entry = &v["weyl"][0]["value"];
    assert!(entry.get("sign").is_some());
    assert!(entry.get("radicand").is_some());
}
