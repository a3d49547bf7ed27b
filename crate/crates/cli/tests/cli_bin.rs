//! Binary-level tests: exit codes, config plumbing, and output schemas as a
//! script would see them.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qreact"));
    c.env_remove("QREACT_CONFIG");
    c
}

fn temp_file(name: &str, contents: &str) -> PathBuf {
    let path = std::env::temp_dir().join(format!("qreact-test-{}-{name}", std::process::id()));
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn estimate_defaults_succeed() {
    let out = bin().args(["estimate", "--format", "json"]).output().unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["decoder"], "CC-ASIC");
    assert!((27..=31).contains(&(v["d_core"].as_u64().unwrap() as u32)));
}

#[test]
fn config_error_exits_2() {
    let path = temp_file("bad.toml", "[hardware]\nnot_a_key = 1\n");
    let out = bin().args(["--config", path.to_str().unwrap(), "estimate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let _ = std::fs::remove_file(path);
}

#[test]
fn missing_config_file_exits_2() {
    let out = bin().args(["--config", "/nonexistent/qreact.toml", "estimate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn infeasible_budget_exits_3() {
    let path = temp_file(
        "zero-budget.toml",
        r#"
[circuit.custom]
q_logical = 100
t_count = 1e6
k_avg = 50.0
b_avg = 50.0
error_budget = 0.0
"#,
    );
    let out = bin().args(["--config", path.to_str().unwrap(), "estimate"]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    let _ = std::fs::remove_file(path);
}

#[test]
fn env_var_selects_config() {
    let path = temp_file("cono.toml", "[circuit]\npreset = \"conotoxin\"\n");
    let out = bin()
        .env("QREACT_CONFIG", &path)
        .args(["estimate", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["msf_levels"].as_array().unwrap().len(), 2);
    let _ = std::fs::remove_file(path);
}

#[test]
fn estimate_csv_matches_one_point_sweep_byte_for_byte() {
    let est = bin()
        .args(["estimate", "--gamma-cycles", "25", "--format", "csv"])
        .output()
        .unwrap();
    let sweep = bin()
        .args([
            "sweep-reaction",
            "--gamma-min",
            "25",
            "--gamma-max",
            "25",
            "--points",
            "1",
        ])
        .output()
        .unwrap();
    assert!(est.status.success() && sweep.status.success());
    assert_eq!(stdout(&est), stdout(&sweep));
}

#[test]
fn sweep_csv_schema_round_trips() {
    let out = bin()
        .args(["sweep-reaction", "--gamma-min", "1", "--gamma-max", "100", "--points", "5", "--jobs", "3"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(header.split(',').count(), 12);
    for line in lines {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 12);
        fields[0].parse::<f64>().unwrap(); // gamma_mem_us
        fields[1].parse::<f64>().unwrap(); // gamma_in_cycles
        fields[2].parse::<u32>().unwrap(); // d_core
        fields[11].parse::<f64>().unwrap(); // accumulated_error
    }
}

#[test]
fn decoder_speed_csv_parses_and_flags() {
    let out = bin()
        .args([
            "decoder-speed",
            "--t-circuit-s",
            "3600",
            "--t-min",
            "1e6",
            "--t-max",
            "1e11",
            "--points",
            "11",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    let mut saw_ok = false;
    let mut saw_comm_limited = false;
    let mut saw_infeasible = false;
    for line in text.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(fields.len(), 9);
        match fields[4] {
            "ok" => {
                saw_ok = true;
                fields[3].parse::<f64>().unwrap();
            }
            "comm_limited" => {
                saw_comm_limited = true;
                assert!(fields[3].parse::<f64>().unwrap() < 1e-7);
            }
            "infeasible_comm_bound" => {
                saw_infeasible = true;
                assert!(fields[3].is_empty());
            }
            other => panic!("unknown status {other}"),
        }
    }
    assert!(saw_ok && saw_comm_limited && saw_infeasible);
}

#[test]
fn decoders_json_parses() {
    let out = bin().args(["decoders", "--format", "json"]).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["fleet"]["k_total"].as_u64().unwrap() > 0);
}

#[test]
fn simulate_emits_report_and_trace() {
    let trace = std::env::temp_dir().join(format!("qreact-trace-{}.jsonl", std::process::id()));
    let cfg = temp_file("sim.toml", "[sim]\nn_injections = 8\ndistance = 13\n");
    let out = bin()
        .args([
            "--config",
            cfg.to_str().unwrap(),
            "simulate",
            "--background-cycles",
            "16",
            "--trace",
            trace.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["windows_decoded"].as_u64().unwrap() > 16);
    let trace_text = std::fs::read_to_string(&trace).unwrap();
    for line in trace_text.lines() {
        let ev: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(ev["t_ns"].is_u64() && ev["event"].is_string());
    }
    let _ = std::fs::remove_file(trace);
    let _ = std::fs::remove_file(cfg);
}

#[test]
fn windows_jsonl_parses() {
    let out = bin()
        .args(["windows", "--kind", "surgery", "--nx", "4", "--nz", "3", "--has-y", "--distance", "11"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert_eq!(text.lines().count(), 12);
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["id"].is_u64());
        assert!(v["commit"]["x"].is_array());
    }
}
