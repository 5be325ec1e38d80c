use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const CONFIG: &str = r#"{
  "channel": {"victim_scheme": "BPSK", "snr_db": 20, "phase_mode": "UniformPerPacket", "symbols_per_packet": 200},
  "action_cfg": {"schemes": ["BPSK", "QPSK", "AWGN"], "m_disc": 5, "jnr_mode": {"Fixed": {"jnr_db": 10}}},
  "cost": {"mode": "SER"},
  "learner": "LinTS",
  "horizon": 50,
  "replications": 2,
  "master_seed": 3
}"#;

fn linjam(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_linjam"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

#[test]
fn simulate_writes_log_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), CONFIG).unwrap();
    let out = linjam(&["simulate", "--config", "cfg.json", "--output", "run.csv"], dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let log = fs::read_to_string(dir.path().join("run.csv")).unwrap();
    assert_eq!(log.lines().count(), 1 + 2 * 50);
    let sidecar: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join("run.json")).unwrap()).unwrap();
    assert_eq!(sidecar["config"]["master_seed"], 3);

    let out = linjam(&["simulate", "--config", "run.json", "--output", "again.csv", "--sequential"], dir.path());
    assert!(out.status.success());
    assert_eq!(log, fs::read_to_string(dir.path().join("again.csv")).unwrap());
}

#[test]
fn simulate_refuses_to_overwrite_its_config() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("run.json"), CONFIG).unwrap();
    let out = linjam(&["simulate", "--config", "run.json", "--output", "run.csv"], dir.path());
    assert!(!out.status.success());
    assert_eq!(fs::read_to_string(dir.path().join("run.json")).unwrap(), CONFIG);
}

#[test]
fn analytic_optimal_row() {
    let dir = tempfile::tempdir().unwrap();
    let out = linjam(&["analytic", "--victim", "BPSK", "--snr-db", "20", "--jnr-db", "10", "--optimal"], dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(&row[..5], &["BPSK", "20", "10", "BPSK", "0.06"]);
    assert!((row[6].parse::<f64>().unwrap() - 0.012_983_080_040_113_6).abs() < 1e-8);
}

#[test]
fn analytic_phase_sweep_table() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["analytic", "--victim", "BPSK", "--snr-db", "20", "--jnr-db", "10", "--phase-sweep", "8"];
    let out = linjam(&args, dir.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (phi, ser) = l.split_once(',').unwrap();
            (phi.parse().unwrap(), ser.parse().unwrap())
        })
        .collect();
    assert_eq!(rows.len(), 8);
    // Quarter turn: the BPSK jammer is orthogonal to the victim axis.
    assert!(rows[2].1 < 1e-10);
    assert!(rows[0].1 > 0.01);
}

#[test]
fn sweep_writes_one_log_per_value() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), CONFIG).unwrap();
    let args = [
        "sweep", "--config", "cfg.json", "--param", "m_disc", "--values", "2,4", "--output-dir", "out", "--window", "10",
    ];
    let out = linjam(&args, dir.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let summary = String::from_utf8(out.stdout).unwrap();
    assert_eq!(summary.lines().count(), 3);
    for m in ["2", "4"] {
        assert!(dir.path().join(format!("out/sweep_LinTS_m_disc_{m}.csv")).exists());
    }
}

#[test]
fn unknown_sweep_parameter_fails() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("cfg.json"), CONFIG).unwrap();
    let out = linjam(&["sweep", "--config", "cfg.json", "--param", "colour", "--values", "1"], dir.path());
    assert!(!out.status.success());
}
