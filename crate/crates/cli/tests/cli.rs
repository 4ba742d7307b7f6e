//! End-to-end checks of the command-line surface: file formats, exit codes
//! and the byte-level determinism contract.

use std::path::Path;
use std::process::Command;

fn mcmcb() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mcmcb"))
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|_| panic!("missing {}", path.display()))
}

/// JSON text with the metadata timestamp removed.
fn strip_timestamp(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("timestamp_unix"))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn generate_writes_normalized_instrument() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .args(["--seed", "7", "--out-dir"])
        .arg(dir.path())
        .args(["generate", "--n", "1", "--m", "1", "--eps", "0.01"])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("instrument.json"))).unwrap();
    assert_eq!(doc["kind"], "usi");
    let total: f64 = doc["rates"]
        .as_object()
        .unwrap()
        .values()
        .map(|v| v.as_f64().unwrap())
        .sum();
    assert!((total - 1.0).abs() < 1e-12);
}

#[test]
fn generate_map_kind_has_factor_tables() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .args(["--seed", "9", "--out-dir"])
        .arg(dir.path())
        .args(["generate", "--n", "1", "--m", "1", "--eps", "0.02", "--kind", "map"])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("instrument.json"))).unwrap();
    assert_eq!(doc["kind"], "map");
    assert!(doc["measure_rates"].is_object());
    assert!(doc["prepare_rates"].is_object());
}

#[test]
fn generate_zero_eps_is_ideal() {
    let dir = tempfile::tempdir().unwrap();
    mcmcb()
        .args(["--seed", "1", "--out-dir"])
        .arg(dir.path())
        .args(["generate", "--n", "1", "--m", "1", "--eps", "0"])
        .status()
        .unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("instrument.json"))).unwrap();
    let rates = doc["rates"].as_object().unwrap();
    assert_eq!(rates.len(), 1);
    assert_eq!(rates["0|0|I"], 1.0);
}

#[test]
fn graph_outputs_published_counts() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .arg("--out-dir")
        .arg(dir.path())
        .args(["graph", "--gate", "cnot", "--n", "1", "--m", "1"])
        .status()
        .unwrap();
    assert!(status.success());
    let doc: serde_json::Value = serde_json::from_str(&read(&dir.path().join("graph.json"))).unwrap();
    assert_eq!(doc["result"]["cycle_basis_size"], 13);
    assert_eq!(doc["result"]["edges"].as_array().unwrap().len(), 16);
    assert!(dir.path().join("graph.dot").exists());
    // Identity gate with no ancillas: all four edges are self-loops.
    let dir2 = tempfile::tempdir().unwrap();
    mcmcb()
        .arg("--out-dir")
        .arg(dir2.path())
        .args(["graph", "--gate", "identity", "--n", "0", "--m", "1"])
        .status()
        .unwrap();
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir2.path().join("graph.json"))).unwrap();
    for e in doc["result"]["edges"].as_array().unwrap() {
        assert_eq!(e["src"], e["dst"]);
    }
    // Syndrome builder accepts commuting stabilizers.
    let dir3 = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .arg("--out-dir")
        .arg(dir3.path())
        .args(["graph", "--stabilizers", "ZZ,XX"])
        .status()
        .unwrap();
    assert!(status.success());
}

#[test]
fn learn_is_byte_deterministic_modulo_timestamp() {
    let run = |dir: &Path| {
        let status = mcmcb()
            .args(["--seed", "42", "--format", "csv", "--out-dir"])
            .arg(dir)
            .args([
                "learn",
                "--gate",
                "cnot",
                "--n",
                "1",
                "--m",
                "1",
                "--eps",
                "0.01",
                "--circuits",
                "8",
                "--shots-per-circuit",
                "25",
            ])
            .status()
            .unwrap();
        assert!(status.success());
    };
    let d1 = tempfile::tempdir().unwrap();
    let d2 = tempfile::tempdir().unwrap();
    run(d1.path());
    run(d2.path());
    assert_eq!(
        read(&d1.path().join("learn.csv")),
        read(&d2.path().join("learn.csv"))
    );
    assert_eq!(
        strip_timestamp(&read(&d1.path().join("learn.json"))),
        strip_timestamp(&read(&d2.path().join("learn.json")))
    );
    assert_eq!(
        read(&d1.path().join("learn_plot.csv")),
        read(&d2.path().join("learn_plot.csv"))
    );
    // The trivial cycle is omitted from the plot data: 12 rows + header.
    assert_eq!(read(&d1.path().join("learn_plot.csv")).lines().count(), 13);
}

#[test]
fn missing_seed_is_a_config_error() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .arg("--out-dir")
        .arg(dir.path())
        .args(["generate", "--n", "1", "--m", "1", "--eps", "0.01"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(2));
}

#[test]
fn independence_exact_on_map_instrument_is_consistent() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .args(["--seed", "3", "--exact", "--format", "csv", "--out-dir"])
        .arg(dir.path())
        .args([
            "independence",
            "--gate",
            "cnot",
            "--n",
            "1",
            "--m",
            "1",
            "--eps",
            "0.02",
            "--kind",
            "map",
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let text = read(&dir.path().join("independence.csv"));
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 5);
    for line in &lines[1..] {
        assert!(line.ends_with("consistent"), "row {line}");
    }
}

#[test]
fn error_rate_exact_runs_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = mcmcb()
        .args(["--seed", "11", "--exact", "--out-dir"])
        .arg(dir.path())
        .args([
            "error-rate",
            "--gate",
            "cnot",
            "--n",
            "1",
            "--m",
            "1",
            "--eps",
            "0.02",
            "--a",
            "1",
            "--b",
            "1",
            "--p",
            "I",
            "--repetitions",
            "1",
        ])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("error_rate.json"))).unwrap();
    assert!(doc["result"]["value"].as_f64().unwrap().is_finite());
}

#[test]
fn verify_suite_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let status = mcmcb()
        .arg("--out-dir")
        .arg(dir.path())
        .args(["verify", "--seeds", "1,2,3,4,5"])
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let doc: serde_json::Value =
        serde_json::from_str(&read(&dir.path().join("verify.json"))).unwrap();
    let rows = doc["result"].as_array().unwrap();
    assert_eq!(rows.len(), 20);
    assert!(rows.iter().all(|r| r["pass"] == true));
}
