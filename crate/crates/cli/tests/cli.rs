use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn qfluct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfluct")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("{e}: {}\n{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn audit_azimuthal_is_trivial_zero() {
    let out = qfluct(&["audit", "--state", "azimuthal:m=1", "--pair", "Lz,phi"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["class"], "TRIVIAL_ZERO");
    assert!((v["verdict"]["gap_ab"]["im"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!((v["verdict"]["rs_rhs"].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn expectation_mismatch_is_a_tolerance_failure() {
    let ok = qfluct(&["audit", "--state", "qtp:N=0,I=1,omega=1", "--pair", "Lz,phi", "--expect", "rs_valid"]);
    assert_eq!(ok.status.code(), Some(0));
    let bad = qfluct(&["audit", "--state", "box2d:a=1,b=2", "--pair", "px,py", "--expect", "RS_VALID", "--nodes", "64x128"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["verdict"]["class"], "CS_ONLY");
}

#[test]
fn energy_time_needs_no_state() {
    let out = qfluct(&["audit", "--pair", "E,t", "--delta-e", "2", "--hbar", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["verdict"]["class"], "TRIVIAL_ZERO");
    assert_eq!(v["verdict"]["gap_ab"]["im"], -2.0);
}

#[test]
fn annex_csv_passes() {
    let out = qfluct(&["annex", "--sigma", "1", "--gamma", "0.5", "--lambda", "0.5", "--k", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let header = reader.headers().unwrap().clone();
    assert_eq!(header.get(0), Some("label"));
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert!(rows.len() >= 17);
    assert!(rows.iter().all(|r| r.get(6) == Some("true") || r.get(6) == Some("reported")));
    let dx = rows.iter().find(|r| r.get(0) == Some("delta_out(x)")).unwrap();
    assert!((dx.get(3).unwrap().parse::<f64>().unwrap() - 1.25f64.sqrt()).abs() < 1e-6);
}

#[test]
fn oscillator_annex_passes() {
    let out = qfluct(&["annex", "--oscillator", "--gamma", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["crosscheck"]["pass"], true);
}

#[test]
fn tight_tolerance_fails_the_crosscheck() {
    let out = qfluct(&["annex", "--nodes", "64", "--tol", "1e-12"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["crosscheck"]["pass"], false);
}

#[test]
fn spins_residual() {
    let out = qfluct(&["spins", "--n", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!(v["commutator_residual"].as_f64().unwrap() < 1e-12);
    assert_eq!(v["inequality_ok"], true);
}

#[test]
fn failure_statuses_are_distinct() {
    assert_eq!(qfluct(&["audit", "--state", "nonsense", "--pair", "Lz,phi"]).status.code(), Some(2));
    assert_eq!(qfluct(&["audit", "--state", "azimuthal:m=1", "--pair", "Lz"]).status.code(), Some(2));
    assert_eq!(qfluct(&["audit", "--state", "azimuthal:m=1", "--pair", "x,p"]).status.code(), Some(2));
    assert_eq!(qfluct(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(qfluct(&["annex", "--gamma", "0", "--lambda", "1.5"]).status.code(), Some(3));
    assert_eq!(qfluct(&["classical", "--width", "50", "--half-width", "10"]).status.code(), Some(3));
    assert_eq!(qfluct(&["spins", "--n", "9"]).status.code(), Some(2));
    assert_eq!(qfluct(&["spins", "--config", "/nonexistent/config.json"]).status.code(), Some(4));
}

#[test]
fn identical_runs_give_identical_files() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let path = dir.path().join(name);
        let p = path.to_str().unwrap();
        let out = qfluct(&["sweep", "--kind", "boundary", "--cases", "5", "--seed", "7", "--out", p]);
        assert_eq!(out.status.code(), Some(0));
        std::fs::read(path).unwrap()
    };
    let (a, b) = (run("a.json"), run("b.json"));
    assert!(!a.is_empty());
    assert_eq!(a, b);
    let other = {
        let path = dir.path().join("c.json");
        qfluct(&["sweep", "--kind", "boundary", "--cases", "5", "--seed", "8", "--out", path.to_str().unwrap()]);
        std::fs::read(path).unwrap()
    };
    assert_ne!(a, other);
}

fn write(path: &Path, text: &str) {
    std::fs::write(path, text).unwrap();
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("detcheck.json");
    write(&cfg, r#"{"command": "detcheck", "state": "qtp:N=1,I=1,omega=1", "ops": ["Lz", "phi", "H_qtp"], "nodes": 1024}"#);
    let from_file = qfluct(&["--config", cfg.to_str().unwrap()]);
    let from_flags = qfluct(&["detcheck", "--state", "qtp:N=1,I=1,omega=1", "--ops", "Lz,phi,H_qtp", "--nodes", "1024"]);
    assert_eq!(from_file.status.code(), Some(0), "{}", String::from_utf8_lossy(&from_file.stderr));
    assert_eq!(from_file.stdout, from_flags.stdout);
    assert_eq!(json(&from_file)["nonnegative"], true);

    // Later flags override the file.
    let csv = qfluct(&["--config", cfg.to_str().unwrap(), "--format", "csv"]);
    assert!(String::from_utf8_lossy(&csv.stdout).starts_with("quantity,value"));

    write(&cfg, r#"{"state": "azimuthal:m=1"}"#);
    assert_eq!(qfluct(&["--config", cfg.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn catalog_and_channel_and_classical_run() {
    let cat = json(&qfluct(&["catalog"]));
    assert_eq!(cat["states"].as_array().unwrap().len(), 6);

    let ch = qfluct(&["channel", "--state", "gaussian:x0=0,sigma=1,k=1", "--gamma", "0.5", "--lambda", "0.5"]);
    assert_eq!(ch.status.code(), Some(0));
    let v = json(&ch);
    assert!((v["out"]["deltas"][0].as_f64().unwrap() - 1.25f64.sqrt()).abs() < 1e-6);

    let cl = qfluct(&["classical", "--mixture", "1:0:1", "--width", "1", "--format", "csv"]);
    assert_eq!(cl.status.code(), Some(0));
    let text = String::from_utf8(cl.stdout).unwrap();
    let std_out: f64 = text
        .lines()
        .find_map(|l| l.strip_prefix("std_out,"))
        .unwrap()
        .parse()
        .unwrap();
    assert!((std_out - 2f64.sqrt()).abs() < 1e-4);
}

#[test]
fn entropy_sweeps_pass() {
    for kind in ["classical-entropy", "quantum-entropy"] {
        let out = qfluct(&["sweep", "--kind", kind, "--cases", "4", "--nodes", "256"]);
        assert_eq!(out.status.code(), Some(0), "{kind}");
        assert_eq!(json(&out)["pass"], true);
    }
}
