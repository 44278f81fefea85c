use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bearing_sim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bearing-sim"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn analyze_builtin_and_file_profiles_agree() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("pds.csv");
    std::fs::write(&csv, bearing_sim::fixture::CANONICAL_CSV).unwrap();

    let builtin = json(&bearing_sim(&["analyze"]));
    let from_file = json(&bearing_sim(&["analyze", "--profile", s(&csv), "--out-dir", s(dir.path())]));
    assert_eq!(builtin, from_file);
    assert_eq!(builtin["N"], 13);
    assert_eq!(builtin["ellipses"].as_array().unwrap().len(), 13);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("clusters.json")).unwrap()).unwrap();
    assert_eq!(written, builtin);
}

#[test]
fn analyze_db_profile_with_single_bump() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("bump.txt");
    let mut text = String::from("# delay_ns  power_db\n");
    for k in 0..=40 {
        let d = k as f64 * 5.0;
        let bump = if d == 100.0 { 6.0 } else { 0.0 };
        text.push_str(&format!("{d} {}\n", -0.05 * d + bump));
    }
    text.insert_str(0, "# units: db\n");
    std::fs::write(&csv, text).unwrap();
    let report = json(&bearing_sim(&["analyze", "--profile", s(&csv)]));
    assert_eq!(report["N"], 1);
    assert_eq!(report["clusters"][0]["tau_ns"], 100.0);
}

#[test]
fn simulate_writes_pmf_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = bearing_sim(&[
        "simulate", "--hpbw", "64.8", "--alpha", "60", "--trials", "40", "--seed", "7", "--out-dir", s(dir.path()),
        "--dump-paths",
    ]);
    let report = json(&out);
    let phi_bar = report["phi_bar_deg"].as_f64().unwrap();
    assert!(phi_bar > 0.0, "positive boresight offset pulls the mean positive");

    let pmf_text = std::fs::read_to_string(dir.path().join("pmf.txt")).unwrap();
    let pmf = bearing_sim::formats::parse_pmf(&pmf_text).unwrap();
    assert_eq!(pmf.masses().len(), 360);
    assert!((pmf.masses().iter().sum::<f64>() - 1.0).abs() < 1e-9);

    let on_disk: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("report.json")).unwrap()).unwrap();
    assert_eq!(on_disk, report);

    let paths = std::fs::read_to_string(dir.path().join("paths.jsonl")).unwrap();
    assert_eq!(paths.lines().count(), 13 * 60 + 60);
}

#[test]
fn omni_is_wider_than_a_narrow_beam() {
    let narrow = json(&bearing_sim(&["simulate", "--hpbw", "30", "--trials", "30"]));
    let omni = json(&bearing_sim(&["simulate", "--omni", "--trials", "30"]));
    assert!(omni["sigma_e_deg"].as_f64().unwrap() > narrow["sigma_e_deg"].as_f64().unwrap());
}

#[test]
fn compare_identical_and_different_pmfs() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    json(&bearing_sim(&["simulate", "--trials", "10", "--out-dir", s(&a)]));
    json(&bearing_sim(&["simulate", "--trials", "10", "--alpha", "90", "--out-dir", s(&b)]));
    let pa = a.join("pmf.txt");
    let pb = b.join("pmf.txt");

    let same = bearing_sim(&["compare", s(&pa), s(&pa)]);
    assert!(same.status.success());
    assert_eq!(String::from_utf8_lossy(&same.stdout).trim().parse::<f64>().unwrap(), 0.0);
    let diff = bearing_sim(&["compare", s(&pa), s(&pb)]);
    assert!(String::from_utf8_lossy(&diff.stdout).trim().parse::<f64>().unwrap() > 0.0);
}

#[test]
fn sweep_then_correct() {
    let dir = tempfile::tempdir().unwrap();
    let out = bearing_sim(&[
        "sweep", "--hpbw", "30,120,omni", "--alpha", "0,20,40,60,80", "--trials", "40", "--out-dir", s(dir.path()),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    for name in ["sigma_e_deg.csv", "phi_bar_deg.csv", "delta_phi_deg.csv", "sigma_total_deg.csv", "delta_percent.csv"] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 4, "{name}");
        assert_eq!(lines[0], "hpbw_deg\\alpha_deg,0,20,40,60,80");
        assert!(lines[3].starts_with("omni,"));
    }
    let pairs = dir.path().join("pairs.csv");
    let report = json(&bearing_sim(&["correct", "--pairs", s(&pairs)]));
    assert!(report["pairs"].as_u64().unwrap() >= 4);
    assert!(report["per_hpbw"].as_array().unwrap().len() == 2);
    assert_eq!(report["applied_gradient"], report["gradient"]);

    let fixed = json(&bearing_sim(&["correct", "--pairs", s(&pairs), "--gradient", "0.21", "--limit-deg", "15"]));
    assert_eq!(fixed["applied_gradient"], 0.21);
}

#[test]
fn correct_single_value() {
    let inside = json(&bearing_sim(&["correct", "--phi-bar", "-10", "--delta-phi", "-2"]));
    assert_eq!(inside["in_range"], true);
    assert!((inside["correction_deg"].as_f64().unwrap() - 2.1).abs() < 1e-12);
    let outside = json(&bearing_sim(&["correct", "--phi-bar", "20", "--gradient", "0.3"]));
    assert_eq!(outside["in_range"], false);
    assert!(outside["correction_deg"].is_null());
}

#[test]
fn exit_codes() {
    let missing = bearing_sim(&["analyze", "--profile", "/definitely/not/here.csv"]);
    assert_eq!(missing.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&missing.stderr).contains("not/here.csv"));

    let bad_bin = bearing_sim(&["simulate", "--bin-deg", "7", "--trials", "1"]);
    assert_eq!(bad_bin.status.code(), Some(1));
    assert!(!bad_bin.stderr.is_empty());

    let bad_hpbw = bearing_sim(&["simulate", "--hpbw", "-5", "--trials", "1"]);
    assert_eq!(bad_hpbw.status.code(), Some(1));

    let dir = tempfile::tempdir().unwrap();
    let junk = dir.path().join("junk.csv");
    std::fs::write(&junk, "0,1\n10,abc\n").unwrap();
    let parse = bearing_sim(&["analyze", "--profile", s(&junk)]);
    assert_eq!(parse.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&parse.stderr).contains('2'), "names the offending line");

    let no_trials = bearing_sim(&["sweep", "--trials", "0", "--out-dir", s(dir.path())]);
    assert_eq!(no_trials.status.code(), Some(1));
}
