use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use irs_hetnet::io::{sha256_file, RunManifest, CSV_HEADER};

fn sim(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sim"))
        .args(args)
        .current_dir(cwd)
        .env("SIM_THREADS", "2")
        .output()
        .expect("run sim")
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn configs(dir: &Path) {
    write(dir, "conv.json", r#"{"mode": "conventional", "carrier_ghz": 28}"#);
    write(dir, "irs.json", r#"{"mode": "irs_assisted", "carrier_ghz": 28}"#);
}

#[test]
fn sweep_writes_csv_summary_and_verified_manifest() {
    let t = tempfile::tempdir().unwrap();
    configs(t.path());
    let o = sim(&["sweep", "--config", "irs.json", "--grid", "11", "--out", "run/a"], t.path());
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));

    let out = t.path().join("run/a");
    let csv = fs::read_to_string(out.join("map.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], CSV_HEADER);
    assert_eq!(lines.len(), 1 + 11 * 11);
    assert!(csv.ends_with('\n'));

    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    for needle in ["fingerprint", "macro BS at (500, 500, 25)", "user height 1.5", "edge_min"] {
        assert!(summary.contains(needle), "summary lacks {needle:?}");
    }

    let m = RunManifest::load(&out).unwrap();
    assert_eq!(m.command, "sweep");
    assert_eq!(m.files.len(), 2);
    assert!(m.verify(&out).is_empty());
}

#[test]
fn repeated_runs_are_byte_identical() {
    let t = tempfile::tempdir().unwrap();
    configs(t.path());
    write(
        t.path(),
        "mc.json",
        r#"{"mode": "conventional", "carrier_ghz": 70,
            "fading_mode": {"monte_carlo": {"samples": 50, "seed": 5}}}"#,
    );
    let run = |dir: &str, threads: &str| {
        let o = Command::new(env!("CARGO_BIN_EXE_sim"))
            .args(["sweep", "--config", "mc.json", "--random", "300", "--seed", "8", "--out", dir])
            .current_dir(t.path())
            .env("SIM_THREADS", threads)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
        sha256_file(&t.path().join(dir).join("map.csv")).unwrap()
    };
    let a = run("a", "1");
    let b = run("b", "4");
    let c = run("c", "0");
    assert_eq!(a, b);
    assert_eq!(a, c);
}

#[test]
fn compare_emits_both_maps_and_delta_sign() {
    let t = tempfile::tempdir().unwrap();
    configs(t.path());
    let o = sim(
        &["compare", "--conv", "conv.json", "--irs", "irs.json", "--grid", "21", "--out", "cmp"],
        t.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let out = t.path().join("cmp");
    for f in ["conventional.csv", "irs_assisted.csv"] {
        assert_eq!(fs::read_to_string(out.join(f)).unwrap().lines().count(), 1 + 21 * 21);
    }
    let summary = fs::read_to_string(out.join("summary.txt")).unwrap();
    assert!(summary.contains("IRS raises the cell-edge association"));
    let m = RunManifest::load(&out).unwrap();
    assert_eq!(m.files.len(), 3);
    assert!(m.verify(&out).is_empty());
}

#[test]
fn optimize_reports_energy_saving() {
    let t = tempfile::tempdir().unwrap();
    configs(t.path());
    let o = sim(
        &["optimize", "--config", "irs.json", "--target", "0.99998", "--var", "power", "--out", "o"],
        t.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(t.path().join("o/summary.txt")).unwrap();
    assert!(summary.contains("energy saving"));
    assert!(summary.contains("vs 6 W baseline"));
    assert!(t.path().join("o/map.csv").exists());
}

#[test]
fn optimize_elements() {
    let t = tempfile::tempdir().unwrap();
    write(
        t.path(),
        "irs90.json",
        r#"{"mode": "irs_assisted", "carrier_ghz": 90, "micro": {"transmit_power_w": 2}}"#,
    );
    let o = sim(
        &["optimize", "--config", "irs90.json", "--target", "0.8", "--var", "elements",
          "--bracket", "1", "256", "--out", "o"],
        t.path(),
    );
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let summary = fs::read_to_string(t.path().join("o/summary.txt")).unwrap();
    assert!(summary.contains("IRS elements (M = N)"));
}

#[test]
fn exit_codes() {
    let t = tempfile::tempdir().unwrap();
    configs(t.path());
    write(t.path(), "typo.json", r#"{"transmitt_power": 4}"#);
    write(t.path(), "broken.json", r#"{"mode": "#);
    write(t.path(), "carrier.json", r#"{"carrier_ghz": 60}"#);
    write(t.path(), "neg.json", r#"{"micro": {"transmit_power_w": -1}}"#);
    write(t.path(), "blocker", "");

    let sweep = |cfg: &str| code(&sim(&["sweep", "--config", cfg, "--grid", "3", "--out", "x"], t.path()));
    assert_eq!(sweep("typo.json"), 2);
    assert_eq!(sweep("broken.json"), 2);
    assert_eq!(sweep("carrier.json"), 2);
    assert_eq!(sweep("neg.json"), 2);
    assert_eq!(sweep("missing.json"), 4);
    assert_eq!(
        code(&sim(&["sweep", "--config", "irs.json", "--grid", "3", "--out", "blocker"], t.path())),
        4
    );

    // Target below the whole bracket.
    let o = sim(
        &["optimize", "--config", "irs.json", "--target", "0.85", "--var", "power",
          "--bracket", "0.1", "6", "--out", "y"],
        t.path(),
    );
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8_lossy(&o.stderr).contains("not bracketed"));

    // Unreachable with at most 2 × 2 elements.
    write(t.path(), "weak.json", r#"{"mode": "irs_assisted", "micro": {"transmit_power_w": 1e-9}}"#);
    let o = sim(
        &["optimize", "--config", "weak.json", "--target", "0.99999", "--var", "elements",
          "--bracket", "1", "2", "--out", "z"],
        t.path(),
    );
    assert_eq!(code(&o), 3);

    // Element search on a conventional scenario.
    let o = sim(
        &["optimize", "--config", "conv.json", "--target", "0.5", "--var", "elements", "--out", "w"],
        t.path(),
    );
    assert_eq!(code(&o), 2);

    // Mismatched carriers.
    write(t.path(), "irs90.json", r#"{"mode": "irs_assisted", "carrier_ghz": 90}"#);
    let o = sim(
        &["compare", "--conv", "conv.json", "--irs", "irs90.json", "--grid", "3", "--out", "v"],
        t.path(),
    );
    assert_eq!(code(&o), 2);

    // Bad flags.
    assert_eq!(code(&sim(&["sweep", "--config", "irs.json", "--random", "5", "--out", "u"], t.path())), 2);
    assert!(!t.path().join("x").exists());
}
