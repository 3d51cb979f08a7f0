//! End-to-end tests of the binary: exit codes, report content, CSV
//! round-trips, preset behavior.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_polesim"))
}

fn configs_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn simulate_mapda_preset_is_ideal() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--preset",
        "pendulum-mapda",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("classification: ideal"), "{text}");
    assert!(text.contains("detection_time: none"), "{text}");
    // the referenced CSV exists
    let csv_line = text.lines().find(|l| l.contains("trace_csv:")).unwrap();
    let path = csv_line.split("trace_csv:").nth(1).unwrap().trim();
    assert!(Path::new(path).exists(), "missing {path}");
}

#[test]
fn simulate_tpda_nominal_preset_is_detected() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--preset",
        "pendulum-tpda-nominal",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("classification: detected"), "{text}");
}

#[test]
fn missing_plant_is_config_error_naming_the_key() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(
        &cfg,
        r#"{ "nominal": { "a_n": [[0]], "b_n": [[1]], "k_n": [[-1]] },
            "sim": { "t_end": 1.0, "dt_int": 0.001, "h_sample": 0.01,
                     "t_start": 0.0, "t_stop": 1.0, "x0": [0], "limits": [1] },
            "noise": { "sigma_meas": 0.0, "seed": 0 },
            "detector": { "epsilon": 1.0 } }"#,
    )
    .unwrap();
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("plant"), "{}", stderr(&out));
}

#[test]
fn unknown_keys_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("unknown.json");
    std::fs::write(&cfg, r#"{ "preset": "pendulum-mapda", "oops": 1 }"#).unwrap();
    let out = run(&["simulate", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("oops"), "{}", stderr(&out));
}

#[test]
fn calibrate_single_run_rejected() {
    let out = run(&["calibrate", "--preset", "pendulum-attack-free", "--runs", "1"]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn calibrate_is_seed_deterministic() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let mut csvs = Vec::new();
    for dir in [&dir1, &dir2] {
        let out = run(&[
            "calibrate",
            "--preset",
            "pendulum-attack-free",
            "--runs",
            "6",
            "--out-dir",
            dir.path().to_str().unwrap(),
            "--no-timestamps",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        let csv = std::fs::read_to_string(
            dir.path().join("calibration_pendulum-attack-free.csv"),
        )
        .unwrap();
        csvs.push(csv);
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[0].lines().count(), 7); // header + 6 runs
}

#[test]
fn trace_csv_round_trips_residuals() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "simulate",
        "--preset",
        "pendulum-tpda-exact",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let csv = std::fs::read_to_string(
        dir.path().join("trace_pendulum-tpda-exact_tpda-exact.csv"),
    )
    .unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let res_col = header.iter().position(|h| *h == "res_norm").unwrap();
    let xa_cols: Vec<usize> = header
        .iter()
        .enumerate()
        .filter(|(_, h)| h.starts_with("xa"))
        .map(|(i, _)| i)
        .collect();
    assert_eq!(xa_cols.len(), 4);
    let mut checked = 0;
    for line in lines {
        let fields: Vec<f64> =
            line.split(',').map(|f| f.parse::<f64>().unwrap()).collect();
        let norm = xa_cols.iter().map(|&i| fields[i] * fields[i]).sum::<f64>().sqrt();
        let res = fields[res_col];
        assert!(
            (norm - res).abs() <= 1e-9 * res.max(1e-12),
            "residual mismatch {norm} vs {res}"
        );
        checked += 1;
    }
    assert!(checked > 100);
    // alarm column is 0/1 and header shape is the documented one
    assert_eq!(header.first(), Some(&"t"));
    assert_eq!(header.last(), Some(&"alarm"));
}

#[test]
fn check_ic_preset_reports_reference_values() {
    let out = run(&["check-ic", "--preset", "pendulum", "--no-timestamps"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("does not satisfy"), "{text}");
    assert!(text.contains("8.156682e-5"), "{text}");
    assert!(text.contains("1.184332e-4"), "{text}");
}

#[test]
fn check_ic_config_matches_preset() {
    let cfg = configs_dir().join("check-ic-pendulum.json");
    let out = run(&["check-ic", "--config", cfg.to_str().unwrap(), "--no-timestamps"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert!(stdout(&out).contains("does not satisfy"));
}

#[test]
fn check_ic_defective_without_decomposition_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("jordan.json");
    std::fs::write(&cfg, r#"{ "m": [[2, 1], [0, 2]], "x0": [1, 1] }"#).unwrap();
    let out = run(&["check-ic", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4), "{}", stderr(&out));
    assert!(stderr(&out).contains("j_jordan"), "{}", stderr(&out));
}

#[test]
fn omega_scalar_hand_values() {
    let cfg = configs_dir().join("omega-scalar.json");
    let out = run(&["omega", "--config", cfg.to_str().unwrap(), "--no-timestamps"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("lambda_max"), "{text}");
}

#[test]
fn omega_rejects_non_pd_weight_with_exit_5() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("omega.json");
    std::fs::write(
        &cfg,
        r#"{ "a": [[-1.0]], "b": [[1.0]], "k": [[0.5]],
            "p1": [[1.0]], "p2": [[-1.0]], "p3": [[1.0]], "p4": [[1.0]], "h": 0.01 }"#,
    )
    .unwrap();
    let out = run(&["omega", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(5), "{}", stderr(&out));
}

#[test]
fn compare_needs_two_attacks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("one.json");
    std::fs::write(
        &cfg,
        r#"{ "preset": "pendulum-mapda", "attacks": [ { "variant": "tpda-nominal" } ] }"#,
    )
    .unwrap();
    let out = run(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
}

#[test]
fn compare_shows_detected_vs_ideal_on_mismatched_linear_plant() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("pendulum-attack-compare.json");
    let out = run(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    let tpda_line = text.lines().find(|l| l.starts_with("tpda-nominal")).unwrap();
    let mapda_line = text.lines().find(|l| l.starts_with("mapda-regulated")).unwrap();
    assert!(tpda_line.contains("detected"), "{text}");
    assert!(mapda_line.contains("ideal"), "{text}");
}

#[test]
fn compare_z_quality_contrast() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("pendulum-z-compare.json");
    let out = run(&[
        "compare",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let text = stdout(&out);
    // two adaptive rows; the slow-adaptation one rides much closer to
    // the threshold
    let sups: Vec<f64> = text
        .lines()
        .filter(|l| l.starts_with("mapda-regulated"))
        .map(|l| l.split_whitespace().last().unwrap().parse::<f64>().unwrap())
        .collect();
    assert_eq!(sups.len(), 2, "{text}");
    assert!(sups[1] >= 2.0 * sups[0], "{text}");
}

#[test]
fn full_config_reproduces_preset_run() {
    let dir1 = tempfile::tempdir().unwrap();
    let dir2 = tempfile::tempdir().unwrap();
    let cfg = configs_dir().join("pendulum-mapda-full.json");
    let a = run(&[
        "simulate",
        "--config",
        cfg.to_str().unwrap(),
        "--out-dir",
        dir1.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    let b = run(&[
        "simulate",
        "--preset",
        "pendulum-mapda",
        "--out-dir",
        dir2.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(a.status.success() && b.status.success());
    let csv_a = std::fs::read_to_string(
        dir1.path().join("trace_pendulum-mapda-full_mapda-regulated.csv"),
    )
    .unwrap();
    let csv_b = std::fs::read_to_string(
        dir2.path().join("trace_pendulum-mapda_mapda-regulated.csv"),
    )
    .unwrap();
    assert_eq!(csv_a, csv_b, "explicit config should reproduce the preset bitwise");
}

#[test]
fn seed_override_changes_noise() {
    let dir = tempfile::tempdir().unwrap();
    let out1 = run(&[
        "simulate",
        "--preset",
        "pendulum-attack-free",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    let csv1 =
        std::fs::read_to_string(dir.path().join("trace_pendulum-attack-free_attack-free.csv"))
            .unwrap();
    let out2 = run(&[
        "simulate",
        "--preset",
        "pendulum-attack-free",
        "--seed",
        "99",
        "--out-dir",
        dir.path().to_str().unwrap(),
        "--no-timestamps",
    ]);
    assert!(out1.status.success() && out2.status.success());
    let csv2 =
        std::fs::read_to_string(dir.path().join("trace_pendulum-attack-free_attack-free.csv"))
            .unwrap();
    assert_ne!(csv1, csv2);
}
