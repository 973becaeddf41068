//! End-to-end runs of the command-line binary.

use std::fs;
use std::process::Command;

use fso_capacity::cli::{read_csv, run_sweep, SweepMode, SweepSpec};
use fso_capacity::oracle::OracleConfig;
use proptest::prelude::*;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_fso-capacity"))
}

#[test]
fn sweep_writes_csv_and_summary() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let json = dir.path().join("summary.json");
    let status = bin()
        .args([
            "--mode",
            "peak-avg",
            "--alpha",
            "0.1",
            "--snr-min",
            "-10",
            "--snr-max",
            "30",
            "--step",
            "0.25",
        ])
        .arg("--out")
        .arg(&csv)
        .arg("--summary-json")
        .arg(&json)
        .status()
        .unwrap();
    assert!(status.success());

    let table = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    assert_eq!(table.rows.len(), 161);
    assert!(table
        .rows
        .iter()
        .all(|r| r.oracle.is_none() && r.gap >= 0.0));

    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&json).unwrap()).unwrap();
    let gap = summary["max_gap"]["gap_nats"].as_f64().unwrap();
    let at = summary["max_gap"]["at_db"].as_f64().unwrap();
    assert!((gap - 0.72).abs() <= 0.02, "{gap}");
    assert!((at - 11.8).abs() <= 0.5, "{at}");
    assert_eq!(summary["row_params"].as_array().unwrap().len(), 161);
    assert!(summary["asymptote"]["high_snr_offset"].is_number());
}

#[test]
fn output_is_deterministic() {
    let run = || {
        let out = bin()
            .args([
                "--mode",
                "avg-only",
                "--snr-min",
                "-5",
                "--snr-max",
                "5",
                "--step",
                "0.5",
                "--refine",
            ])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let first = run();
    assert!(String::from_utf8_lossy(&first)
        .starts_with("snr_db,lower,upper_low,upper_high,best_lower,best_upper,oracle,gap"));
    assert_eq!(first, run());
}

#[test]
fn usage_errors_exit_with_two() {
    let cases: [&[&str]; 5] = [
        &["--mode", "peak-avg"],
        &["--mode", "peak-avg", "--alpha", "1.5"],
        &["--mode", "avg-only", "--snr-min", "5", "--snr-max", "1"],
        &["--mode", "sideways"],
        &["--no-such-flag"],
    ];
    for args in cases {
        let out = bin().args(args).output().unwrap();
        assert_eq!(
            out.status.code(),
            Some(2),
            "{args:?}: {}",
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn config_file_supplies_settings_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.toml");
    let csv = dir.path().join("out.csv");
    fs::write(
        &cfg,
        "mode = \"peak-avg\"\nalpha = 0.4\nsnr-min = 0.0\nsnr-max = 10.0\nstep = 1.0\n",
    )
    .unwrap();
    let status = bin()
        .arg("--config")
        .arg(&cfg)
        .args(["--step", "2.5"])
        .arg("--out")
        .arg(&csv)
        .status()
        .unwrap();
    assert!(status.success());
    let table = read_csv(fs::File::open(&csv).unwrap()).unwrap();
    let grid: Vec<f64> = table.rows.iter().map(|r| r.snr_db).collect();
    assert_eq!(grid, vec![0.0, 2.5, 5.0, 7.5, 10.0]);

    fs::write(&cfg, "mode = \"peak-avg\"\nalpha = \"x\"\n").unwrap();
    let out = bin().arg("--config").arg(&cfg).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_column_is_filled_on_request() {
    let out = bin()
        .args([
            "--mode",
            "peak-avg",
            "--alpha",
            "0.5",
            "--snr-min",
            "0",
            "--snr-max",
            "10",
            "--step",
            "5",
            "--oracle",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let table = read_csv(out.stdout.as_slice()).unwrap();
    for r in &table.rows {
        let o = r.oracle.unwrap();
        assert!(r.best_lower <= o && o <= r.best_upper + 1e-4, "{r:?}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn csv_round_trip(alpha in 0.01f64..1.0, lo in -30.0f64..10.0, span in 1.0f64..30.0, step in 0.1f64..3.0) {
        let spec = SweepSpec {
            mode: SweepMode::PeakAvg,
            alpha: Some(alpha),
            snr_db_min: lo,
            snr_db_max: lo + span,
            snr_db_step: step,
            ..Default::default()
        };
        let table = run_sweep(&spec, &OracleConfig::default()).unwrap();
        let text = fso_capacity::cli::csv_string(&table);
        let parsed = read_csv(text.as_bytes()).unwrap();
        prop_assert_eq!(&parsed, &table.rounded());
        prop_assert_eq!(fso_capacity::cli::csv_string(&parsed), text);
    }
}
