use std::process::Command;

use rb_stable::experiment::{
    csv_string, run_experiment, sample_test_parameters, write_csv, ExperimentConfig, CSV_HEADER,
};

fn small_config() -> ExperimentConfig {
    ExperimentConfig {
        grid_n: 8,
        train_points_per_axis: 3,
        max_basis: 12,
        n_test_params: 6,
        ..Default::default()
    }
}

#[test]
fn csv_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let paths = [dir.path().join("a.csv"), dir.path().join("b.csv")];
    for p in &paths {
        write_csv(&run_experiment(&small_config()).unwrap().rows, p).unwrap();
    }
    let (a, b) = (std::fs::read(&paths[0]).unwrap(), std::fs::read(&paths[1]).unwrap());
    assert_eq!(a, b);
    assert!(String::from_utf8(a).unwrap().starts_with(CSV_HEADER));
}

#[test]
fn single_vector_run_has_two_rows() {
    let config = ExperimentConfig {
        grid_n: 4,
        max_basis: 1,
        n_test_params: 3,
        ..Default::default()
    };
    let report = run_experiment(&config).unwrap();
    assert_eq!(report.rows.iter().map(|r| r.n).collect::<Vec<_>>(), vec![0, 1]);
    // With no basis the reduced solution is zero: the bound is absolute and
    // the relative error is exactly 1.
    let row = report.rows[0];
    assert!((row.err - 1.0).abs() < 1e-14);
    for p in &report.details[0] {
        assert!(p.bound_stable >= p.err);
        assert!(p.bound_stable <= 10.0 * p.err * (1.0 + 1e-12));
    }
}

#[test]
fn rows_are_ordered_and_nonnegative() {
    let report = run_experiment(&small_config()).unwrap();
    for (i, r) in report.rows.iter().enumerate() {
        assert_eq!(r.n, i);
        assert!(r.est_stable >= 0.0 && r.est_trad >= 0.0 && r.err >= 0.0);
    }
    assert_eq!(report.rows.len(), report.greedy_log.steps.len() + 1);
    assert_eq!(report.test_parameters, sample_test_parameters(6, 0).unwrap());
}

#[test]
fn stable_curve_is_nearly_monotone() {
    let report = run_experiment(&ExperimentConfig {
        grid_n: 20,
        n_test_params: 10,
        ..Default::default()
    })
    .unwrap();
    for w in report.rows[5..].windows(2) {
        assert!(w[1].est_stable <= 1.05 * w[0].est_stable, "{:?} -> {:?}", w[0], w[1]);
    }
}

#[test]
fn csv_rows_format() {
    let report = run_experiment(&small_config()).unwrap();
    let csv = csv_string(&report.rows);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), report.rows.len() + 1);
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 4));
}

fn cli() -> Command {
    Command::new(env!("CARGO_BIN_EXE_rb-experiment"))
}

#[test]
fn cli_writes_csv_and_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("errors.csv");
    let output = cli()
        .args([
            "--grid",
            "6",
            "--train",
            "2",
            "--max-basis",
            "10",
            "--test-count",
            "4",
            "--seed",
            "3",
        ])
        .args([
            "--tol",
            "0",
            "--greedy-estimator",
            "trad",
            "--solver-tol",
            "1e-13",
            "--out",
        ])
        .arg(&out)
        .output()
        .unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    let stdout = String::from_utf8(output.stdout).unwrap();
    assert!(stdout.contains("basis size"));
    assert!(std::fs::read_to_string(&out).unwrap().starts_with(CSV_HEADER));
}

#[test]
fn cli_usage_errors_exit_with_two() {
    for args in [
        &["--grid", "7"][..],
        &["--test-count", "0"],
        &["--greedy-estimator", "exact"],
        &["--bogus"],
    ] {
        let status = cli()
            .args(args)
            .arg("--out")
            .arg("/nonexistent/never.csv")
            .output()
            .unwrap()
            .status;
        assert_eq!(status.code(), Some(2), "{args:?}");
    }
}
