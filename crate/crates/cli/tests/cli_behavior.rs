//! End-to-end checks of the `solwave` binary: exit codes, CSV format,
//! determinism and the command round trips.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn solwave(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_solwave"))
        .args(args)
        .current_dir(dir)
        .env_remove("SOLWAVE_OUT_DIR")
        .output()
        .expect("binary must run")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn rejects_the_folded_branch_with_exit_code_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &["curve", "--a", "1", "--b", "-3.5", "--c", "3"],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr).into_owned();
    assert!(msg.contains("σ = 4.0833"), "stderr: {msg}");
}

#[test]
fn curve_writes_csv_and_svg_with_preamble() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "curve",
            "--a",
            "1",
            "--b",
            "-2",
            "--c",
            "3",
            "--omega-max",
            "3",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("curve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "omega,lambda,lambda_prime,energy");
    let comment = lines.next().unwrap();
    assert!(comment.starts_with("# a="), "comment line: {comment}");
    assert!(comment.contains("sigma=1.3333333333333333e0"));
    assert!(comment.contains("version="));
    // 17 significant digits on every data field
    let first = lines.next().unwrap();
    for field in first.split(',') {
        assert!(field.contains('e'), "field {field} not in scientific form");
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-');
        assert_eq!(
            mantissa.len(),
            18,
            "field {field} must carry 17 significant digits"
        );
    }
    let svg = fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert!(svg.contains("lambda"));
    // monotone regime: no critical-frequency markers
    assert!(!svg.contains("omega_m"));
}

#[test]
fn degenerate_curve_marks_the_inflection() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(&["curve", "--a", "2", "--b", "-2", "--c", "1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert!(
        svg.contains("omega_d"),
        "degenerate frequency must be marked"
    );
}

#[test]
fn window_curve_shades_the_equal_area_regions() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "curve",
            "--a",
            "1",
            "--b",
            "-2.8722813232690143",
            "--c",
            "3",
            "--omega-max",
            "2",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let svg = fs::read_to_string(dir.path().join("curve.svg")).unwrap();
    assert!(svg.contains("#c8c8c8"), "equal-area shading missing");
    assert!(svg.contains("omega_m") && svg.contains("omega_M"));
}

#[test]
fn lambda2_round_trips_into_classify() {
    let dir = tempfile::tempdir().unwrap();
    let b = "-2.8722813232690143";
    let out = solwave(&["lambda2", "--a", "1", "--b", b, "--c", "3"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lambda2 = text
        .lines()
        .find(|l| l.starts_with("lambda2 = "))
        .and_then(|l| l.trim_start_matches("lambda2 = ").parse::<f64>().ok())
        .expect("lambda2 line");
    let out = solwave(
        &[
            "classify",
            "--a",
            "1",
            "--b",
            b,
            "--c",
            "3",
            "--lambda",
            &format!("{lambda2:.16e}"),
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(
        report.contains("minimizers: 2 (branch 1+3)"),
        "report: {report}"
    );
}

#[test]
fn classify_flags_the_degenerate_level() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "classify",
            "--a",
            "2",
            "--b",
            "-2",
            "--c",
            "1",
            "--lambda",
            "0.5333333333333333",
            "--out-csv",
            "row.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("degenerate = yes"));
    let csv = fs::read_to_string(dir.path().join("row.csv")).unwrap();
    let data = csv.lines().nth(2).unwrap();
    assert!(data.contains("unique-degenerate-level"));
    assert!(data.ends_with(",1,1,1"), "row: {data}");
}

#[test]
fn classify_single_branch_at_unit_frequency() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "classify",
            "--a",
            "1",
            "--b",
            "-2",
            "--c",
            "3",
            "--lambda",
            "3.8666666666666667",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(report.contains("minimizers: 1"), "report: {report}");
    let omega_line = report.lines().find(|l| l.starts_with("branch 1")).unwrap();
    assert!(
        omega_line.contains("omega = 9.999999999") || omega_line.contains("omega = 1.0000000000"),
        "line: {omega_line}"
    );
    assert!(omega_line.contains("degenerate = no"));
}

#[test]
fn profile_csv_is_symmetric_with_crest_at_center() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "profile", "--a", "1", "--b", "-2", "--c", "3", "--omega", "1", "--n", "256", "--out",
            "p.csv",
        ],
        dir.path(),
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let csv = fs::read_to_string(dir.path().join("p.csv")).unwrap();
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(2)
        .map(|l| {
            let mut parts = l.split(',');
            (
                parts.next().unwrap().parse().unwrap(),
                parts.next().unwrap().parse().unwrap(),
            )
        })
        .collect();
    assert_eq!(rows.len(), 513);
    let crest = rows[256].1;
    assert!((crest - f64::sqrt(2.0)).abs() < 1e-9);
    for k in 0..rows.len() {
        assert_eq!(
            rows[k].1,
            rows[rows.len() - 1 - k].1,
            "even symmetry broken at {k}"
        );
    }
}

#[test]
fn evolve_is_deterministic_and_flat_for_zero_eps() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "evolve",
        "--a",
        "1",
        "--b",
        "-2",
        "--c",
        "3",
        "--omega",
        "1",
        "--eps",
        "0",
        "--T",
        "1",
        "--n",
        "256",
        "--samples",
        "4",
        "--dt",
        "2.5e-4",
        "--out-csv",
        "run.csv",
        "--out-svg",
        "run.svg",
    ];
    let out = solwave(&args, dir.path());
    assert_eq!(
        out.status.code(),
        Some(0),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    let first = fs::read(dir.path().join("run.csv")).unwrap();
    let first_svg = fs::read(dir.path().join("run.svg")).unwrap();

    for line in String::from_utf8_lossy(&first).lines().skip(2) {
        let dist: f64 = line.split(',').nth(3).unwrap().parse().unwrap();
        assert!(dist <= 1e-6, "unperturbed distance {dist:e}");
    }

    let out = solwave(&args, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        fs::read(dir.path().join("run.csv")).unwrap(),
        first,
        "CSV must be byte-identical"
    );
    assert_eq!(fs::read(dir.path().join("run.svg")).unwrap(), first_svg);
}

#[test]
fn evolve_rejects_oversized_perturbations() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "evolve", "--a", "1", "--b", "-2", "--c", "3", "--omega", "1", "--eps", "0.5", "--T",
            "1", "--n", "128",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn eval_needs_exactly_one_input_kind() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "eval", "--a", "1", "--b", "-2", "--c", "3", "--s", "1", "--omega", "1",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(2));
    let out = solwave(&["eval", "--a", "1", "--b", "-2", "--c", "3"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn io_failure_maps_to_exit_code_3() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("blocker"), b"plain file").unwrap();
    let out = solwave(
        &[
            "eval",
            "--a",
            "1",
            "--b",
            "-2",
            "--c",
            "3",
            "--s",
            "1",
            "--out",
            "blocker/eval.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn out_dir_environment_variable_redirects_relative_paths() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("redirected");
    let out = Command::new(env!("CARGO_BIN_EXE_solwave"))
        .args([
            "eval", "--a", "1", "--b", "-2", "--c", "3", "--s", "1", "--out", "eval.csv",
        ])
        .current_dir(dir.path())
        .env("SOLWAVE_OUT_DIR", &target)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(target.join("eval.csv").exists());
    assert!(!dir.path().join("eval.csv").exists());
}

#[test]
fn hessian_reports_both_resolutions() {
    let dir = tempfile::tempdir().unwrap();
    let out = solwave(
        &[
            "hessian",
            "--a",
            "2",
            "--b",
            "-2",
            "--c",
            "1",
            "--omega",
            "1",
            "--n",
            "512",
            "--out-csv",
            "h.csv",
        ],
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("verdict: nondegenerate"), "report: {text}");
    let csv = fs::read_to_string(dir.path().join("h.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("sigma_min_coarse"));
}
