//! End-to-end tests of the `oscalg` binary: exit codes, report
//! determinism, file outputs, and the usage-error surface.

use std::path::Path;
use std::process::{Command, Output};

fn oscalg() -> Command {
    Command::new(env!("CARGO_BIN_EXE_oscalg"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    oscalg()
        .args(args)
        .arg("--output")
        .arg(dir)
        .output()
        .expect("binary should run")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).expect("utf-8 stdout")
}

fn stderr(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).expect("utf-8 stderr")
}

#[test]
fn verify_algebra_passes_and_reports_are_deterministic() {
    let dir_a = tempfile::tempdir().unwrap();
    let dir_b = tempfile::tempdir().unwrap();
    let args = ["verify-algebra", "--cutoff", "6"];

    let first = run_in(dir_a.path(), &args);
    let second = run_in(dir_b.path(), &args);
    assert_eq!(first.status.code(), Some(0), "stderr: {}", stderr(&first));
    assert_eq!(second.status.code(), Some(0));

    let text = stdout(&first);
    assert!(text.contains("summary: "));
    assert!(text.contains("0 failures"));
    assert!(text.contains("su11_standard: vacuum witness"));

    let report_a = std::fs::read(dir_a.path().join("algebra_report.json")).unwrap();
    let report_b = std::fs::read(dir_b.path().join("algebra_report.json")).unwrap();
    assert_eq!(report_a, report_b, "identical configs must give identical reports");

    // The stdout summaries differ only in the printed output path.
    let normalize = |s: String, dir: &Path| s.replace(&dir.display().to_string(), "<out>");
    assert_eq!(
        normalize(text, dir_a.path()),
        normalize(stdout(&second), dir_b.path())
    );
}

#[test]
fn tightened_tolerance_fails_and_names_the_relation() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["verify-algebra", "--cutoff", "5", "--tol-algebra", "1e-30"],
    );
    assert_eq!(output.status.code(), Some(1));
    let errors = stderr(&output);
    assert!(
        errors.contains("FAIL su2_js: [Jz, J+] - J+"),
        "failing relations must be named on stderr, got: {errors}"
    );
}

#[test]
fn usage_errors_exit_with_code_two() {
    let cases: &[&[&str]] = &[
        &["verify-algebra", "--nope"],
        &["verify-algebra", "--cutoff", "3"],
        &["verify-algebra", "--cutoff", "6", "--guard", "6"],
        &["simulate", "--system", "nosuch"],
        &["simulate", "--system", "chiral_plus", "--periods", "0"],
        &["simulate", "--system", "chiral_plus", "--initial", "1.0"],
        &["spectrum", "--arithmetic", "exact", "--omega", "1/2"],
        &["solder-check", "--arithmetic", "exact", "--omega", "1.7"],
        &["verify-algebra", "--omega", "-2"],
        &["verify-algebra", "--omega", "bogus"],
        &["spectrum", "--format", "csv"],
        &["verify-algebra", "--tol-algebra", "-1"],
    ];
    for args in cases {
        let dir = tempfile::tempdir().unwrap();
        let output = run_in(dir.path(), args);
        assert_eq!(
            output.status.code(),
            Some(2),
            "expected usage error for {args:?}, stderr: {}",
            stderr(&output)
        );
    }
}

#[test]
fn simulate_writes_trajectory_csv_and_report() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["simulate", "--system", "chiral_plus", "--periods", "2"],
    );
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));

    let csv = std::fs::read_to_string(dir.path().join("trajectory_chiral_plus.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(
        lines.next().unwrap(),
        "t, re(x1), im(x1), re(x2), im(x2)"
    );
    // Header plus 2 periods × 32 steps plus the initial sample.
    assert_eq!(csv.lines().count(), 1 + 2 * 32 + 1);

    let report = std::fs::read_to_string(dir.path().join("simulate_chiral_plus.json")).unwrap();
    assert!(report.contains("\"energy_max_drift\""));
    assert!(report.contains("\"angular_momentum\""));
    let text = stdout(&output);
    assert!(text.contains("max |H(t) − H(0)|"));
}

#[test]
fn simulate_csv_format_streams_the_trajectory() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &[
            "simulate",
            "--system",
            "pseudochiral_plus",
            "--periods",
            "1",
            "--format",
            "csv",
        ],
    );
    assert_eq!(output.status.code(), Some(0));
    assert!(stdout(&output).starts_with("t, re(x1), im(x1), re(x2), im(x2)"));
}

#[test]
fn closed_stdout_pipe_does_not_panic() {
    use std::io::Read;

    let dir = tempfile::tempdir().unwrap();
    // Enough CSV to overflow the pipe buffer, so the writer is still
    // mid-stream when the reader hangs up.
    let mut child = oscalg()
        .args([
            "simulate",
            "--system",
            "chiral_plus",
            "--periods",
            "400",
            "--steps-per-period",
            "64",
            "--format",
            "csv",
        ])
        .arg("--output")
        .arg(dir.path())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .expect("binary should spawn");

    let mut head = [0u8; 64];
    child
        .stdout
        .take()
        .unwrap()
        .read_exact(&mut head)
        .expect("first CSV bytes");
    // Dropping the handle above closed the pipe; the writer must finish
    // cleanly instead of panicking on the broken pipe.
    let status = child.wait().expect("child should exit");
    assert_eq!(status.code(), Some(0));
    assert!(head.starts_with(b"t, re(x1)"));
}

#[test]
fn solder_check_exact_mode_states_the_reduction() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["solder-check", "--arithmetic", "exact", "--omega", "3/2"],
    );
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let text = stdout(&output);
    assert!(text.contains("reduced ≡ bidimensional_direct (exact)"));
    assert!(text.contains("reduced ≡ indirect_hyperbolic (exact)"));

    let report = std::fs::read_to_string(dir.path().join("solder_report.json")).unwrap();
    assert!(report.contains("reduced ≡ bidimensional_direct (exact)"));
}

#[test]
fn spectrum_report_tabulates_both_hamiltonians() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["spectrum", "--cutoff", "6", "--guard", "1"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    let report = std::fs::read_to_string(dir.path().join("spectrum_report.json")).unwrap();
    assert!(report.contains("\"h_direct\""));
    assert!(report.contains("\"h_indirect\""));
    assert!(report.contains("\"nominal_ladder\""));
}

#[test]
fn json_format_prints_the_payload_written_to_disk() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(
        dir.path(),
        &["verify-algebra", "--cutoff", "5", "--format", "json"],
    );
    assert_eq!(output.status.code(), Some(0));
    let printed = stdout(&output);
    let written = std::fs::read_to_string(dir.path().join("algebra_report.json")).unwrap();
    assert_eq!(printed, written);
    assert!(printed.trim_start().starts_with('{'));
    assert!(printed.contains("\"conventions\""));
    assert!(printed.contains("\"checks\""));
}

#[test]
fn output_dir_env_var_is_honored() {
    let dir = tempfile::tempdir().unwrap();
    let output = oscalg()
        .args(["spectrum", "--cutoff", "5", "--guard", "1"])
        .env("OSCALG_OUTPUT_DIR", dir.path())
        .output()
        .expect("binary should run");
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));
    assert!(dir.path().join("spectrum_report.json").exists());
}

#[test]
fn full_report_runs_every_section() {
    let dir = tempfile::tempdir().unwrap();
    let output = run_in(dir.path(), &["full-report", "--cutoff", "5"]);
    assert_eq!(output.status.code(), Some(0), "stderr: {}", stderr(&output));

    let report = std::fs::read_to_string(dir.path().join("full_report.json")).unwrap();
    for key in [
        "\"algebra\"",
        "\"solder\"",
        "\"canonical_maps\"",
        "\"spectrum\"",
        "\"simulations\"",
    ] {
        assert!(report.contains(key), "full report misses {key}");
    }
    for system in [
        "chiral_plus",
        "chiral_minus",
        "pseudochiral_plus",
        "pseudochiral_minus",
        "bidimensional_direct",
    ] {
        assert!(dir.path().join(format!("trajectory_{system}.csv")).exists());
        assert!(dir.path().join(format!("simulate_{system}.json")).exists());
    }
    let text = stdout(&output);
    assert!(text.contains("— canonical maps —"));
    assert!(text.contains("0 failures"));
}
