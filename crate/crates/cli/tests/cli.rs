//! End-to-end behavior of the binary: exit codes, precedence, config errors.

use std::process::{Command, Output};

fn massjump(args: &[&str]) -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_massjump"));
    cmd.args(args);
    // isolate from ambient environment overrides
    for (key, _) in std::env::vars() {
        if key.starts_with("MASSJUMP_") {
            cmd.env_remove(key);
        }
    }
    cmd
}

fn run(args: &[&str]) -> Output {
    massjump(args).output().unwrap()
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn solve_zero_jump() {
    let out = run(&["solve", "--m-l", "1", "--m-r", "1", "--a", "0", "--energy", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("|r| = 0"), "{text}");
    assert!(text.contains("|t| = 1"), "{text}");
}

#[test]
fn solve_negative_coupling_parses() {
    let out = run(&["solve", "--m-l", "1", "--m-r", "2", "--a", "-0.7", "--energy", "3"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn solve_evanescent_notice() {
    let out = run(&["solve", "--m-l", "0.2", "--m-r", "1", "--a", "0", "--energy", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("below the right-lead gap"), "{}", stdout(&out));
}

#[test]
fn missing_parameter_is_usage_error() {
    let out = run(&["solve", "--m-l", "1", "--m-r", "1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("--energy"), "{}", stderr(&out));
}

#[test]
fn below_left_gap_is_domain_error() {
    let out = run(&["solve", "--m-l", "2", "--m-r", "2", "--a", "0", "--energy", "0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn absurd_tolerance_is_accuracy_error() {
    let out = run(&[
        "entropy", "--m-l", "1", "--m-r", "2", "--a", "0.5", "--energy", "3", "--abs-tol",
        "1e-30", "--rel-tol", "1e-30",
    ]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn env_variables_supply_parameters() {
    let out = massjump(&["solve", "--m-l", "1", "--m-r", "1", "--a", "0"])
        .env("MASSJUMP_ENERGY", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("E=2"), "{}", stdout(&out));
}

#[test]
fn flags_override_env() {
    let out = massjump(&["solve", "--m-l", "1", "--m-r", "1", "--a", "0", "--energy", "3"])
        .env("MASSJUMP_ENERGY", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("E=3"), "{}", stdout(&out));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("point.conf");
    std::fs::write(&path, "fixed.m_l = 1\nfixed.m_r = 2\nfixed.E = 3\nfixed.a = 0.5\n").unwrap();
    let cfg = path.to_str().unwrap();
    let out = run(&["solve", "--config", cfg]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("a=0.5"), "{}", stdout(&out));
    let out = run(&["solve", "--config", cfg, "--a", "0"]);
    assert!(stdout(&out).contains("a=0 "), "{}", stdout(&out));
}

#[test]
fn entropy_json_output_parses() {
    let out = run(&[
        "entropy", "--m-l", "1", "--m-r", "2", "--a", "0.6", "--energy", "3", "--windows", "4",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert!(v["s_x"].is_f64());
    assert_eq!(v["s_p_by_window"][0][0], 4);
}

#[test]
fn entropy_csv_output_has_schema_header() {
    let out = run(&[
        "entropy", "--m-l", "1", "--m-r", "2", "--a", "0.6", "--energy", "3", "--windows", "4,8",
        "--csv",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "m_l,m_r,v_F,a,E,N,S_x,S_p,paper_bound,sum,bbm_constant,flux_residual,flags,status"
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn sweep_empty_axes_single_row() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("single.conf");
    let out_csv = dir.path().join("single.csv");
    std::fs::write(
        &cfg,
        format!(
            "fixed.m_l = 1\nfixed.m_r = 2\nfixed.E = 3\nwindows = 4\noutput.csv = {}\n",
            out_csv.display()
        ),
    )
    .unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("points=1 ok=1"), "{}", stdout(&out));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert_eq!(csv.lines().count(), 2); // header + one row
}

#[test]
fn sweep_skips_invalid_points_with_reason() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("skip.conf");
    let out_csv = dir.path().join("skip.csv");
    // the low end of the energy axis dips below the left gap
    std::fs::write(
        &cfg,
        format!(
            "fixed.m_l = 1\nfixed.m_r = 1\naxis.E = linear:0.5:3.0:6\nwindows = 4\noutput.csv = {}\n",
            out_csv.display()
        ),
    )
    .unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("skipped=2"), "{}", stdout(&out));
    let csv = std::fs::read_to_string(&out_csv).unwrap();
    assert!(csv.contains("skipped("), "{csv}");
}

#[test]
fn sweep_grid_cap_refusal_names_size() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("big.conf");
    std::fs::write(
        &cfg,
        "fixed.m_l = 1\nfixed.m_r = 1\naxis.a = linear:0:1:2000\naxis.E = linear:2:3:2000\nwindows = 4\ngrid_cap = 1000\n",
    )
    .unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("4000000"), "{}", stderr(&out));
}

#[test]
fn sweep_unknown_config_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.conf");
    std::fs::write(&cfg, "fixed.m_l = 1\nfixed.typo = 2\n").unwrap();
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("fixed.typo"), "{}", stderr(&out));
}

#[test]
fn verify_group_filter() {
    let out = run(&["verify", "--group", "gaussian"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("gaussian: PASS"), "{text}");
    assert!(!text.contains("determinant"), "{text}");
}

#[test]
fn verify_unknown_group_is_usage_error() {
    let out = run(&["verify", "--group", "nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_injected_tolerance_fails_with_code_4() {
    let out = run(&["verify", "--group", "gaussian", "--abs-tol", "1e-30", "--rel-tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(4), "stdout: {}", stdout(&out));
    assert!(stdout(&out).contains("gaussian: FAIL"), "{}", stdout(&out));
}

#[test]
fn usage_error_for_unknown_flag() {
    let out = run(&["solve", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = run(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("solve"));
}
