//! End-to-end tests of the `qd-cavity` binary: exit codes, file outputs,
//! reruns. Each test drives the compiled binary through `std::process`.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qd-cavity"))
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

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

/// 2x1 grid around the singlet-line working point; cheap enough for CI.
fn small_sweep_config(out_csv: &Path) -> String {
    format!(
        r#"{{
  "model": {{ "gamma_x": 0.1, "gamma_b": 0.1 }},
  "axes": {{
    "axis1": {{ "name": "g", "start": 14.0, "stop": 16.0, "count": 2 }},
    "axis2": {{ "name": "omega_r_det", "start": 15.0, "stop": 15.0, "count": 1 }}
  }},
  "rules": ["omega_l_det = -g"],
  "output": {{ "path": {out:?}, "meta": true }}
}}"#,
        out = out_csv.display().to_string()
    )
}

#[test]
fn validate_config_accepts_shipped_example() {
    let out = run(&[
        "validate-config",
        "--config",
        concat!(env!("CARGO_MANIFEST_DIR"), "/../../configs/fig3.json"),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("config OK"), "stdout: {text}");
    assert!(text.contains("\"omega_l_det = -g\""), "stdout: {text}");
}

#[test]
fn missing_config_flag_exits_2() {
    let out = run(&["sweep"]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("--config"));
}

#[test]
fn invalid_config_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    // syntactically fine, physically invalid (negative coupling)
    let cfg = write_config(
        dir.path(),
        "bad.json",
        r#"{
  "model": { "g": -3.0 },
  "axes": { "axis1": { "name": "g", "start": 1.0, "stop": 2.0, "count": 2 } }
}"#,
    );
    let out = run(&["validate-config", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));

    let garbled = write_config(dir.path(), "garbled.json", "{ not json");
    let out = run(&["validate-config", "--config", garbled.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn point_with_zero_drive_reports_zero_flux_and_exits_0() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "dark.json",
        r#"{
  "model": { "e_r": 0.0, "e_l": 0.0 },
  "axes": { "axis1": { "name": "g", "start": 10.0, "stop": 20.0, "count": 2 } }
}"#,
    );
    let out = run(&["point", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("zero_flux"), "stdout: {text}");
    assert!(text.contains("EoF = NaN"), "stdout: {text}");
}

#[test]
fn sweep_writes_csv_and_meta_and_reruns_are_identical() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("grid.csv");
    let cfg = write_config(dir.path(), "sweep.json", &small_sweep_config(&csv));

    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = stdout(&out);
    assert!(text.contains("2 x 1 grid"), "stdout: {text}");
    assert!(text.contains("max EoF"), "stdout: {text}");

    let first = std::fs::read(&csv).unwrap();
    let lines: Vec<&str> = std::str::from_utf8(&first).unwrap().lines().collect();
    assert_eq!(lines.len(), 3, "header + one row per grid point");
    assert!(lines[0].starts_with("g,omega_r_det,eof,"));

    let meta: serde_json::Value = serde_json::from_slice(
        &std::fs::read(dir.path().join("grid.csv.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["config"]["model"]["gamma_x"], 0.1);
    assert!(meta["created_unix_seconds"].as_u64().unwrap() > 0);

    // rerun with an explicit worker count: identical CSV bytes
    let out = run(&["sweep", "--config", cfg.to_str().unwrap(), "--workers", "2"]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    assert_eq!(std::fs::read(&csv).unwrap(), first);
}

#[test]
fn sweep_without_output_path_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "no_out.json",
        r#"{
  "axes": {
    "axis1": { "name": "g", "start": 14.0, "stop": 16.0, "count": 2 },
    "axis2": { "name": "omega_r_det", "start": 15.0, "stop": 15.0, "count": 1 }
  }
}"#,
    );
    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", stderr(&out));
    assert!(stderr(&out).contains("output path"));
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    // a regular file where a directory is needed blocks even a root user
    let blocker = dir.path().join("blocker");
    std::fs::write(&blocker, b"file, not dir").unwrap();
    let csv = blocker.join("grid.csv");
    let cfg = write_config(dir.path(), "sweep.json", &small_sweep_config(&csv));

    let out = run(&["sweep", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3), "stderr: {}", stderr(&out));
}

#[test]
fn point_dump_rho_writes_full_density_matrix() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(
        dir.path(),
        "pt.json",
        r#"{
  "model": { "gamma_x": 0.1, "gamma_b": 0.1 },
  "axes": { "axis1": { "name": "g", "start": 10.0, "stop": 20.0, "count": 2 } }
}"#,
    );
    let rho = dir.path().join("rho.csv");
    let pair = dir.path().join("pair.csv");
    let out = run(&[
        "point",
        "--config",
        cfg.to_str().unwrap(),
        "--out",
        pair.to_str().unwrap(),
        "--dump-rho",
        rho.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));

    // 36x36 density matrix at the default n_max = 2, plus a header line
    let rho_text = std::fs::read_to_string(&rho).unwrap();
    assert_eq!(rho_text.lines().count(), 36 * 36 + 1);
    assert!(rho_text.starts_with("row,col,re,im"));

    let pair_text = std::fs::read_to_string(&pair).unwrap();
    assert_eq!(pair_text.lines().count(), 4 * 4 + 1);
}

#[test]
fn dressed_scan_writes_expected_columns() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("scan.csv");
    let cfg = write_config(
        dir.path(),
        "scan.json",
        &format!(
            r#"{{
  "axes": {{ "axis1": {{ "name": "delta_b", "start": 10.0, "stop": 40.0, "count": 4 }} }},
  "output": {{ "path": {out:?} }}
}}"#,
            out = csv.display().to_string()
        ),
    );
    let out = run(&["dressed-scan", "--config", cfg.to_str().unwrap()]);
    assert!(out.status.success(), "stderr: {}", stderr(&out));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "delta_b,a1,a2,a3,gamma_rp_t1,gamma_rp_t2,gamma_rp_t3,gamma_rp_s,\
         gamma_lp_t1,gamma_lp_t2,gamma_lp_t3,gamma_lp_s"
            .replace(char::is_whitespace, "")
    );
    assert_eq!(lines.count(), 4);
    // no meta requested -> no sidecar
    assert!(!dir.path().join("scan.csv.meta.json").exists());
}
