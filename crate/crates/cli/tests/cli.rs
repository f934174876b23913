//! End-to-end checks of the `qheat` binary: determinism, formats, config
//! files and exit codes.

use std::io::Write;
use std::process::Command;

fn qheat() -> Command {
    Command::new(env!("CARGO_BIN_EXE_qheat"))
}

fn small_config(methods: &str, grid: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::Builder::new().suffix(".toml").tempfile().unwrap();
    write!(
        f,
        r#"
name = "small"
kind = "oscillator"
methods = [{methods}]

[params]
omega_c = 1.0
omega_h = 2.0
g = 0.1
kappa_c = 0.05
kappa_h = 0.05
kT_c = 0.5
kT_h = 5.0

[sweep]
variable = "g"
grid = [{grid}]
"#
    )
    .unwrap();
    f.flush().unwrap();
    f
}

#[test]
fn csv_output_is_byte_deterministic() {
    let config = small_config("\"local\", \"global\"", "0.05, 0.1, 0.2");
    let run = || {
        let out = qheat()
            .args(["run", config.path().to_str().unwrap()])
            .output()
            .unwrap();
        assert!(
            out.status.success(),
            "{}",
            String::from_utf8_lossy(&out.stderr)
        );
        out.stdout
    };
    let first = run();
    let second = run();
    assert_eq!(first, second);
    let text = String::from_utf8(first).unwrap();
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert!(header.starts_with("sweep_var,sweep_value,method,"));
    // 3 sweep values x 2 methods.
    assert_eq!(lines.count(), 6);
}

#[test]
fn json_output_parses_and_orders_methods() {
    let config = small_config("\"local\", \"global\"", "0.1");
    let out = qheat()
        .args(["run", config.path().to_str().unwrap(), "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    // Alphabetical method ordering within a sweep value.
    assert_eq!(rows[0][2], "global");
    assert_eq!(rows[1][2], "local");
}

#[test]
fn per_point_failures_set_exit_code_two() {
    // The secular description requires Ω_c − g > 0; the last grid point
    // violates it and must become an error row, not a crash.
    let config = small_config("\"global\"", "0.1, 0.99, 1.5");
    let out = qheat()
        .args(["run", config.path().to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8(out.stdout).unwrap();
    let error_rows: Vec<&str> = text.lines().skip(1).filter(|l| !l.ends_with(',')).collect();
    assert_eq!(error_rows.len(), 1, "{text}");
    assert!(error_rows[0].contains("not positive"));
    // Healthy points are still present.
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn unknown_scenario_is_fatal() {
    let out = qheat().args(["run", "fig99"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("fig99"));
}

#[test]
fn writes_output_file() {
    let config = small_config("\"local\"", "0.1");
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("table.csv");
    let out = qheat()
        .args([
            "run",
            config.path().to_str().unwrap(),
            "--out",
            path.to_str().unwrap(),
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 2);
}

#[test]
fn qubit_preset_emits_density_matrix_columns() {
    let out = qheat().args(["run", "fig8"]).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text.lines().next().unwrap();
    assert!(header.contains("fidelity_local_global"));
    assert!(header.contains("rho33"));
    // 60 sweep points x 2 methods + header.
    assert_eq!(text.lines().count(), 121);
}
