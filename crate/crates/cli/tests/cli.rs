use std::f64::consts::PI;
use std::process::{Command, Output};

use serde_json::Value;

fn hgs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hgs"))
        .args(args)
        .env_remove("HGS_SEED")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report")
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn column(header: &str, name: &str) -> usize {
    header.split(',').position(|c| c == name).unwrap()
}

#[test]
fn verify_canonical_exit_codes() {
    let ok = hgs(&["verify-canonical", "--no-timestamp"]);
    assert_eq!(code(&ok), 0, "{}", stdout(&ok));
    assert_eq!(
        code(&hgs(&["verify-canonical", "--alpha", "2", "--beta", "2"])),
        1
    );
    let empty = hgs(&["verify-canonical", "--lambda-min", "2"]);
    assert_eq!(code(&empty), 2);
    assert!(String::from_utf8_lossy(&empty.stderr).contains("no quadrature nodes"));
    assert_eq!(code(&hgs(&["verify-canonical", "--bounds", "1,2"])), 2);
    assert_eq!(code(&hgs(&["verify-canonical", "--spectrum", "-2,2"])), 2);
}

#[test]
fn verify_canonical_report_is_deterministic_without_timestamp() {
    let a = hgs(&["verify-canonical", "--json", "--no-timestamp"]);
    let b = hgs(&["verify-canonical", "--json", "--no-timestamp"]);
    assert_eq!(a.stdout, b.stdout);
    let report = json(&a);
    assert!(report.get("timestamp_unix").is_none());
    assert_eq!(report["pass"], Value::Bool(true));
    let stamped = json(&hgs(&["verify-canonical", "--json"]));
    assert!(stamped["timestamp_unix"].as_u64().unwrap() > 0);
}

#[test]
fn report_written_to_out_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = hgs(&[
        "verify-canonical",
        "--no-timestamp",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["command"], "verify-canonical");
    assert_eq!(report["details"]["density"]["mu_e"].as_f64(), Some(1.0));
}

#[test]
fn sinc_point_row_carries_printed_value() {
    let out = hgs(&["sinc", "--point", "0.5,1,1"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    let row = &csv_rows(&text)[0];
    let s0: f64 = row[column(header, "printed_s0_re")].parse().unwrap();
    assert!((s0 + 1.0 / (3.0 * PI * PI)).abs() < 1e-12);
    let q: f64 = row[column(header, "quadrature_s0_re")].parse().unwrap();
    assert!((q - 1.0 / (3.0 * PI * PI)).abs() < 1e-6);
}

#[test]
fn sinc_outside_strip_and_random_points() {
    let out = hgs(&["sinc", "--point", "1.5,0.2,0.3", "--point", "-1,0.5,0.5"]);
    let text = stdout(&out);
    let header = text.lines().next().unwrap().to_string();
    for row in csv_rows(&text) {
        for name in [
            "corrected_s0_re",
            "printed_s1_re",
            "quadrature_s_re",
            "quadrature_s_im",
        ] {
            assert_eq!(row[column(&header, name)].parse::<f64>().unwrap(), 0.0);
        }
    }
    let a = hgs(&[
        "sinc",
        "--random",
        "100",
        "--seed",
        "7",
        "--lambda-nodes",
        "256",
    ]);
    let b = hgs(&[
        "sinc",
        "--random",
        "100",
        "--seed",
        "7",
        "--lambda-nodes",
        "256",
    ]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(csv_rows(&stdout(&a)).len(), 100);
    let c = hgs(&[
        "sinc",
        "--random",
        "100",
        "--seed",
        "8",
        "--lambda-nodes",
        "256",
    ]);
    assert_ne!(a.stdout, c.stdout);
}

#[test]
fn sinc_seed_from_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_hgs"));
        cmd.args(["sinc", "--random", "3", "--lambda-nodes", "64"])
            .args(extra)
            .env_remove("HGS_SEED");
        if let Some(v) = env {
            cmd.env("HGS_SEED", v);
        }
        cmd.output().unwrap().stdout
    };
    assert_eq!(run(Some("8"), &[]), run(None, &["--seed", "8"]));
    assert_eq!(
        run(Some("8"), &["--seed", "9"]),
        run(None, &["--seed", "9"])
    );
    let bad = Command::new(env!("CARGO_BIN_EXE_hgs"))
        .args(["sinc", "--random", "3"])
        .env("HGS_SEED", "abc")
        .output()
        .unwrap();
    assert_eq!(code(&bad), 2);
}

#[test]
fn sinc_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("points.csv");
    std::fs::write(&path, "x,y,z\n0.5,1,1\n-0.25,0.5,0.1\n").unwrap();
    let out = hgs(&[
        "sinc",
        "--points-file",
        path.to_str().unwrap(),
        "--lambda-nodes",
        "256",
    ]);
    assert_eq!(code(&out), 0);
    assert_eq!(csv_rows(&stdout(&out)).len(), 2);
    assert_eq!(
        code(&hgs(&["sinc", "--points-file", "/nonexistent/points.csv"])),
        2
    );
    std::fs::write(&path, "x,y,z\n0.5,oops,1\n").unwrap();
    assert_eq!(
        code(&hgs(&["sinc", "--points-file", path.to_str().unwrap()])),
        2
    );
    assert_eq!(code(&hgs(&["sinc"])), 2);
    assert_eq!(code(&hgs(&["sinc", "--point", "1,2"])), 2);
}

#[test]
fn sample_default_and_restricted_spectrum() {
    let out = hgs(&["sample", "--json", "--no-timestamp"]);
    assert_eq!(code(&out), 0);
    let report = json(&out);
    let rows = report["details"]["doubling"].as_array().unwrap();
    let ratio = rows[0]["isometry_ratio"].as_f64().unwrap();
    assert!((0.99..=1.01).contains(&ratio), "{ratio}");
    let smooth: Vec<f64> = rows
        .iter()
        .map(|r| r["smooth_reconstruction_error"].as_f64().unwrap())
        .collect();
    assert!(smooth[1] < smooth[0]);

    let half = json(&hgs(&[
        "sample",
        "--json",
        "--no-timestamp",
        "--spectrum",
        "-0.5,0.5",
    ]));
    assert_eq!(
        half["details"]["density"]["interpolation"],
        Value::Bool(false)
    );
    assert_eq!(half["details"]["density"]["mu_e"].as_f64(), Some(0.25));
}

#[test]
fn sample_error_does_not_grow_with_larger_bounds() {
    let default = json(&hgs(&["sample", "--json", "--no-timestamp"]));
    let large = json(&hgs(&[
        "sample",
        "--json",
        "--no-timestamp",
        "--bounds",
        "8,64,32",
    ]));
    let err = |r: &Value| {
        r["details"]["doubling"][0]["reconstruction_error"]
            .as_f64()
            .unwrap()
    };
    assert!(
        err(&large) <= err(&default) + 1e-8,
        "{} {}",
        err(&large),
        err(&default)
    );
    assert_eq!(code(&hgs(&["sample", "--bounds", "a,b,c"])), 2);
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cfg.json");
    std::fs::write(&path, r#"{"alpha": 2.0, "beta": 2.0}"#).unwrap();
    let cfg = path.to_str().unwrap();
    assert_eq!(code(&hgs(&["verify-canonical", "--config", cfg])), 1);
    assert_eq!(
        code(&hgs(&[
            "verify-canonical",
            "--config",
            cfg,
            "--alpha",
            "1",
            "--beta",
            "1"
        ])),
        0
    );
    std::fs::write(&path, r#"{"alpha": 2.0, "colour": 1}"#).unwrap();
    assert_eq!(code(&hgs(&["verify-canonical", "--config", cfg])), 2);
}

#[test]
fn density_verdicts() {
    let ok = hgs(&["density", "-1,1", "1", "1"]);
    assert_eq!(code(&ok), 0);
    assert!(stdout(&ok).contains("interpolation        true"));
    let v = json(&hgs(&["density", "-1,0.5", "1", "1", "--json"]));
    assert_eq!(v["mu_e"].as_f64(), Some(0.625));
    assert_eq!(v["interpolation"], Value::Bool(false));
    let v = json(&hgs(&["density", "-1,1", "0.5", "1", "--json"]));
    assert_eq!(v["target"].as_f64(), Some(2.0));
    assert_eq!(v["mu_e"].as_f64(), Some(1.0));
    assert_eq!(v["e_in_window"], Value::Bool(true));
    assert_eq!(v["interpolation"], Value::Bool(false));
    assert_eq!(code(&hgs(&["density", "-1,1", "2", "2"])), 1);
    assert_eq!(code(&hgs(&["density", "-1,1", "0", "1"])), 2);
    assert_eq!(code(&hgs(&["density", "nonsense", "1", "1"])), 2);
}

#[test]
fn threads_flag() {
    assert_eq!(code(&hgs(&["verify-canonical", "--threads", "2"])), 0);
    assert_eq!(code(&hgs(&["verify-canonical", "--threads", "0"])), 2);
}
