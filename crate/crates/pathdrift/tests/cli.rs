//! CLI behavior: exit codes, defaults, diagnostics, output files.

use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_pathdrift")
}

fn temp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("pathdrift-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_ou_model(dir: &Path) -> String {
    let path = dir.join("ou.toml");
    std::fs::write(
        &path,
        r#"
dim = 1
[drift]
kind = "linear"
params = { gain = -1.0 }
[diffusion]
kind = "constant"
matrix = [1.0]
[growth]
K = 1.0
[ellipticity]
lower = 1.0
upper = 1.0
[holder]
alpha = 1.0
norm = 0.0
"#,
    )
    .unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn no_arguments_prints_usage_and_exits_2() {
    let out = Command::new(bin()).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("usage"));
}

#[test]
fn unknown_flag_exits_2_with_usage() {
    let out = Command::new(bin())
        .args([
            "bangbang", "--x", "0", "--y", "0.4", "--t", "1", "--bogus", "1",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("unknown flag"));
    assert!(err.contains("usage"));
}

#[test]
fn malformed_model_file_exits_2_with_diagnostics() {
    let dir = temp_dir("badmodel");
    let path = dir.join("bad.toml");
    std::fs::write(
        &path,
        "dim = 1\n[drift]\nkind = \"linear\"\nparams = { gain = }\n",
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "density",
            "--model",
            path.to_str().unwrap(),
            "--method",
            "girsanov",
            "--x",
            "0",
            "--y",
            "0",
            "--t",
            "1",
            "--samples",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    // toml errors carry line/column context
    assert!(err.contains("malformed model file"), "stderr: {err}");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn numeric_failure_exits_3() {
    let dir = temp_dir("numeric");
    // zero diffusion makes the Girsanov weight undefined
    let path = dir.join("degenerate.toml");
    std::fs::write(
        &path,
        r#"
dim = 1
[drift]
kind = "linear"
params = { gain = -1.0 }
[diffusion]
kind = "builtin"
params = { name = "zero" }
[growth]
K = 1.0
[ellipticity]
lower = 1.0
upper = 1.0
[holder]
alpha = 1.0
norm = 0.0
"#,
    )
    .unwrap();
    let out = Command::new(bin())
        .args([
            "density",
            "--model",
            path.to_str().unwrap(),
            "--method",
            "girsanov",
            "--x",
            "0",
            "--y",
            "0",
            "--t",
            "1",
            "--samples",
            "10",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn default_bandwidth_is_applied_and_recorded() {
    let dir = temp_dir("defaults");
    let model = write_ou_model(&dir);
    let out_file = dir.join("density.csv");
    let status = Command::new(bin())
        .args([
            "density",
            "--model",
            &model,
            "--method",
            "girsanov",
            "--x",
            "1.0",
            "--y",
            "0.0",
            "--t",
            "0.5",
            "--samples",
            "2000",
            "--steps",
            "32",
            "--seed",
            "3",
            "--out",
            out_file.to_str().unwrap(),
        ])
        .status()
        .unwrap();
    assert!(status.success());
    let csv = std::fs::read_to_string(&out_file).unwrap();
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let bw_col = header.iter().position(|c| *c == "bandwidth").unwrap();
    // the documented default (t/N)^{1/(d+4)}
    let expected = (0.5f64 / 2000.0).powf(0.2);
    let recorded: f64 = row[bw_col].parse().unwrap();
    assert!((recorded - expected).abs() < 1e-12);
    // JSON mirror exists and carries the same digest shape
    let json = std::fs::read_to_string(dir.join("density.json")).unwrap();
    let parsed: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(parsed["command"], "density");
    assert!(parsed["config_digest"].as_str().unwrap().len() == 16);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn env_seed_overrides_flag() {
    let dir = temp_dir("envseed");
    let model = write_ou_model(&dir);
    let run = |env_seed: Option<&str>, flag_seed: &str, out: &PathBuf| {
        let mut cmd = Command::new(bin());
        cmd.args([
            "simulate",
            "--model",
            &model,
            "--x0",
            "1.0",
            "--t",
            "0.5",
            "--steps",
            "16",
            "--paths",
            "4",
            "--seed",
            flag_seed,
            "--out",
            out.to_str().unwrap(),
        ]);
        match env_seed {
            Some(s) => cmd.env("PATHDRIFT_SEED", s),
            None => cmd.env_remove("PATHDRIFT_SEED"),
        };
        assert!(cmd.status().unwrap().success());
        std::fs::read_to_string(out).unwrap()
    };
    let a = run(None, "7", &dir.join("a.csv"));
    let b = run(Some("7"), "99", &dir.join("b.csv"));
    let strip = |s: &str| {
        s.lines()
            .map(|l| {
                l.rsplit_once(',')
                    .map(|(r, _)| r.to_string())
                    .unwrap_or_default()
            })
            .collect::<Vec<_>>()
            .join("\n")
    };
    assert_eq!(strip(&a), strip(&b));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn selftest_exits_zero_and_reports_checks() {
    let out = Command::new(bin()).arg("selftest").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.lines().filter(|l| l.starts_with("[ok]")).count() >= 20);
    assert!(!text.contains("FAIL"));
}

#[test]
fn bangbang_prints_bracket_to_stdout() {
    let out = Command::new(bin())
        .args([
            "bangbang", "--x", "0.0", "--y", "0.4", "--t", "1.0", "--bsup", "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("x,y,t,bsup,lower,upper,wall_ms"));
    let row: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    let lower: f64 = row[4].parse().unwrap();
    let upper: f64 = row[5].parse().unwrap();
    assert!(lower > 0.0 && lower < upper);
}
