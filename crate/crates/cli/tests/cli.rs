use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use fourier_gls_cli::{SuiteConfig, Suites};

fn fgls() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_fgls"));
    cmd.env_remove("SEED");
    cmd
}

fn default_config() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs/default.toml")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn small_config(dir: &Path, suites: Suites) -> PathBuf {
    let cfg = SuiteConfig {
        groups: vec![vec![8], vec![4, 3]],
        trials: 2,
        suites,
        ..SuiteConfig::default()
    };
    let path = dir.join("small.toml");
    std::fs::write(&path, toml::to_string(&cfg).unwrap()).unwrap();
    path
}

#[test]
fn default_config_passes() {
    let out = fgls().arg("suite").arg(default_config()).output().unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stdout));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("theorem21"), "{text}");
}

#[test]
fn zero_tolerance_fails_checks() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), Suites::default());
    let out = fgls()
        .arg("suite")
        .arg(&cfg)
        .args(["--tolerance", "0"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn conjugate_suites_fail() {
    let dir = tempfile::tempdir().unwrap();
    let suites = Suites {
        inversion: false,
        hy: false,
        hy_dual: false,
        theorem21: false,
        tail: false,
        ..Suites::all()
    };
    let cfg = small_config(dir.path(), suites);
    let json = dir.path().join("r.json");
    let out = fgls()
        .arg("suite")
        .arg(&cfg)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["passed"], false);
    assert!(report["summary"]["hy-conjugate"]["fail"].as_u64().unwrap() > 0);
}

#[test]
fn bad_input_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let missing = fgls()
        .args(["suite", "/definitely/not/here.toml"])
        .output()
        .unwrap();
    assert_eq!(code(&missing), 2);

    let bad = dir.path().join("bad.toml");
    std::fs::write(&bad, "groups = [[8]]\ntrials = \"many\"\n").unwrap();
    assert_eq!(code(&fgls().arg("suite").arg(&bad).output().unwrap()), 2);

    let out = dir.path().join("scan.csv");
    let empty = fgls()
        .args(["scan", "1", "2", "1", "9", "4"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&empty), 2);
    assert!(!out.exists());
}

#[test]
fn unwritable_output_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), Suites::default());
    let json = dir.path().join("missing-dir").join("r.json");
    let out = fgls()
        .arg("suite")
        .arg(&cfg)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(code(&out), 3, "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn seed_comes_from_the_environment() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = small_config(dir.path(), Suites::default());
    let json = dir.path().join("r.json");
    let out = fgls()
        .env("SEED", "99")
        .arg("suite")
        .arg(&cfg)
        .arg("--json")
        .arg(&json)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["config"]["seed"], 99);
}

#[test]
fn scan_writes_sqrt_n_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("scan.csv");
    let run = fgls()
        .args(["scan", "1", "2", "1", "4", "9"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&run), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("N,p,q,A,ratio,K_or_inf"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    for row in rows {
        let n: f64 = row[0].parse().unwrap();
        let ratio: f64 = row[4].parse().unwrap();
        assert!((ratio - n.sqrt()).abs() <= 1e-12 * n.sqrt(), "{row:?}");
        assert_eq!(row[5], "inf");
    }

    // Inside Q the witness stays under K = A^(1 - 1/p - 1/q).
    let run = fgls()
        .args(["scan", "4", "2", "4", "2", "12"])
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&run), 0);
    let text = std::fs::read_to_string(&out).unwrap();
    for line in text.lines().skip(1) {
        let row: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert!((row[5] - 4f64.powf(0.25)).abs() < 1e-12);
        assert!(row[4] <= row[5] * (1.0 + 1e-12), "{line}");
    }
}

#[test]
fn fundamental_writes_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("phi.csv");
    let run = fgls()
        .args(["fundamental", "const:1"])
        .arg(&out)
        .args(["--deltas", "4,0.25", "--range", "2,4"])
        .output()
        .unwrap();
    assert_eq!(code(&run), 0, "{}", String::from_utf8_lossy(&run.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let rows: Vec<Vec<f64>> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    // Sorted by delta; phi = max(delta^(1/2), delta^(1/4)) on [2, 4].
    assert_eq!(rows.len(), 2);
    assert!((rows[0][3] - 0.25f64.powf(0.25)).abs() < 1e-12);
    assert!((rows[1][3] - 2.0).abs() < 1e-12);
}

#[test]
fn opnorm_reports_sound_estimate() {
    let out = fgls()
        .args(["opnorm", "8,3", "4", "2", "4"])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.starts_with("estimate"), "{text}");
    let outside = fgls()
        .args(["opnorm", "8", "1", "1", "2"])
        .output()
        .unwrap();
    assert_eq!(code(&outside), 2);
}
