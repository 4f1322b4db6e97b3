use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_supercone"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let p = dir.path().join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const CONSTANT_SYSTEM: &str = r#"{"eta": {"kind": "constant", "value": [[2.0, 0.4], [0.4, 1.0]]},
  "H": {"kind": "constant", "value": 2.0}, "t0": 0.0, "t1": 10.0}"#;

fn config(dir: &TempDir, system: &str, initial: &str) -> String {
    write(dir, "cfg.json", &format!(r#"{{"system": {system}, "initial": {initial}}}"#))
}

fn rows(csv_text: &str) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().iter().map(str::to_owned).collect();
    let rows = r.records().map(|rec| rec.unwrap().iter().map(|x| x.parse().unwrap()).collect()).collect();
    (header, rows)
}

#[test]
fn uniform_probabilities_are_a_fixed_point() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"probabilities": [0.25, 0.25, 0.25, 0.25]}"#);
    let out = run(&["evolve", "--config", &cfg, "--samples", "50"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let (header, rows) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(header, ["t", "phi", "phi1", "phi2", "phibar", "p1", "p2", "p3", "p4", "delta_ellipsoid", "norm"]);
    assert_eq!(rows.len(), 50);
    for r in rows {
        for p in &r[5..9] {
            assert!((p - 0.25).abs() < 1e-12);
        }
    }
}

#[test]
fn zero_length_range_gives_the_input_row() {
    let dir = TempDir::new().unwrap();
    let system = r#"{"eta": {"kind": "constant", "value": [[1.0, 0.0], [0.0, 1.0]]}, "H": {"kind": "constant", "value": 1.0}, "t0": 0.5, "t1": 0.5}"#;
    let cfg = config(&dir, system, r#"{"state": {"phi": 0.8, "phi1": 0.36, "phi2": 0.48, "phibar": 0.0}}"#);
    let out = run(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let (_, rows) = rows(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(rows.len(), 1);
    let expected = [0.5, 0.8, 0.36, 0.48, 0.0];
    for (got, want) in rows[0].iter().zip(expected) {
        assert!((got - want).abs() < 1e-15);
    }
    assert!((rows[0][10] - 1.0).abs() < 1e-15);
}

#[test]
fn seeded_random_runs_are_identical() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"random": true}"#);
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    let c = dir.path().join("c.csv");
    for (path, seed) in [(&a, "7"), (&b, "7"), (&c, "8")] {
        let out = run(&["evolve", "--config", &cfg, "--seed", seed, "--out", path.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
        assert!(out.stdout.is_empty());
    }
    let (a, b, c) = (std::fs::read(a).unwrap(), std::fs::read(b).unwrap(), std::fs::read(c).unwrap());
    assert_eq!(a, b);
    assert_ne!(a, c);
}

#[test]
fn csv_layout() {
    let out = run(&["evolve", "--config", data("evolve.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(!text.contains('\r'));
    assert!(text.ends_with('\n'));
    for line in text.lines().skip(1) {
        for field in line.split(',') {
            // d.dddddddddddddddde±x: 17 significant digits
            let (mantissa, _) = field.split_once('e').unwrap();
            let digits = mantissa.trim_start_matches('-').replace('.', "");
            assert_eq!(digits.len(), 17, "{field}");
        }
    }
}

#[test]
fn json_trajectory_carries_the_transition_matrix() {
    let dir = TempDir::new().unwrap();
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"probabilities": [0.4, 0.1, 0.2, 0.3]}"#);
    let out = run(&["evolve", "--config", &cfg, "--format", "json", "--samples", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["rows"].as_array().unwrap().len(), 11);
    let m = doc["transition"].as_array().unwrap();
    assert_eq!(m.len(), 4);
    // last row equals the matrix applied to the first
    let rows = doc["rows"].as_array().unwrap();
    let p0: Vec<f64> = (5..9).map(|k| rows[0][k].as_f64().unwrap()).collect();
    for i in 0..4 {
        let via: f64 = (0..4).map(|j| m[i][j].as_f64().unwrap() * p0[j]).sum();
        assert!((via - rows[10][5 + i].as_f64().unwrap()).abs() < 1e-10);
    }
}

#[test]
fn evolve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let bad_system = r#"{"eta": {"kind": "constant", "value": [[1.0, 2.0], [2.0, 1.0]]}, "H": {"kind": "constant", "value": 1.0}, "t0": 0, "t1": 1}"#;
    let cfg = config(&dir, bad_system, r#"{"random": true}"#);
    assert_eq!(run(&["evolve", "--config", &cfg]).status.code(), Some(2));
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"random": true, "probabilities": [0.25, 0.25, 0.25, 0.25]}"#);
    assert_eq!(run(&["evolve", "--config", &cfg]).status.code(), Some(2));
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"probabilities": [0.5, 0.5, 0.5, 0.5]}"#);
    assert_eq!(run(&["evolve", "--config", &cfg]).status.code(), Some(2));
    let cfg = config(&dir, CONSTANT_SYSTEM, r#"{"probabilities": [1.0, 0.0, 0.0, 0.0]}"#);
    let out = run(&["evolve", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cone"));
    assert_eq!(run(&["evolve", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
}

#[test]
fn verify_default_seed_passes() {
    let out = run(&["verify"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 10);
}

#[test]
fn verify_catches_injected_berezin_fault() {
    let out = run(&["verify", "--suite", "algebra", "--inject-fault", "berezin-sign", "--samples", "10"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("FAIL algebra"));
}

#[test]
fn verify_suite_filter_and_json() {
    let out = run(&["verify", "--suite", "transition", "--format", "json", "--samples", "20"]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let suites = doc["suites"].as_array().unwrap();
    assert_eq!(suites.len(), 1);
    assert_eq!(suites[0]["name"], "transition");
    assert_eq!(doc["passed"], true);
    assert_eq!(run(&["verify", "--suite", "nope"]).status.code(), Some(2));
}

#[test]
fn ellipsoid_grid_labels_regions() {
    let dir = TempDir::new().unwrap();
    let cfg = write(&dir, "grid.json", r#"{"grid": 5, "format": "json"}"#);
    let out = run(&["ellipsoid", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    let pts = doc.as_array().unwrap();
    assert_eq!(pts.len(), 125);
    let find = |p: [f64; 3]| pts.iter().find(|s| (0..3).all(|i| s["p"][i].as_f64().unwrap() == p[i])).unwrap();
    let centre = find([0.25, 0.25, 0.25]);
    assert_eq!((centre["in_simplex"].as_bool(), centre["in_ellipsoid"].as_bool(), centre["in_cone"].as_bool()), (Some(true), Some(true), Some(true)));
    let corner = find([1.0, 0.0, 0.0]);
    assert_eq!(corner["in_simplex"], true);
    assert_eq!(corner["in_ellipsoid"], false);
    assert!(corner["delta_ellipsoid"].as_f64().unwrap() > 0.0);
}

#[test]
fn ellipsoid_random_samples() {
    let out = run(&["ellipsoid", "--samples", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 201);
    assert!(text.starts_with("p1,p2,p3,p4,delta_ellipsoid,delta_cone,in_simplex,in_ellipsoid,in_cone\n"));
    // every ellipsoid point lies in the simplex and the cone
    for line in text.lines().skip(1) {
        let f: Vec<&str> = line.split(',').collect();
        if f[7] == "true" {
            assert_eq!((f[6], f[8]), ("true", "true"));
        }
    }
}

#[test]
fn decompose_shipped_two_bit_form() {
    let out = run(&["decompose", data("two_bit_omega.json").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(doc["closed"], true);
    for k in ["d_omega", "dhat_omega_plus_d_a", "dhat_a_plus_d_eta", "dhat_eta"] {
        assert!(doc["quartet"][k].as_f64().unwrap() < 1e-12);
    }
    assert!(doc["reconstruction_error"].as_f64().unwrap() < 1e-12);
    assert!(!doc["gamma"]["terms"].as_array().unwrap().is_empty());
}

#[test]
fn decompose_rejects_non_closed_input() {
    let dir = TempDir::new().unwrap();
    let form = r#"{"n": 1, "m": 2, "terms": [{"x": [1], "theta": 0, "dx": 0, "dtheta": [2, 0], "re": 1.0, "im": 0.0}]}"#;
    let path = write(&dir, "bad.json", form);
    let out_path = dir.path().join("report.json");
    let out = run(&["decompose", &path, "--out", out_path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(out_path).unwrap()).unwrap();
    assert_eq!(doc["closed"], false);
    assert!(doc["quartet"]["dhat_a_plus_d_eta"].as_f64().unwrap() > 0.5);
}

#[test]
fn decompose_bosonic_form() {
    let dir = TempDir::new().unwrap();
    let form = r#"{"n": 2, "m": 2, "terms": [{"x": [0, 0], "theta": 0, "dx": 3, "dtheta": [0, 0], "re": 1.0, "im": 0.0}]}"#;
    let path = write(&dir, "bos.json", form);
    let out = run(&["decompose", &path]);
    assert_eq!(out.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(doc["beta"]["terms"].as_array().unwrap().is_empty());
    assert!(doc["gamma"]["terms"].as_array().unwrap().is_empty());
    assert_eq!(doc["omega0"]["terms"].as_array().unwrap().len(), 1);
    assert_eq!(run(&["decompose", &path, "--format", "csv"]).status.code(), Some(2));
}

#[test]
fn log_level_from_environment() {
    let out = bin().args(["evolve", "--config", data("evolve.json").to_str().unwrap()]).env("SUPERCONE_LOG", "info").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("evolving over 201 times"));
    let quiet = bin().args(["evolve", "--config", data("evolve.json").to_str().unwrap()]).env_remove("SUPERCONE_LOG").output().unwrap();
    assert!(quiet.stderr.is_empty());
}

#[test]
fn shipped_form_is_the_library_two_bit_form() {
    let text = std::fs::read_to_string(data("two_bit_omega.json")).unwrap();
    let shipped: supercone::json::SuperFormJson = serde_json::from_str(&text).unwrap();
    let expected = supercone::sampling::two_bit_example().omega_form().unwrap();
    assert_eq!(shipped.to_form().unwrap().max_abs_diff(&expected), 0.0);
    let spec: supercone::json::SystemSpec = serde_json::from_str(&std::fs::read_to_string(data("two_bit_system.json")).unwrap()).unwrap();
    assert_eq!(spec.build().unwrap().omega_form().unwrap().max_abs_diff(&expected), 0.0);
}
