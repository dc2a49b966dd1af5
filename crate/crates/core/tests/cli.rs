use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use dfsl::assembly::assemble;
use dfsl::cli::parse_config;
use dfsl::eigensolve::solve_problem;

fn dfsl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dfsl")).args(args).output().expect("run dfsl")
}

fn run_with_config(cmd: &str, config: &str, dir: &Path) -> Output {
    let path = dir.join("config.json");
    fs::write(&path, config).unwrap();
    let out = dir.join("out");
    dfsl(&[cmd, "--config", path.to_str().unwrap(), "--out", out.to_str().unwrap()])
}

fn read(dir: &Path, name: &str) -> String {
    fs::read_to_string(dir.join("out").join(name)).unwrap()
}

#[test]
fn solve_two_point_classical_problem() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("solve", r#"{"form":"gl","mu":1.0,"grid":{"n":1},"p":1,"q":0,"r":1}"#, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());

    let values: Vec<f64> = read(dir.path(), "eigenvalues.csv").lines().map(|l| l.parse().unwrap()).collect();
    let s5 = 5f64.sqrt();
    assert_eq!(values.len(), 2);
    assert!((values[0] - (3.0 - s5) / 2.0).abs() < 1e-14);
    assert!((values[1] - (3.0 + s5) / 2.0).abs() < 1e-14);
    assert!(read(dir.path(), "eigenvalues.csv").starts_with("0.38196601"));

    let vectors = read(dir.path(), "eigenvectors.csv");
    let rows: Vec<Vec<f64>> = vectors
        .lines()
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r.len() == 2));
    let manifest: serde_json::Value = serde_json::from_str(&read(dir.path(), "manifest.json")).unwrap();
    assert_eq!(manifest["command"], "solve");
    assert_eq!(manifest["dimension"], 2);
    assert!(manifest["max_relative_residual"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn solve_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("solve", r#"{"form":"gl","mu":1.0,"grid":{"n":0}}"#, dir.path());
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "eigenvalues.csv"), "1\n");
}

#[test]
fn csv_round_trip_is_exact() {
    let config = r#"{"form":"rl","mu":0.37,"grid":{"a":0,"b":21},"p":1.3,"q":0.2,"r":[1,1.1,1.2,1.3,1.4,1.5,1.6,1.7,1.8,1.9,2,2.1,2.2,2.3,2.4,2.5,2.6,2.7,2.8,2.9]}"#;
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("solve", config, dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));

    let spec = parse_config(config).unwrap();
    let problem = assemble(spec.form, &spec.coeffs, &spec.grid, spec.mu).unwrap();
    let decomp = solve_problem(&problem).unwrap();

    let values: Vec<f64> = read(dir.path(), "eigenvalues.csv").lines().map(|l| l.parse().unwrap()).collect();
    assert_eq!(values, decomp.values());
    for (i, line) in read(dir.path(), "eigenvectors.csv").lines().enumerate() {
        for (k, v) in line.split(',').enumerate() {
            assert_eq!(v.parse::<f64>().unwrap().to_bits(), decomp.vectors()[(i, k)].to_bits());
        }
    }
    let text = read(dir.path(), "eigenvalues.csv");
    assert!(text.ends_with('\n') && !text.contains('\r'));
}

#[test]
fn invalid_r_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config("solve", r#"{"form":"gl","mu":0.5,"grid":{"n":2},"r":[1,0,1]}"#, dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert!(!dir.path().join("out").exists());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("r must be positive") && err.contains("[1]"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn bad_configs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    for cfg in [
        "{ not json",
        r#"{"form":"rl","mu":1.5,"grid":{"a":0,"b":5}}"#,
        r#"{"form":"gl","mu":0.5,"grid":{"n":4},"extra":1}"#,
    ] {
        for cmd in ["solve", "verify"] {
            let out = run_with_config(cmd, cfg, dir.path());
            assert_eq!(out.status.code(), Some(1), "{cmd} {cfg}");
        }
    }
    let out = dfsl(&["solve", "--config", "/nonexistent/config.json", "--out", "x"]);
    assert_eq!(out.status.code(), Some(1));
    let out = dfsl(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn verify_single_problem_subset() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_with_config(
        "verify",
        r#"{"form":"rl","mu":0.25,"grid":{"a":0,"b":11},"p":2,"q":-0.5,"r":1.5,"seed":99}"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    let results = report["results"].as_array().unwrap();
    let mut names: Vec<&str> = results.iter().map(|r| r["name"].as_str().unwrap()).collect();
    names.sort_unstable();
    assert_eq!(
        names,
        ["classical_reduction", "kernel_identity", "orthogonality", "reality", "self_adjointness", "summation_by_parts"]
    );
    assert_eq!(report["seed"], 99);
    for r in results {
        assert_eq!(r["status"], "pass");
        assert!(!r["anchor"].as_str().unwrap().is_empty());
        if r["name"] == "classical_reduction" {
            assert_eq!(r["parameters"]["mu"], 1.0);
            continue;
        }
        if let Some(m) = r["parameters"]["mu"].as_f64() {
            assert_eq!(m, 0.25);
        }
        if let Some(n) = r["parameters"]["n"].as_u64() {
            assert_eq!(n, 10);
        }
    }
}

#[test]
fn verify_exits_3_when_a_check_fails() {
    let dir = tempfile::tempdir().unwrap();
    // custom coefficients of the wrong length make the operator checks fail
    let out = run_with_config(
        "verify",
        r#"{"form":"gl","mu":0.5,"grid":{"n":3},"sweep":{"mus":[0.5],"sizes":[4],"forms":["gl"],
            "coefficients":[{"custom":{"p":[1,2],"q":0,"r":1}}]}}"#,
        dir.path(),
    );
    assert_eq!(out.status.code(), Some(3));
    let report: serde_json::Value = serde_json::from_str(&read(dir.path(), "report.json")).unwrap();
    assert!(report["summary"]["failed"].as_u64().unwrap() >= 3);
}

#[test]
fn kernels_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("out");
    let out = dfsl(&["kernels", "--mu", "0.5", "--m", "2", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(
        read(dir.path(), "kernels.csv"),
        "k,gl_weight,rl_sum,rl_diff\n0,1,1,1\n1,-0.5,0.5,-0.5\n2,-0.125,0.375,-0.125\n"
    );

    let out = dfsl(&["kernels", "--mu", "1", "--m", "1", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "kernels.csv"), "k,gl_weight,rl_sum,rl_diff\n0,1,1,1\n1,-1,1,-1\n");

    let out = dfsl(&["kernels", "--mu", "0.3", "--m", "0", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(read(dir.path(), "kernels.csv"), "k,gl_weight,rl_sum,rl_diff\n0,1,1,1\n");

    let out = dfsl(&["kernels", "--mu", "0", "--m", "3", "--out", out_dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}
