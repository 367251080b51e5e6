use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_oscillaprop"));
    c.env_remove("OSCILLAPROP_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn oscillaprop")
}

fn grids() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../grids")
}

fn read_grid(path: &Path) -> Vec<(f64, f64, f64)> {
    std::fs::read_to_string(path)
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let v: Vec<f64> = l.split(',').map(|s| s.parse().unwrap()).collect();
            (v[0], v[1], v[2])
        })
        .collect()
}

fn l2(a: &[(f64, f64, f64)], b: &[(f64, f64, f64)]) -> f64 {
    assert_eq!(a.len(), b.len());
    let h = a[1].0 - a[0].0;
    (a.iter().zip(b).map(|(p, q)| (p.1 - q.1).powi(2) + (p.2 - q.2).powi(2)).sum::<f64>() * h).sqrt()
}

#[test]
fn mu_table_for_m4_starts_at_zero() {
    let out = run(&["mu", "--model", "M4", "--t-end", "1", "--steps", "10"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,mu,mu_prime");
    assert_eq!(lines[1], "0,0,0");
    assert_eq!(lines.len(), 12);
}

#[test]
fn identities_report_passes_for_m1() {
    let out = run(&["identities", "--model", "M1", "--t", "0.5"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 4);
}

#[test]
fn identities_exit_one_on_failed_check() {
    let out = run(&["identities", "--model", "M3", "--t", "0.4", "--tol", "residual=1e-300"]);
    assert_eq!(out.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_passed"], false);
}

#[test]
fn harmonic_ground_state_picks_up_phase() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("evolved.csv");
    let input = grids().join("ground.csv");
    let out = run(&["evolve", "--model", "HARMONIC", "--input", input.to_str().unwrap(), "--t", "0.5", "--output", out_path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let a = read_grid(&input);
    let b = read_grid(&out_path);
    let (c, s) = (0.25f64.cos(), -(0.25f64.sin()));
    let worst = a
        .iter()
        .zip(&b)
        .map(|(p, q)| (p.1 * c - p.2 * s - q.1).abs().max((p.1 * s + p.2 * c - q.2).abs()))
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "max deviation {worst:e}");
}

#[test]
fn evolve_then_invert_round_trips_shipped_grids() {
    let dir = tempfile::tempdir().unwrap();
    let mid = dir.path().join("mid.csv");
    let back = dir.path().join("back.csv");
    for name in ["ground.csv", "first_excited.csv", "packet.csv"] {
        let input = grids().join(name);
        for model in ["M1", "M2", "M3", "M4", "HARMONIC", "FREE"] {
            let fwd = run(&["evolve", "--model", model, "--t", "0.5", "--input", input.to_str().unwrap(), "--output", mid.to_str().unwrap()]);
            assert_eq!(fwd.status.code(), Some(0), "{name} {model}: {}", String::from_utf8_lossy(&fwd.stderr));
            let inv = run(&["invert", "--model", model, "--t", "0.5", "--input", mid.to_str().unwrap(), "--output", back.to_str().unwrap()]);
            assert_eq!(inv.status.code(), Some(0), "{name} {model}: {}", String::from_utf8_lossy(&inv.stderr));
            let d = l2(&read_grid(&input), &read_grid(&back));
            assert!(d < 1e-4, "{name} {model}: {d:e}");
        }
    }
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["nls", "--model", "M2", "--s", "0.5", "--N", "64", "--L", "4"];
    let one = bin().args(args).env("OSCILLAPROP_THREADS", "1").output().unwrap();
    let four = bin().args(args).env("OSCILLAPROP_THREADS", "4").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);

    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.csv"), dir.path().join("b.csv"));
    for p in [&a, &b] {
        let out = run(&["scan", "--model", "M1", "--t", "0.5", "--s", "1", "--eps", "1e-5", "--seed", "7", "--output", p.to_str().unwrap()]);
        assert!(out.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    // nothing but the two artifacts is left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn scan_csv_has_expected_shape() {
    let out = run(&["scan", "--model", "M1", "--t", "0.5", "--s", "1", "--eps", "1e-4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,kappa"));
    assert_eq!(lines.count(), 21);
}

#[test]
fn configuration_errors_exit_two() {
    assert_eq!(run(&["mu", "--model", "M7"]).status.code(), Some(2));
    assert_eq!(run(&["mu", "--model", "DAMPED:0.1:1"]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--input", "/nonexistent/grid.csv"]).status.code(), Some(2));
    assert_eq!(run(&["evolve", "--N", "100"]).status.code(), Some(2));
    assert_eq!(run(&["expand", "--model", "M3"]).status.code(), Some(2));
    assert_eq!(run(&["mu", "--output", "/nonexistent/dir/out.csv"]).status.code(), Some(2));
    assert_eq!(run(&["identities", "--tol", "bogus=1"]).status.code(), Some(2));
    let threads = bin().args(["mu"]).env("OSCILLAPROP_THREADS", "many").output().unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn malformed_grid_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("bad.csv");
    std::fs::write(&p, "x,re,im\n0,1\n").unwrap();
    let out = run(&["evolve", "--input", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("expected 3 fields"));
}
