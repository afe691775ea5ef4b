//! End-to-end checks of the command-line interface.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cartankit"))
}

fn write(dir: &std::path::Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

fn disc_element(re: f64, im: f64) -> String {
    format!(
        r#"{{"space":{{"factors":[{{"kind":"rect","rows":1,"cols":1}}]}},"coords":[{re},{im}]}}"#
    )
}

#[test]
fn distance_prints_15_digits() {
    let dir = std::env::temp_dir().join("cartankit-cli-dist");
    std::fs::create_dir_all(&dir).unwrap();
    let x = write(&dir, "x.json", &disc_element(0.0, 0.0));
    let y = write(&dir, "y.json", &disc_element(0.5, 0.0));
    let out = bin().arg("distance").arg(&x).arg(&y).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let val: f64 = text.trim().parse().unwrap();
    assert!((val - 0.5f64.atanh()).abs() < 1e-12, "got {text}");
}

#[test]
fn mobius_command_applies_the_map() {
    let dir = std::env::temp_dir().join("cartankit-cli-mob");
    std::fs::create_dir_all(&dir).unwrap();
    let a = write(&dir, "a.json", &disc_element(0.5, 0.0));
    let z = write(&dir, "z.json", &disc_element(0.5, 0.0));
    let out = bin().arg("mobius").arg(&a).arg(&z).output().unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let first: f64 = text.split_whitespace().next().unwrap().parse().unwrap();
    assert!((first - 0.8).abs() < 1e-12);
}

#[test]
fn missing_file_exits_2() {
    let out = bin()
        .arg("distance")
        .arg("/nonexistent/x.json")
        .arg("/nonexistent/y.json")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn corrupted_axioms_exit_1() {
    let out = bin()
        .args(["axioms", "--space", "rect:2x2", "--samples", "40", "--corrupt-triple"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn axioms_pass_and_are_deterministic() {
    let run = || {
        bin()
            .args(["axioms", "--space", "disc,spin:3", "--samples", "60", "--seed", "99"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "same seed must give identical bytes");
}

#[test]
fn wolff_and_horoball_pipeline() {
    let dir = std::env::temp_dir().join("cartankit-cli-wolff");
    std::fs::create_dir_all(&dir).unwrap();
    let map = write(
        &dir,
        "map.json",
        &format!(r#"{{"type":"mobius","a":{}}}"#, disc_element(0.5, 0.0)),
    );
    let out = bin().arg("wolff").arg("--map").arg(&map).output().unwrap();
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let xi = v["xi"]["coords"][0].as_f64().unwrap();
    assert!((xi - 1.0).abs() < 1e-6, "Wolff point should be 1, got {xi}");
    assert!((v["sigmas"][0].as_f64().unwrap() - 1.0).abs() < 1e-9);
    assert!(v["final_boundary_gap"].as_f64().unwrap() < 1e-4);

    let out = bin()
        .arg("horoball")
        .arg("--map")
        .arg(&map)
        .args(["--lambda", "1", "--samples", "80", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success(), "horoball must exit 0 without violations");
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["invariance_violations"].as_u64().unwrap(), 0);
    assert!(v["agreement_rate"].as_f64().unwrap() >= 0.999);
    assert!((v["center"]["coords"][0].as_f64().unwrap() - 0.5).abs() < 1e-9);
}

#[test]
fn horoball_parallel_output_matches_serial() {
    let dir = std::env::temp_dir().join("cartankit-cli-par");
    std::fs::create_dir_all(&dir).unwrap();
    let map = write(
        &dir,
        "map.json",
        &format!(r#"{{"type":"mobius","a":{}}}"#, disc_element(0.4, 0.3)),
    );
    let run = |threads: &str| {
        bin()
            .arg("horoball")
            .arg("--map")
            .arg(&map)
            .args(["--lambda", "1", "--samples", "64", "--seed", "9", "--parallel", threads])
            .output()
            .unwrap()
    };
    let serial = run("1");
    let parallel = run("4");
    assert!(serial.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn iterate_emits_csv_with_slice_deviation() {
    let dir = std::env::temp_dir().join("cartankit-cli-iter");
    std::fs::create_dir_all(&dir).unwrap();
    let map = write(
        &dir,
        "map.json",
        &format!(r#"{{"type":"mobius","a":{}}}"#, disc_element(0.5, 0.0)),
    );
    let x0 = write(&dir, "x0.json", &disc_element(0.0, 0.0));
    let out = bin()
        .arg("iterate")
        .args(["--map"])
        .arg(&map)
        .args(["--x0"])
        .arg(&x0)
        .args(["--n", "45"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 47); // header + 46 rows
    assert!(lines[0].starts_with("n,re0,im0"));
    // orbit row n=2 is 0.8
    let row2: Vec<&str> = lines[3].split(',').collect();
    let val: f64 = row2[1].parse().unwrap();
    assert!((val - 0.8).abs() < 1e-12);
    // the tail is within 1e-3 of the boundary component {1}
    let last: Vec<&str> = lines[46].split(',').collect();
    let dev: f64 = last.last().unwrap().parse().unwrap();
    assert!(dev <= 1e-3, "tail slice deviation {dev}");
}

#[test]
fn spectral_validates_random_elements() {
    let out = bin()
        .args(["spectral", "--space", "antisym:4", "--seed", "11"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("PASS"));
}
