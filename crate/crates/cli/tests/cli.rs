use std::fs;
use std::process::{Command, Output};

fn sweepslide(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sweepslide"))
        .args(args)
        .output()
        .unwrap()
}

#[test]
fn builtin_csv_to_stdout() {
    let out = sweepslide(&["builtin", "floor", "--frames", "5"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("frame,x,y,z,iterations,min_mesh_distance,displacement,planes_hit")
    );
    assert_eq!(lines.count(), 5);
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("max iterations:"), "{stderr}");
    assert!(stderr.contains("snag frames:"), "{stderr}");
}

#[test]
fn output_is_deterministic() {
    let args = ["builtin", "random_soup", "--seed", "11", "--algo", "legacy"];
    assert_eq!(sweepslide(&args).stdout, sweepslide(&args).stdout);
}

#[test]
fn both_writes_one_file_per_algorithm() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("corner.json");
    let status = sweepslide(&[
        "builtin",
        "obtuse_corner",
        "--algo",
        "both",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(
        status.status.success(),
        "{}",
        String::from_utf8_lossy(&status.stderr)
    );
    for tag in ["improved", "legacy"] {
        let text = fs::read_to_string(dir.path().join(format!("corner.{tag}.json"))).unwrap();
        assert!(text.trim_start().starts_with('['), "{tag}: {text}");
        assert!(text.contains("\"planes_hit\""));
    }
    assert!(!out.exists());
}

#[test]
fn both_without_out_is_an_error() {
    let out = sweepslide(&["builtin", "floor", "--algo", "both"]);
    assert!(!out.status.success());
}

#[test]
fn run_scenario_file() {
    let dir = tempfile::tempdir().unwrap();
    let scenario = dir.path().join("drop.toml");
    fs::write(
        &scenario,
        "name = \"drop\"\nframes = 2\nradii = [2.0, 1.0, 0.5]\nstart = [0, 0, 3]\nvelocity = [0, 0, -3]\n[mesh]\nbuiltin = \"floor\"\n",
    )
    .unwrap();
    let csv = dir.path().join("drop.csv");
    let out = sweepslide(&[
        "run",
        scenario.to_str().unwrap(),
        "--out",
        csv.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = fs::read_to_string(csv).unwrap();
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|f| f.parse().unwrap())
        .collect();
    assert!((last[3] - 1.005 * 0.5).abs() <= 1e-6, "{text}");
}

#[test]
fn bad_inputs_fail() {
    assert!(!sweepslide(&["builtin", "pyramid"]).status.success());
    assert!(!sweepslide(&["builtin", "crease", "--angle", "180"])
        .status
        .success());
    assert!(!sweepslide(&["builtin", "floor", "--epsilon", "-1"])
        .status
        .success());
    assert!(!sweepslide(&["run", "/no/such/scenario.toml"])
        .status
        .success());
}

#[test]
fn degenerate_faces_are_reported() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(
        dir.path().join("m.obj"),
        "v -9 -9 0\nv 9 -9 0\nv 9 9 0\nf 1 2 3\nf 1 2 1\n",
    )
    .unwrap();
    let scenario = dir.path().join("s.toml");
    fs::write(&scenario, "name = \"s\"\nframes = 1\nstart = [3, -3, 2]\nvelocity = [0, 0, -2]\n[mesh]\nfile = \"m.obj\"\n").unwrap();
    let out = sweepslide(&["run", scenario.to_str().unwrap()]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(String::from_utf8_lossy(&out.stderr).contains("skipped 1 degenerate"));
}

#[test]
fn verify_passes_on_a_small_budget() {
    let out = sweepslide(&["verify", "--trials", "100", "--fuzz-frames", "500"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(out.status.success(), "{text}");
    assert_eq!(
        text.lines().filter(|l| l.starts_with("[PASS]")).count(),
        10,
        "{text}"
    );
}
