use std::fs;

use sweepslide::scenario::{
    run_scenario, summarize, write_records, Algorithm, OutputFormat, Scenario,
};
use sweepslide::ScenarioError;

const RAMP_OBJ: &str = "\
# floor plus a 45 degree ramp rising toward +x
v -10 -10 0
v 5 -10 0
v 5 10 0
v -10 10 0
v 15 -10 10
v 15 10 10
f 1 2 3 4
f 2 5 6 3
";

fn write_scenario(dir: &std::path::Path, body: &str) -> std::path::PathBuf {
    fs::write(dir.join("ramp.obj"), RAMP_OBJ).unwrap();
    let path = dir.join("ramp.toml");
    fs::write(&path, body).unwrap();
    path
}

#[test]
fn obj_scenario_runs_both_algorithms() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        dir.path(),
        r#"
name = "ramp"
frames = 12
algorithm = "both"
start = [-5.0, 0.0, 2.0]
velocity = [1.5, 0.0, -0.5]

[mesh]
file = "ramp.obj"
"#,
    );
    let s = Scenario::from_file(&path).unwrap();
    let run = run_scenario(&s).unwrap();
    for alg in [Algorithm::Improved, Algorithm::Legacy] {
        let records = run.records(alg).unwrap();
        assert_eq!(records.len(), 12);
        assert!(
            records.iter().all(|r| r.min_mesh_distance >= 1.0 - 1e-6),
            "{alg:?}"
        );
        // Climbs the ramp.
        assert!(records.last().unwrap().position.z > 1.5, "{alg:?}");
    }

    let improved = run.records(Algorithm::Improved).unwrap();
    let mut csv = Vec::new();
    write_records(improved, OutputFormat::Csv, &mut csv).unwrap();
    assert_eq!(String::from_utf8(csv).unwrap().lines().count(), 13);

    let summary = summarize(improved, &s.commanded_speeds(), s.epsilon);
    assert_eq!(summary.frames, 12);
    assert!(summary.max_iterations <= 3);
}

#[test]
fn ellipsoid_scenario_rests_at_scaled_height() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        dir.path(),
        r#"
name = "squashed"
frames = 3
radii = [2.0, 1.0, 0.5]
start = [-5.0, 0.0, 3.0]
velocity = [0.0, 0.0, -2.0]

[mesh]
file = "ramp.obj"
"#,
    );
    let run = run_scenario(&Scenario::from_file(&path).unwrap()).unwrap();
    let last = run.records(Algorithm::Improved).unwrap().last().unwrap();
    assert!(
        (last.position.z - 1.005 * 0.5).abs() <= 1e-6,
        "{}",
        last.position
    );
}

#[test]
fn penetrating_start_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write_scenario(
        dir.path(),
        r#"
name = "buried"
frames = 1
start = [-5.0, 0.0, 0.5]
velocity = [0.0, 0.0, 0.0]

[mesh]
file = "ramp.obj"
"#,
    );
    let err = run_scenario(&Scenario::from_file(&path).unwrap()).unwrap_err();
    assert!(
        matches!(err, ScenarioError::PenetratingStart { .. }),
        "{err}"
    );
}

#[test]
fn missing_mesh_file_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    fs::write(&path, "name = \"x\"\nframes = 1\nstart = [0, 0, 0]\nvelocity = [0, 0, 0]\n[mesh]\nfile = \"nope.obj\"\n").unwrap();
    let err = run_scenario(&Scenario::from_file(&path).unwrap()).unwrap_err();
    assert!(matches!(err, ScenarioError::Io { .. }), "{err}");
}

#[test]
fn bundled_scenarios_run() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    let mut count = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        if path.extension().is_some_and(|e| e == "toml") {
            let s =
                Scenario::from_file(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let run = run_scenario(&s).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
            let improved = run.records(Algorithm::Improved).unwrap();
            assert!(
                improved.iter().all(|r| r.min_mesh_distance >= 1.0 - 1e-6),
                "{}",
                path.display()
            );
            count += 1;
        }
    }
    assert!(count >= 4);
}
