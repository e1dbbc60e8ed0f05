use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn asset(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("assets")
        .join(name)
}

fn diffloc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diffloc"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn wedges_of_cube() {
    let out = diffloc(&["wedges", asset("cube.obj").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("x0,"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    for row in rows {
        let angle: f64 = row.split(',').nth(6).unwrap().parse().unwrap();
        assert!((angle - 90.0).abs() < 1e-9, "{row}");
    }
}

#[test]
fn flat_plane_has_no_wedges() {
    let out = diffloc(&["wedges", asset("plane.obj").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 1);
}

#[test]
fn missing_mesh_is_usage_error() {
    let out = diffloc(&["wedges", "no/such/mesh.obj"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("file not found"), "{}", stderr(&out));
}

#[test]
fn bad_arguments_are_usage_errors() {
    let config = asset("nlos_static.toml");
    let config = config.to_str().unwrap();
    for args in [
        vec!["run"],
        vec!["frobnicate"],
        vec!["run", "--config", config, "--mode", "fast"],
        vec!["run", "--config", config, "--seed", "-3"],
    ] {
        assert_eq!(diffloc(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn bad_config_is_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.toml");
    std::fs::write(&path, "seed = 1\n[scenario]\nmesh = 3\n").unwrap();
    let out = diffloc(&["run", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unwritable_output_is_runtime_failure() {
    let out = diffloc(&[
        "run",
        "--config",
        asset("los_static.toml").to_str().unwrap(),
        "--out",
        "/dev/null/report",
    ]);
    assert_eq!(out.status.code(), Some(1), "{}", stderr(&out));
}

#[test]
fn run_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = diffloc(&[
        "run",
        "--config",
        asset("los_static.toml").to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    for name in [
        "frames.csv",
        "summary.csv",
        "error_vs_time.csv",
        "timing.csv",
    ] {
        let text = std::fs::read_to_string(dir.path().join(name)).unwrap();
        assert!(text.lines().count() > 1, "{name} is empty");
    }
    let frames = std::fs::read_to_string(dir.path().join("frames.csv")).unwrap();
    // 6 s at 5 Hz, both ends included.
    assert_eq!(frames.lines().count(), 1 + 31);
}

#[test]
fn sweep_rows_follow_request() {
    let out = diffloc(&[
        "sweep-nd",
        "--config",
        asset("nlos_static.toml").to_str().unwrap(),
        "--nd",
        "0,2",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let text = stdout(&out);
    let firsts: Vec<&str> = text
        .lines()
        .skip(1)
        .map(|l| l.split(',').next().unwrap())
        .collect();
    assert_eq!(firsts, ["0", "2"]);
}

#[test]
fn same_seed_gives_identical_reports() {
    let config = asset("nlos_static.toml");
    let dirs: Vec<_> = ["1", "4"]
        .iter()
        .map(|threads| {
            let dir = tempfile::tempdir().unwrap();
            let out = diffloc(&[
                "run",
                "--config",
                config.to_str().unwrap(),
                "--seed",
                "9",
                "--threads",
                threads,
                "--out",
                dir.path().to_str().unwrap(),
            ]);
            assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
            dir
        })
        .collect();
    for name in ["frames.csv", "summary.csv", "error_vs_time.csv"] {
        let a = std::fs::read(dirs[0].path().join(name)).unwrap();
        let b = std::fs::read(dirs[1].path().join(name)).unwrap();
        assert_eq!(a, b, "{name} differs");
    }
}

#[test]
fn no_diffraction_mode_matches_zero_nd() {
    let config = asset("nlos_static.toml");
    let config = config.to_str().unwrap();
    let dir = tempfile::tempdir().unwrap();
    let run = diffloc(&[
        "run",
        "--config",
        config,
        "--mode",
        "no-diffraction",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(run.status.code(), Some(0));
    let sweep = stdout(&diffloc(&["sweep-nd", "--config", config, "--nd", "0"]));
    let row: Vec<&str> = sweep.lines().nth(1).unwrap().split(',').collect();
    let summary = std::fs::read_to_string(dir.path().join("summary.csv")).unwrap();
    assert!(
        summary.contains(row[2]),
        "sweep error {} missing from\n{summary}",
        row[2]
    );
}
