use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn sricci(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sricci"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn machine(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--format", "machine"]);
    let out = sricci(&full);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("machine output is JSON")
}

#[test]
fn verify_tetrahedron_passes() {
    let v = machine(&["verify", "--generate", "tetrahedron"]);
    assert_eq!(v["command"], "verify");
    assert_eq!(v["weights"], "delta");
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["outcome"] != "fail"), "{checks:?}");
}

#[test]
fn machine_output_is_stable_apart_from_timestamp() {
    let strip = |mut v: Value| {
        v.as_object_mut().unwrap().remove("timestamp");
        v
    };
    for cmd in ["summary", "spectrum", "curvature", "dual", "verify"] {
        let a = strip(machine(&[cmd, "--generate", "cycle", "6"]));
        let b = strip(machine(&[cmd, "--generate", "cycle", "6"]));
        assert_eq!(a, b, "{cmd}");
    }
}

#[test]
fn readable_output_names_the_checks() {
    let out = sricci(&["verify", "--generate", "torus_grid", "3", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("eigenvalue_estimate"));
    assert!(text.contains("diameter_bound"));
}

#[test]
fn input_file_round_trip() {
    let dir = std::env::temp_dir().join(format!("sricci-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("two.json");
    let mut f = std::fs::File::create(&path).unwrap();
    writeln!(
        f,
        r#"{{"facets": [[10, 20, 30], [20, 30, 40]], "metadata": {{"name": "two"}}}}"#
    )
    .unwrap();
    let v = machine(&["curvature", "--input", path.to_str().unwrap()]);
    assert_eq!(v["dim"], 2);
    assert!(v["curvature"].is_object());
}

#[test]
fn errors_exit_with_two() {
    let unknown = sricci(&["summary", "--generate", "klein_bottle"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(!unknown.stderr.is_empty());

    let dir = std::env::temp_dir().join(format!("sricci-cli-bad-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, "{\"facets\": [[1, 2], ").unwrap();
    let bad = sricci(&["summary", "--input", path.to_str().unwrap()]);
    assert_eq!(bad.status.code(), Some(2));

    let missing = sricci(&["summary", "--input", "/nonexistent/sricci.json"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn source_is_required() {
    let out = sricci(&["summary"]);
    assert_ne!(out.status.code(), Some(0));
}
