//! End-to-end tests of the binary: output formats, exit codes, determinism.

use std::f64::consts::PI;
use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn weylsteer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_weylsteer"))
        .args(args)
        .env_remove("WEYLSTEER_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn write_cnot_matrix(path: &Path) {
    let mut text = String::from("4\n");
    for row in 0..4 {
        let col = [0, 1, 3, 2][row];
        for j in 0..4 {
            text.push_str(if j == col { "1,0 " } else { "0,0 " });
        }
        text.push('\n');
    }
    fs::write(path, text).unwrap();
}

#[test]
fn invariants_of_named_cnot() {
    let out = weylsteer(&["invariants", "--gate", "cnot"]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "0, 0, 1");
}

#[test]
fn invariants_of_cnot_matrix_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cnot.mat");
    write_cnot_matrix(&path);
    let out = weylsteer(&["invariants", "--matrix", path.to_str().unwrap()]);
    assert!(out.status.success(), "{}", stderr(&out));
    assert_eq!(stdout(&out).trim(), "0, 0, 1");
}

#[test]
fn weyl_coordinates_of_cnot() {
    let out = weylsteer(&["weyl", "--gate", "cnot"]);
    assert!(out.status.success());
    let parts: Vec<f64> = stdout(&out)
        .trim()
        .split(", ")
        .map(|t| t.parse().unwrap())
        .collect();
    assert!((parts[0] - PI / 2.0).abs() < 1e-9);
    assert!(parts[1].abs() < 1e-9 && parts[2].abs() < 1e-9);
}

#[test]
fn design1q_identity_is_zero_duration() {
    let out = weylsteer(&[
        "design1q", "--gate", "identity", "--omega0", "10", "--amplitude", "2",
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["durations"], serde_json::json!([0.0, 0.0]));
    assert_eq!(report["fidelity"], serde_json::json!(1.0));
}

#[test]
fn design1q_hadamard_all_frames() {
    for frame in ["perp", "rotframe", "tilted"] {
        let out = weylsteer(&[
            "design1q", "--gate", "hadamard", "--omega0", "100", "--amplitude", "2", "--frame",
            frame,
        ]);
        assert!(out.status.success(), "frame {frame}: {}", stderr(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert!(report["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
    }
}

#[test]
fn design1q_rejects_conflicting_targets() {
    let out = weylsteer(&[
        "design1q", "--gate", "x", "--euler", "1,2,3", "--omega0", "10", "--amplitude", "2",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("exactly one"));
}

#[test]
fn unknown_flag_exits_one() {
    let out = weylsteer(&["invariants", "--nonsense"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn equiv_accepts_dressed_cnot_rejects_swap() {
    let out = weylsteer(&["equiv", "--a", "cnot", "--b", "cnot"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("equivalent"));
    let out = weylsteer(&["equiv", "--a", "cnot", "--b", "swap"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn bangbang_hadamard_reports_three_segments() {
    let dir = tempfile::tempdir().unwrap();
    let h1 = dir.path().join("h1.mat");
    let h2 = dir.path().join("h2.mat");
    fs::write(&h1, "2\n1,0 0,0\n0,0 -1,0\n").unwrap();
    let (c, s) = ((PI / 6.0).cos() * 2.0, (PI / 6.0).sin() * 2.0);
    fs::write(&h2, format!("2\n{s},0 {c},0\n{c},0 {},0\n", -s)).unwrap();
    let out = weylsteer(&[
        "bangbang", "--gate", "hadamard", "--h1", h1.to_str().unwrap(), "--h2",
        h2.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["segments"], serde_json::json!(3));
    assert!(report["fidelity"].as_f64().unwrap() >= 1.0 - 1e-9);
}

#[test]
fn traj_csv_header_endpoint_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("traj.json");
    let csv = dir.path().join("out.csv");
    fs::write(
        &config,
        r#"{"command":"traj","g1":[2.5,0,10.0182],"g2":[2,0,7.8177],
           "coupling":[0,0,0.2],"t_max":4.177768,"samples":40,"sign":-1}"#,
    )
    .unwrap();
    let out = weylsteer(&[
        "traj", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", stderr(&out));
    let first = fs::read(&csv).unwrap();
    let text = String::from_utf8(first.clone()).unwrap();
    assert!(text.starts_with("t,c1,c2,c3,G1_re,G1_im,G2\n"));
    let last_line = text.lines().last().unwrap();
    let c1: f64 = last_line.split(',').nth(1).unwrap().parse().unwrap();
    assert!((c1 / PI - 0.5).abs() < 5e-4, "endpoint c1/pi = {}", c1 / PI);
    // rerun is byte-identical
    let out = weylsteer(&[
        "traj", "--config", config.to_str().unwrap(), "--out", csv.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert_eq!(fs::read(&csv).unwrap(), first);
}

#[test]
fn steer2q_strategies_report_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        (r#"{"command":"steer2q","strategy":"isotropic-equal","g":[1,2,3],"j":1}"#, "tau"),
        (r#"{"command":"steer2q","strategy":"isotropic-ratio","g2":[4,4,4],"j":0.1,"m":4}"#, "lambda"),
        (r#"{"command":"steer2q","strategy":"yy-b","j":1}"#, "f1"),
        (
            r#"{"command":"steer2q","strategy":"weak-cnot","j":[0,0,0.2],
               "template":[[2.5,0,10.0182],[2,0,7.8177]],"m":3}"#,
            "scale",
        ),
        (r#"{"command":"steer2q","strategy":"polyline","target":[1.2,0.6,0.3],"j":[1,0.7,0.3]}"#, ""),
    ];
    for (i, (cfg, param)) in cases.iter().enumerate() {
        let path = dir.path().join(format!("case{i}.json"));
        fs::write(&path, cfg).unwrap();
        let out = weylsteer(&["steer2q", "--config", path.to_str().unwrap()]);
        assert!(out.status.success(), "case {i}: {}", stderr(&out));
        let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        if !param.is_empty() {
            assert!(
                report["parameters"].get(param).is_some(),
                "case {i} missing parameter {param}"
            );
        }
        assert!(report["fidelity"].as_f64().unwrap() > 0.99, "case {i}");
    }
}

#[test]
fn steer2q_solver_failure_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    // single-axis coupling cannot reach an off-axis chamber point
    fs::write(
        &path,
        r#"{"command":"steer2q","strategy":"polyline","target":[0.8,0.5,0.2],"j":[1,0,0]}"#,
    )
    .unwrap();
    let out = weylsteer(&["steer2q", "--config", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "{}", stderr(&out));
    assert!(stderr(&out).contains("span"));
}

#[test]
fn validate_good_and_bad_configs() {
    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    fs::write(
        &good,
        r#"{"command":"traj","coupling":[1,1,1],"t_max":1.0,"samples":10}"#,
    )
    .unwrap();
    let out = weylsteer(&["validate", "--config", good.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("config ok"));

    let bad = dir.path().join("bad.json");
    fs::write(&bad, r#"{"command":"traj","coupling":[1,1,1],"t_max":-2,"samples":10}"#).unwrap();
    let out = weylsteer(&["validate", "--config", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));

    let unknown = dir.path().join("unknown.json");
    fs::write(&unknown, r#"{"command":"steer2q","strategy":"mystery"}"#).unwrap();
    let out = weylsteer(&["validate", "--config", unknown.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn schedule2local_deterministic_under_seed() {
    let run = || {
        let out = weylsteer(&[
            "schedule2local", "--target1", "hadamard", "--target2", "x", "--omega0-1", "10",
            "--omega0-2", "11", "--amplitude", "4", "--seed", "5",
        ]);
        assert!(out.status.success(), "{}", stderr(&out));
        stdout(&out)
    };
    let a = run();
    assert_eq!(a, run());
    let report: serde_json::Value = serde_json::from_str(&a).unwrap();
    assert!(report["program2"]["fidelity"].as_f64().unwrap() >= 1.0 - 1e-6);
    assert_eq!(report["seed"], serde_json::json!(5));
}
