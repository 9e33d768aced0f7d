//! End-to-end tests of the `probkin` binary: exit codes, diagnostics, file
//! formats, overrides and sweeps.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_probkin")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn run_cli(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("binary runs")
}

#[test]
fn schema_error_exits_2_with_field_paths() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "bad.json",
        r#"{"mode": "map", "initial_probs": [0.5, 0.5, 0.5], "initial_rho": [[[1,0],[0,0]],[[0,0],[0,0]]]}"#,
    );
    let out = run_cli(&["map", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("initial_probs"));
    assert!(stderr.contains("initial_rho"));
}

#[test]
fn non_admissible_map_exits_3_and_reports_the_defect() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "coins.json",
        r#"{"mode": "map", "initial_probs": [1.0, 1.0, 1.0]}"#,
    );
    let out = run_cli(&["map", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(
        stderr.contains("quantumness_defect = -0.5"),
        "stderr was: {stderr}"
    );
}

#[test]
fn invalid_kraus_set_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "halfchan.json",
        r#"{
            "mode": "channel",
            "kraus": [[[[0.5, 0], [0, 0]], [[0, 0], [0.5, 0]]]],
            "initial_probs": [0.5, 0.5, 0.5]
        }"#,
    );
    let out = run_cli(&["channel", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn non_hermitian_hamiltonian_exits_5() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "skew.json",
        r#"{
            "mode": "evolve",
            "hamiltonian": [[[0, 0], [1, 0]], [[0, 0], [0, 0]]],
            "initial_probs": [0.5, 0.5, 1.0],
            "t_final": 1.0
        }"#,
    );
    let out = run_cli(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        dir.path().join("t.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(5));
}

#[test]
fn mode_mismatch_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "map.json",
        r#"{"mode": "map", "initial_probs": [0.5, 0.5, 0.5]}"#,
    );
    let out = run_cli(&["evolve", "--config", config.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn gksl_run_reaches_the_dephasing_fixed_point() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "gksl.json",
        r#"{
            "mode": "gksl",
            "hamiltonian": [[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
            "lindblad": [[[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]],
            "initial_probs": [0.8, 0.5, 0.8],
            "t_final": 10.0,
            "step": 0.001,
            "sample_every": 100
        }"#,
    );
    let out_path = dir.path().join("gksl.csv");
    let out = run_cli(&[
        "gksl",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let body = std::fs::read_to_string(&out_path).unwrap();
    let last: Vec<f64> = body
        .lines()
        .rfind(|l| !l.starts_with('#'))
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // p1 decayed to 1/2, p3 untouched.
    assert!((last[1] - 0.5).abs() < 1e-6);
    assert!((last[3] - 0.8).abs() < 1e-9);

    // Metadata carries the 6x6 generator and its affine part.
    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("gksl.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["generator"].as_array().unwrap().len(), 6);
    assert_eq!(meta["affine"].as_array().unwrap().len(), 6);
    // Pure dephasing rate -2 gamma (p1 - 1/2) with gamma = 1 shows up as
    // -1 on the centered diagonal block.
    assert!((meta["generator"][0][0].as_f64().unwrap() + 1.0).abs() < 1e-12);
}

#[test]
fn qudit_run_emits_family_columns() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "qutrit.json",
        r#"{
            "mode": "qudit",
            "hamiltonian": [
                [[1.0, 0], [0, 0], [0, 0]],
                [[0, 0], [0.0, 0], [0, 0]],
                [[0, 0], [0, 0], [-1.0, 0]]
            ],
            "initial_rho": [
                [[0.5, 0], [0.25, 0], [0, 0]],
                [[0.25, 0], [0.3, 0], [0, 0]],
                [[0, 0], [0, 0], [0.2, 0]]
            ],
            "t_final": 1.0,
            "step": 0.001,
            "sample_every": 100,
            "output_format": "csv"
        }"#,
    );
    let out_path = dir.path().join("qutrit.csv");
    let out = run_cli(&[
        "qudit",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let body = std::fs::read_to_string(&out_path).unwrap();
    let header = body.lines().next().unwrap();
    // 2 diagonal + 3 pairs x 2 = 8 probability columns for N = 3.
    assert!(header.contains("p3_00,p3_11,p1_01,p2_01,p1_02,p2_02,p1_12,p2_12"));
    for line in body.lines().filter(|l| !l.starts_with('#')) {
        let row: Vec<f64> = line.split(',').map(|v| v.parse().unwrap()).collect();
        assert_eq!(row.len(), 1 + 8 + 2);
        // Unitary evolution: populations constant, everything in range.
        assert!((row[1] - 0.5).abs() < 1e-9);
        assert!((row[2] - 0.3).abs() < 1e-9);
        for p in &row[1..9] {
            assert!((-1e-9..=1.0 + 1e-9).contains(p));
        }
        assert!(row[10] <= 1e-9, "trace residual {}", row[10]);
    }
}

#[test]
fn oscillator_json_output_and_metadata() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "osc.json",
        r#"{
            "mode": "oscillator",
            "initial_rho": [
                [[0.5, 0], [0.5, 0]],
                [[0.5, 0], [0.5, 0]]
            ],
            "t_final": 3.141592653589793,
            "step": 0.01,
            "sample_every": 50,
            "output_format": "json"
        }"#,
    );
    let out_path = dir.path().join("osc.json.out");
    let out = run_cli(&[
        "oscillator",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());

    let rows: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    let rows = rows.as_array().unwrap();
    // Half a period flips the (0,1) coherence: p1_01 goes 1 -> 0.
    let first = &rows[0];
    let last = rows.last().unwrap();
    assert!((first["probs"][1].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(last["probs"][1].as_f64().unwrap().abs() < 1e-12);

    let meta: serde_json::Value = serde_json::from_str(
        &std::fs::read_to_string(dir.path().join("osc.json.meta.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(meta["n_max"], 1);
    assert!(meta["normalization_residual_initial"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn sweep_writes_indexed_files() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "larmor.json",
        r#"{
            "mode": "evolve",
            "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
            "initial_probs": [1.0, 0.5, 0.5],
            "t_final": 1.0,
            "step": 0.001,
            "sample_every": 10
        }"#,
    );
    let out_path = dir.path().join("sweep.csv");
    let out = run_cli(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--sweep",
        "t_final=1:3:3",
    ]);
    assert!(out.status.success());
    for i in 0..3 {
        let p = dir.path().join(format!("sweep_{i:03}.csv"));
        assert!(p.exists(), "missing {p:?}");
    }
    // Swept end times really differ: last row t of file 0 is 1, of file 2 is 3.
    let last_t = |path: PathBuf| -> f64 {
        std::fs::read_to_string(path)
            .unwrap()
            .lines()
            .rfind(|l| !l.starts_with('#'))
            .unwrap()
            .split(',')
            .next()
            .unwrap()
            .parse()
            .unwrap()
    };
    assert!((last_t(dir.path().join("sweep_000.csv")) - 1.0).abs() < 1e-12);
    assert!((last_t(dir.path().join("sweep_002.csv")) - 3.0).abs() < 1e-12);
}

#[test]
fn t_final_override_wins() {
    let dir = tempfile::tempdir().unwrap();
    let config = write_config(
        dir.path(),
        "short.json",
        r#"{
            "mode": "evolve",
            "hamiltonian": [[[0.5, 0], [0, 0]], [[0, 0], [-0.5, 0]]],
            "initial_probs": [1.0, 0.5, 0.5],
            "t_final": 1.0,
            "step": 0.001
        }"#,
    );
    let out_path = dir.path().join("short.csv");
    let out = run_cli(&[
        "evolve",
        "--config",
        config.to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
        "--t-final",
        "2.5",
    ]);
    assert!(out.status.success());
    let body = std::fs::read_to_string(&out_path).unwrap();
    let last_t: f64 = body
        .lines()
        .rfind(|l| !l.starts_with('#'))
        .unwrap()
        .split(',')
        .next()
        .unwrap()
        .parse()
        .unwrap();
    assert!((last_t - 2.5).abs() < 1e-12);
}
