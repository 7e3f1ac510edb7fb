//! End-to-end tests of the `porode` binary: exit codes, diagnostics and the
//! files written to the run directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn porode(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_porode"))
        .args(args)
        .current_dir(cwd)
        .env_remove("PORODE_LOG")
        .output()
        .expect("binary runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

/// The single run directory created under `out`.
fn run_dir(out: &Path) -> PathBuf {
    let dirs: Vec<PathBuf> = fs::read_dir(out).unwrap().map(|e| e.unwrap().path()).collect();
    assert_eq!(dirs.len(), 1, "{dirs:?}");
    dirs.into_iter().next().unwrap()
}

fn write_config(dir: &Path, name: &str, json: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, json).unwrap();
    path.display().to_string()
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

const SMALL_BEAM: &str = r#"{
  "version": 1,
  "model": {"builtin": "beam"},
  "pores": [
    {"id": 1, "centroid": [100, 50], "boundary": [[98, 48], [98, 52], [102, 52], [102, 48]]}
  ]
}"#;

#[test]
fn estimate_writes_report_csv_and_config_echo() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.json", SMALL_BEAM);
    let out = tmp.path().join("out");
    let o = porode(&["estimate", "--config", &cfg, "--out", out.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = run_dir(&out);
    assert!(dir.file_name().unwrap().to_str().unwrap().starts_with("estimate-"));
    let report = read_json(&dir.join("report.json"));
    for key in ["psi0", "tse", "foe", "soe", "breakdown", "effectivity", "mesh_stats", "timings"] {
        assert!(report.get(key).is_some(), "missing {key}");
    }
    assert!(report["timings"].is_null());
    assert!(report["soe"].as_f64().unwrap() > report["psi0"].as_f64().unwrap());
    let timings = read_json(&dir.join("timings.json"));
    assert!(timings["total"].as_f64().unwrap() >= 0.0);
    let csv = fs::read_to_string(dir.join("report.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 2);
    assert!(lines[0].starts_with("psi0,tse,foe,soe"));
    assert_eq!(lines[0].split(',').count(), lines[1].split(',').count());
    let echo = read_json(&dir.join("config.json"));
    assert_eq!(echo["version"], 1);
    assert_eq!(echo["pores"][0]["id"], 1);
    assert_eq!(echo["material"]["youngs_modulus"], 6.89e10);
    assert_eq!(echo["estimator"]["topo"]["xi_fraction"], 0.01);
}

#[test]
fn identical_config_gives_byte_identical_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.json", SMALL_BEAM);
    let mut reports = Vec::new();
    for k in 0..2 {
        let out = tmp.path().join(format!("out{k}"));
        let o = porode(&["estimate", "--config", &cfg, "--out", out.to_str().unwrap()], tmp.path());
        assert!(o.status.success(), "{}", stderr(&o));
        reports.push(fs::read(run_dir(&out).join("report.json")).unwrap());
    }
    assert_eq!(reports[0], reports[1]);
}

#[test]
fn relative_paths_resolve_against_the_config_directory() {
    let tmp = tempfile::tempdir().unwrap();
    let sub = tmp.path().join("cases");
    fs::create_dir(&sub).unwrap();
    fs::write(
        sub.join("pores.json"),
        r#"[{"id": 4, "centroid": [100, 50], "boundary": [[98, 48], [98, 52], [102, 52], [102, 48]]}]"#,
    )
    .unwrap();
    let cfg = write_config(
        &sub,
        "run.json",
        r#"{"version": 1, "model": {"builtin": "beam"}, "pores": "pores.json", "output_dir": "results"}"#,
    );
    let o = porode(&["estimate", "--config", &cfg], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = run_dir(&sub.join("results"));
    assert_eq!(read_json(&dir.join("config.json"))["pores"][0]["id"], 4);
}

#[test]
fn missing_pore_file_exits_2_naming_the_path() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.json",
        r#"{"version": 1, "model": {"builtin": "beam"}, "pores": "does-not-exist.json"}"#,
    );
    let o = porode(&["estimate", "--config", &cfg, "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("does-not-exist.json"), "{}", stderr(&o));
}

#[test]
fn pore_crossing_the_outer_boundary_exits_2_naming_the_pore() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.json",
        r#"{"version": 1, "model": {"builtin": "beam"},
            "pores": [{"id": 17, "centroid": [199, 50], "boundary": [[197, 48], [197, 52], [201, 52], [201, 48]]}]}"#,
    );
    let o = porode(&["estimate", "--config", &cfg, "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pore 17"), "{}", stderr(&o));
}

#[test]
fn misspelled_key_exits_2_naming_the_key() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.json",
        r#"{"version": 1, "model": {"builtin": "beam"}, "estimator": {"pair_polcy": {"kind": "all_pairs"}}}"#,
    );
    let o = porode(&["estimate", "--config", &cfg, "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("pair_polcy"), "{}", stderr(&o));
    assert!(!tmp.path().join("out").exists(), "no run directory for rejected configs");
}

#[test]
fn unsupported_version_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.json", r#"{"version": 7, "model": {"builtin": "beam"}}"#);
    let o = porode(&["estimate", "--config", &cfg, "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("version"), "{}", stderr(&o));
}

#[test]
fn zero_pore_verify_reports_null_effectivity_with_warning() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.json", r#"{"version": 1, "model": {"builtin": "beam"}, "pores": []}"#);
    let out = tmp.path().join("out");
    let o = porode(&["verify", "--config", &cfg, "--out", out.to_str().unwrap()], tmp.path());
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let report = read_json(&run_dir(&out).join("report.json"));
    assert!(report["effectivity"].is_null());
    let warnings = report["warnings"].as_array().unwrap();
    assert!(warnings.iter().any(|w| w.as_str().unwrap().contains("effectivity")));
    assert!(stderr(&o).contains("warning"));
    assert_eq!(report["tse"], report["psi0"]);
    assert_eq!(report["soe"], report["psi0"]);
}

#[test]
fn verify_reports_effectivity_and_mesh_size_ratio() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = porode(&["verify", "--seed-geometry", "beam", "--out", out.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stdout(&o).contains("mesh-size ratio"));
    let report = read_json(&run_dir(&out).join("report.json"));
    for k in ["tse", "foe", "soe"] {
        assert!(report["effectivity"][k].is_f64(), "{k}");
    }
    let ratio = report["mesh_stats"]["reference_to_porous_ratio"].as_f64().unwrap();
    assert!(ratio > 0.0 && ratio < 1.0, "{ratio}");
    assert!(
        report["mesh_stats"]["reference"]["elements"].as_u64().unwrap()
            < report["mesh_stats"]["porous"]["elements"].as_u64().unwrap()
    );
    let csv = fs::read_to_string(run_dir(&out).join("report.csv")).unwrap();
    let row: Vec<&str> = csv.lines().nth(1).unwrap().split(',').collect();
    assert!(!row[11].is_empty() && !row[13].is_empty(), "effectivity columns filled");
}

#[test]
fn unknown_benchmark_exits_2_listing_available_ones() {
    let tmp = tempfile::tempdir().unwrap();
    let o = porode(&["benchmark", "no_such_sweep", "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    let e = stderr(&o);
    for name in ["distance", "size", "ellipse", "four_pore", "bracket_angle", "bracket_six"] {
        assert!(e.contains(name), "{e}");
    }
}

#[test]
fn benchmark_writes_sweep_csv_and_summary() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = porode(&["benchmark", "ellipse", "--out", out.to_str().unwrap()], tmp.path());
    let dir = run_dir(&out);
    let csv = fs::read_to_string(dir.join("ellipse.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next().unwrap(), "sweep,psi,psi0,tse,foe,soe,i_tse,i_foe,i_soe,int_share");
    assert_eq!(lines.count(), 7);
    let summary = fs::read_to_string(dir.join("summary.txt")).unwrap();
    let passed = !summary.contains("FAIL");
    assert!(summary.contains("ellipse/"));
    // The exit status follows the assertion outcome.
    assert_eq!(o.status.code(), Some(if passed { 0 } else { 1 }), "{summary}");
}

#[test]
fn mesh_info_reports_both_meshes_and_pairs() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = porode(&["mesh-info", "--seed-geometry", "beam", "--out", out.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let dir = run_dir(&out);
    let info = read_json(&dir.join("mesh_info.json"));
    assert_eq!(info["pores"].as_array().unwrap().len(), 4);
    assert_eq!(info["interaction_pairs"].as_array().unwrap().len(), 6);
    assert_eq!(info["boundary_loops"], 1);
    assert!(info["porous"]["elements"].as_u64().unwrap() > info["reference"]["elements"].as_u64().unwrap());
    assert!(fs::read_to_string(dir.join("reference.mesh2d")).unwrap().starts_with("mesh2d v1"));
}

#[test]
fn mesh_model_round_trip_through_mesh_info_and_estimate() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    let o = porode(&["mesh-info", "--seed-geometry", "beam", "--out", out.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let mesh = run_dir(&out).join("reference.mesh2d");
    let cfg = write_config(
        tmp.path(),
        "mesh.json",
        &format!(
            r#"{{"version": 1,
                "model": {{"mesh": "{}", "point_loads": [{{"point": [200, 100], "force": [0, -1000]}}]}},
                "pores": [{{"id": 1, "centroid": [100, 50], "boundary": [[98, 48], [98, 52], [102, 52], [102, 48]]}}],
                "functional": {{"terms": [{{"point": [200, 0], "direction": [0, -1], "weight": 1}}]}}}}"#,
            mesh.display()
        ),
    );
    let out2 = tmp.path().join("out2");
    let o = porode(&["estimate", "--config", &cfg, "--out", out2.to_str().unwrap()], tmp.path());
    assert!(o.status.success(), "{}", stderr(&o));
    let report = read_json(&run_dir(&out2).join("report.json"));
    assert!(report["soe"].as_f64().unwrap() > report["psi0"].as_f64().unwrap());
    // Direct analysis needs geometry to re-mesh.
    let o = porode(&["verify", "--config", &cfg, "--out", "out3"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("geometric model"));
}

#[test]
fn unsupported_mesh_model_is_a_solver_error() {
    let tmp = tempfile::tempdir().unwrap();
    fs::write(
        tmp.path().join("free.mesh2d"),
        "mesh2d v1\nnodes 4\n0 0 0\n1 10 0\n2 10 10\n3 0 10\ntris 2\n0 0 1 2\n1 0 2 3\ndirichlet 0\nneumann 1\n1 2 1.0 0.0\n",
    )
    .unwrap();
    let cfg = write_config(
        tmp.path(),
        "run.json",
        r#"{"version": 1, "model": {"mesh": "free.mesh2d"},
            "functional": {"terms": [{"point": [10, 10], "direction": [1, 0], "weight": 1}]}}"#,
    );
    let o = porode(&["estimate", "--config", &cfg, "--out", "out"], tmp.path());
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(stderr(&o).contains("rigid"));
}

#[test]
fn invalid_flags_exit_2() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(porode(&["estimate"], tmp.path()).status.code(), Some(2));
    assert_eq!(
        porode(&["estimate", "--seed-geometry", "wing"], tmp.path()).status.code(),
        Some(2)
    );
    assert_eq!(
        porode(&["estimate", "--seed-geometry", "beam", "--threads", "0"], tmp.path()).status.code(),
        Some(2)
    );
    let cfg = write_config(tmp.path(), "run.json", r#"{"version": 1, "model": {"builtin": "bracket"}}"#);
    let o = porode(&["estimate", "--config", &cfg, "--seed-geometry", "beam"], tmp.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("seed-geometry"));
}

#[test]
fn threads_flag_and_log_env_are_accepted() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), "run.json", SMALL_BEAM);
    let o = Command::new(env!("CARGO_BIN_EXE_porode"))
        .args(["estimate", "--config", &cfg, "--threads", "1", "--out", "out"])
        .current_dir(tmp.path())
        .env("PORODE_LOG", "info")
        .output()
        .unwrap();
    assert!(o.status.success(), "{}", stderr(&o));
}
