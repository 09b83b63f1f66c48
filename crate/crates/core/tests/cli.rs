//! End-to-end runs of the binary: exit codes, artifacts and determinism.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_sonic-patch"))
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let path = dir.join("run.toml");
    fs::write(&path, body).unwrap();
    path
}

fn run(args: &[&str], config: &Path) -> (i32, String, String) {
    let out = bin().args(args).arg("--config").arg(config).output().unwrap();
    (out.status.code().unwrap(), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

const REFERENCE: &str = "[boundary]\npreset = \"reference\"\n[output]\ndirectory = \"out\"\n";

#[test]
fn check_accepts_the_reference_wall() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, stdout, _) = run(&["check"], &cfg);
    assert_eq!(code, 0, "{stdout}");
    assert!(dir.path().join("out/admissibility.json").is_file());
}

#[test]
fn check_rejects_the_flat_wall_with_concavity() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[boundary]\npreset = \"flat_wall\"\n");
    let (code, stdout, _) = run(&["check"], &cfg);
    assert_eq!(code, 2);
    assert!(stdout.contains("concavity"), "{stdout}");
    let report = fs::read_to_string(dir.path().join("out/admissibility.json")).unwrap();
    let json: serde_json::Value = serde_json::from_str(&report).unwrap();
    assert!(json["admissibility"]["failures"].as_array().unwrap().iter().any(|f| f["check"] == "concavity"));
}

#[test]
fn missing_inputs_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let (code, _, stderr) = run(&["check"], &dir.path().join("absent.toml"));
    assert_eq!(code, 1, "{stderr}");
    let cfg = write_config(dir.path(), "[boundary]\npreset = \"tables\"\nwall_table = \"wall.txt\"\nvarpi_table = \"mach.txt\"\n");
    let (code, _, stderr) = run(&["check"], &cfg);
    assert_eq!(code, 1);
    assert!(stderr.contains("wall.txt"), "{stderr}");
}

#[test]
fn table_preset_runs_from_files() {
    let dir = tempfile::tempdir().unwrap();
    // the reference wall tabulated exactly: φ′ = 1 − 0.4x − 2x², φ″ = −0.4 − 4x
    let mut wall = String::from("# x slope curvature\n");
    let mut mach = String::new();
    for i in 0..=30 {
        let x = 0.01 * i as f64;
        wall.push_str(&format!("{x} {} {}\n", 1.0 - 0.4 * x - 2.0 * x * x, -0.4 - 4.0 * x));
        mach.push_str(&format!("{x} {}\n", 1.0 - 0.5 * x));
    }
    fs::write(dir.path().join("wall.txt"), wall).unwrap();
    fs::write(dir.path().join("mach.txt"), mach).unwrap();
    let cfg = write_config(dir.path(), "[boundary]\npreset = \"tables\"\nwall_table = \"wall.txt\"\nvarpi_table = \"mach.txt\"\n[solver]\ndt = 8e-3\n");
    let (code, stdout, stderr) = run(&["solve"], &cfg);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("corner D: (0.14"), "{stdout}");
}

#[test]
fn solve_writes_every_artifact_with_headers() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, stdout, stderr) = run(&["solve", "--dt", "1e-3"], &cfg);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("corner D"), "{stdout}");
    let out = dir.path().join("out");
    let expected = [
        ("nodes.csv", "char_id,t,r,u_bar,v_bar,w_bar,x,y,theta,varpi,jacobian"),
        ("pe.csv", "x,y,theta,varpi"),
        ("pd.csv", "x,y,theta,varpi,arclength,tangent_x,tangent_y"),
        ("de.csv", "x,y,theta,varpi"),
    ];
    let mut hash = None;
    for (name, header) in expected {
        let text = fs::read_to_string(out.join(name)).unwrap();
        let mut lines = text.lines();
        let first = lines.next().unwrap();
        assert!(first.starts_with("# config_hash="), "{name}: {first}");
        let h = first.trim_start_matches("# config_hash=").to_string();
        assert_eq!(h.len(), 64);
        assert_eq!(*hash.get_or_insert(h.clone()), h);
        assert_eq!(lines.next().unwrap(), header, "{name}");
        let rows: Vec<&str> = lines.collect();
        assert!(!rows.is_empty(), "{name} has no rows");
        let width = header.split(',').count();
        assert!(rows.iter().all(|r| r.split(',').count() == width && r.split(',').all(|f| f.parse::<f64>().is_ok())));
    }
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["config_hash"].as_str(), hash.as_deref());
    let d = &report["corner_d"];
    assert!((d[0].as_f64().unwrap() - 0.14798).abs() < 1e-4 && (d[1].as_f64().unwrap() - 0.36165).abs() < 1e-4, "{d}");
    assert!(report["bound_constants"]["k0"].as_f64().unwrap() > 0.0);
}

#[test]
fn identical_runs_are_bit_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let out = dir.path().join("out");
    let names = ["nodes.csv", "pe.csv", "pd.csv", "de.csv", "report.json"];
    let mut runs = Vec::new();
    for _ in 0..2 {
        let (code, _, _) = run(&["solve", "--dt", "4e-3"], &cfg);
        assert_eq!(code, 0);
        runs.push(names.map(|n| fs::read(out.join(n)).unwrap()));
    }
    for (i, name) in names.iter().enumerate() {
        assert_eq!(runs[0][i], runs[1][i], "{name} differs");
    }
    // the output location does not enter the hash
    let other = dir.path().join("other");
    run(&["solve", "--dt", "4e-3", "--out", other.to_str().unwrap()], &cfg);
    assert_eq!(fs::read(other.join("nodes.csv")).unwrap(), runs[0][0]);
}

#[test]
fn overrides_change_the_hash() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let head = |out: &Path| fs::read_to_string(out.join("pe.csv")).unwrap().lines().next().unwrap().to_string();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    run(&["solve", "--dt", "4e-3", "--out", a.to_str().unwrap()], &cfg);
    run(&["solve", "--dt", "8e-3", "--out", b.to_str().unwrap()], &cfg);
    assert_ne!(head(&a), head(&b));
}

#[test]
fn huge_spacing_is_a_solver_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, _, stderr) = run(&["solve", "--dt", "0.3"], &cfg);
    assert_eq!(code, 3, "{stderr}");
    let (code, _, _) = run(&["solve", "--dt", "0.6"], &cfg);
    assert_eq!(code, 3);
}

#[test]
fn solve_on_inadmissible_wall_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "[boundary]\npreset = \"subsonic_start\"\n");
    let (code, _, stderr) = run(&["solve"], &cfg);
    assert_eq!(code, 2, "{stderr}");
    assert!(stderr.contains("sonic start"), "{stderr}");
}

#[test]
fn sign_fault_fails_the_jacobian_check() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, stdout, _) = run(&["solve", "--dt", "8e-3", "--inject-sign-fault"], &cfg);
    assert_eq!(code, 4);
    assert!(stdout.contains("jacobian sign"), "{stdout}");
}

#[test]
fn oracle_runs_without_the_solver() {
    let dir = tempfile::tempdir().unwrap();
    // an inadmissible wall proves no solver work is done
    let cfg = write_config(dir.path(), "[boundary]\npreset = \"flat_wall\"\n[verify]\nchecks = [\"oracle\"]\n");
    let (code, stdout, stderr) = run(&["verify", "--seed", "11"], &cfg);
    assert_eq!(code, 0, "{stdout}{stderr}");
    assert!(stdout.contains("oracle: PASS"));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify.json")).unwrap()).unwrap();
    assert!(report["manufactured"].is_null() && report["holder"].is_null());
}

#[test]
fn verify_reports_both_holder_fits() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, stdout, stderr) = run(&["verify", "--dt", "2e-3"], &cfg);
    assert_eq!(code, 0, "{stdout}{stderr}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/verify.json")).unwrap()).unwrap();
    let h = &report["holder"];
    assert!((h["hodograph_predicted"].as_f64().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    assert!((h["physical_predicted"].as_f64().unwrap() - 1.0 / 6.0).abs() < 1e-15);
    assert!(!h["hodograph"].as_array().unwrap().is_empty() && !h["physical"].as_array().unwrap().is_empty());
    assert_eq!(report["passed"], true);
}

#[test]
fn converge_reports_orders_of_at_least_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), REFERENCE);
    let (code, stdout, stderr) = run(&["converge", "--refine", "3"], &cfg);
    assert_eq!(code, 0, "{stdout}{stderr}");
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(dir.path().join("out/convergence.json")).unwrap()).unwrap();
    let rows = report["table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for q in ["residual", "de_slope_defect", "closure_defect"] {
        let entry = report["table"]["orders"].as_array().unwrap().iter().find(|o| o["quantity"] == q).unwrap();
        assert!(entry["min_order"].as_f64().unwrap() >= 1.0, "{q}: {entry}");
    }
    let csv = fs::read_to_string(dir.path().join("out/convergence.csv")).unwrap();
    assert!(csv.starts_with("# config_hash="));
}
