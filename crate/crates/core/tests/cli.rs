use std::fs;
use std::path::Path;
use std::process::Command;

fn fvflow(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_fvflow")).args(args).output().unwrap()
}

fn csv_files(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.ends_with(".csv"))
        .collect();
    v.sort();
    v
}

#[test]
fn identical_runs_give_identical_csv() {
    let tmp = tempfile::tempdir().unwrap();
    let (a, b) = (tmp.path().join("a"), tmp.path().join("b"));
    for d in [&a, &b] {
        let out = fvflow(&["run", "sinusoidal", "--n", "8", "--refinements", "2", "--out", d.to_str().unwrap()]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    }
    let files = csv_files(&a);
    assert!(files.contains(&"errors.csv".to_string()) && files.contains(&"orders.csv".to_string()));
    for f in &files {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}

#[test]
fn every_artifact_has_a_manifest_line() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("cyl");
    let out = fvflow(&["run", "cylinder", "--gamma", "2pia", "--grid", "ogrid:48x8", "--out", dir.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("stagnation on surface"), "{stdout}");
    let manifest = fs::read_to_string(dir.join("manifest.txt")).unwrap();
    for entry in fs::read_dir(&dir).unwrap() {
        let name = entry.unwrap().file_name().to_string_lossy().into_owned();
        if name == "manifest.txt" {
            continue;
        }
        let line = manifest.lines().find(|l| l.contains(&name)).unwrap_or_else(|| panic!("{name} missing"));
        assert!(line.contains("scenario=cylinder") && line.contains("gamma=2pia"), "{line}");
        assert!(line.contains("iterations=") && line.contains("final_I="), "{line}");
    }
}

#[test]
fn exported_mesh_feeds_a_run() {
    let tmp = tempfile::tempdir().unwrap();
    let m = tmp.path().join("m");
    let out = fvflow(&["export-mesh", "--grid", "ogrid:32x6", "--out", m.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(m.join("mesh.node").exists() && m.join("mesh.ele").exists() && m.join("mesh.vtk").exists());
    let base = m.join("mesh");
    let run = tmp.path().join("run");
    let out = fvflow(&["run", "cylinder", "--mesh", base.to_str().unwrap(), "--out", run.to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let both = fvflow(&["run", "cylinder", "--mesh", base.to_str().unwrap(), "--grid", "ogrid:32", "--out", run.to_str().unwrap()]);
    assert!(!both.status.success());
}

#[test]
fn solver_failure_exits_nonzero_and_keeps_history() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path().join("fail");
    // tiny damping cannot reach the tolerance within the Newton cap
    let out = fvflow(&["run", "sinusoidal", "--n", "4", "--refinements", "0", "--sigma", "0.01", "--out", dir.to_str().unwrap()]);
    assert!(!out.status.success());
    let history = fs::read_to_string(dir.join("history_level0.csv")).unwrap();
    assert!(history.lines().count() > 10);
}

#[test]
fn bad_inputs_are_rejected() {
    let tmp = tempfile::tempdir().unwrap();
    let o = tmp.path().to_str().unwrap();
    assert!(!fvflow(&["run", "nonesuch", "--out", o]).status.success());
    assert!(!fvflow(&["order-study", "sinusoidal", "--refinements", "0", "--out", o]).status.success());
    assert!(!fvflow(&["run", "sinusoidal", "--k", "6py", "--out", o]).status.success());
    let missing = tmp.path().join("none");
    assert!(!fvflow(&["run", "cylinder", "--mesh", missing.to_str().unwrap(), "--out", o]).status.success());
}

#[test]
fn verify_reports_each_check() {
    let ok = fvflow(&["verify"]);
    assert!(ok.status.success());
    let text = String::from_utf8_lossy(&ok.stdout);
    assert!(text.lines().all(|l| l.starts_with("check=") && l.contains("status=PASS")));
    let bad = fvflow(&["verify", "--inject-fault", "hessian"]);
    assert!(!bad.status.success());
    let text = String::from_utf8_lossy(&bad.stdout);
    let failed: Vec<&str> = text.lines().filter(|l| l.contains("status=FAIL")).collect();
    assert_eq!(failed.len(), 1);
    assert!(failed[0].starts_with("check=fd_hessian_cauchy_riemann"));
}

#[test]
fn blasius_reference_profile() {
    let tmp = tempfile::tempdir().unwrap();
    let out = fvflow(&["run", "blasius-ref", "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success());
    let csv = fs::read_to_string(tmp.path().join("blasius.csv")).unwrap();
    let first = csv.lines().nth(1).unwrap();
    let fpp0: f64 = first.split(',').nth(3).unwrap().parse().unwrap();
    assert!((fpp0 - 0.33206).abs() < 1e-4);
}

#[test]
fn patch_study_from_config_file() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = tmp.path().join("patch.cfg");
    fs::write(&cfg, "# right patch, smooth case\npatch = right\ncase = 3\nrescales = 6\n").unwrap();
    let out = fvflow(&["order-study", "cc-patch", "--config", cfg.to_str().unwrap(), "--out", tmp.path().to_str().unwrap()]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(tmp.path().join("order.csv")).unwrap();
    assert_eq!(csv.lines().next().unwrap(), "dx,e_delta,e_phi,e_delta_slope,e_phi_slope");
    assert_eq!(csv.lines().count(), 8);
}
