use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str], config: &str, dir: &Path) -> Output {
    let cfg = dir.join("run.cfg");
    std::fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_viscoshear"))
        .args(args)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .env("VISCOSHEAR_THREADS", "2")
        .output()
        .unwrap()
}

#[test]
fn calibrate_prints_m() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["calibrate"], "", d.path());
    assert_eq!(o.status.code(), Some(0));
    let s = String::from_utf8(o.stdout).unwrap();
    let m: f64 = s.lines().find_map(|l| l.strip_prefix("M = ")).unwrap().parse().unwrap();
    assert!((m - 0.7017).abs() < 1e-3, "{m}");
    assert!(d.path().join("out/calibration.json").exists());
}

#[test]
fn couette_sweep_marks_missing_kstar() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["kstar-sweep", "--format", "csv,svg"], "M = 0\n", d.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(d.path().join("out/kstar_curve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,kstar,lambda1,lambda2"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|r| r.split(',').nth(1) == Some("NA")));
    assert!(d.path().join("out/kstar_curve.svg").exists());
    assert!(!d.path().join("out/kstar_sweep.json").exists());
}

#[test]
fn mismatched_delta_fails_the_budget_check() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["torus", "--format", "json"], "delta = 0.2\n", d.path());
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("transition budget insufficient"), "{err}");
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(d.path().join("out/torus_report.json")).unwrap()).unwrap();
    assert_eq!(v["passed"], false);
    let budget = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "transition budget k*(T) > 1").unwrap();
    assert_eq!(budget["pass"], false);
    assert!(budget["measured"].as_f64().unwrap() < 1.0);
}

#[test]
fn config_errors_exit_two() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["torus"], "gamma2 = 1.5\n", d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("gamma2 must lie in (0,1)"));
    let o = run(&["torus", "--format", "pdf"], "", d.path());
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["calibrate"], "bogus = 1\n", d.path());
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8(o.stderr).unwrap().contains("line 1"));
}

#[test]
fn eigencurve_columns() {
    let d = tempfile::tempdir().unwrap();
    let o = run(&["eigencurve"], "M = 0.7017\nn_k = 4\n", d.path());
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(d.path().join("out/eigencurve.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("k,c_i,residual,slope"));
    let rows: Vec<Vec<f64>> =
        lines.map(|l| l.split(',').take(3).map(|x| x.parse().unwrap()).collect()).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows.windows(2).all(|w| w[1][0] > w[0][0] && w[1][1] < w[0][1]));
}
