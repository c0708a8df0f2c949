//! One line per acceptance criterion on the reference fixture, with runtimes.
//!
//! The torus and whole-line pipelines run once and are shared; criteria that
//! read from a shared run are charged its full wall time.

use std::io::Write;
use std::process::Command;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use viscoshear_core::scenario::{fidelity_checks, run_line_scenario, run_torus_scenario, Check, ScenarioConfig, ScenarioReport};

struct Timed<T> {
    value: T,
    elapsed: Duration,
}

fn timed<T>(f: impl FnOnce() -> T) -> Timed<T> {
    let t0 = Instant::now();
    let value = f();
    Timed { value, elapsed: t0.elapsed() }
}

fn torus() -> &'static Timed<ScenarioReport> {
    static R: OnceLock<Timed<ScenarioReport>> = OnceLock::new();
    R.get_or_init(|| timed(|| run_torus_scenario(&ScenarioConfig::default()).expect("valid config")))
}

fn line() -> &'static Timed<ScenarioReport> {
    static R: OnceLock<Timed<ScenarioReport>> = OnceLock::new();
    R.get_or_init(|| timed(|| run_line_scenario(&ScenarioConfig::default()).expect("valid config")))
}

fn fidelity() -> Timed<Vec<Check>> {
    let params = torus().value.params;
    timed(|| fidelity_checks(&params))
}

fn pick<'a>(checks: &'a [Check], keys: &[&str]) -> Vec<&'a Check> {
    let v: Vec<&Check> = checks.iter().filter(|c| keys.iter().any(|k| c.name.contains(k))).collect();
    assert!(!v.is_empty(), "no checks match {keys:?}");
    v
}

/// Print the verdict line and fail the test if the criterion fails.
fn report(id: u32, title: &str, checks: &[&Check], extra: &[(String, bool)], elapsed: Duration, budget: Duration) {
    let mut failures: Vec<String> =
        checks.iter().filter(|c| !c.pass).map(|c| format!("{}: {}", c.name, c.detail)).collect();
    failures.extend(extra.iter().filter(|e| !e.1).map(|e| e.0.clone()));
    if elapsed > budget {
        failures.push(format!("runtime {:.2?} over budget {:.0?}", elapsed, budget));
    }
    let verdict = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut out = std::io::stdout().lock();
    let _ = writeln!(out, "criterion {id:>2} {verdict}  {title}  ({} checks, {:.2?})", checks.len() + extra.len(), elapsed);
    for f in &failures {
        let _ = writeln!(out, "    {f}");
    }
    assert!(failures.is_empty(), "criterion {id} failed: {failures:?}");
}

#[test]
fn criterion_01_closed_form_fidelity() {
    let f = fidelity();
    let cs = pick(&f.value, &["heat residual", "finite differences"]);
    report(1, "closed-form fidelity", &cs, &[], f.elapsed, Duration::from_secs(1));
}

#[test]
fn criterion_02_couette_oracle() {
    let f = fidelity();
    let cs = pick(&f.value, &["Couette phi1"]);
    report(2, "Couette oracle", &cs, &[], f.elapsed, Duration::from_secs(1));
}

#[test]
fn criterion_03_h1_identity() {
    let f = fidelity();
    let cs = pick(&f.value, &["h1 "]);
    report(3, "h1 identity and zero point", &cs, &[], f.elapsed, Duration::from_secs(1));
}

#[test]
fn criterion_04_spectral_structure() {
    let r = torus();
    let n = r.value.sweep.as_ref().map_or(0, |s| s.points.len());
    let cs = pick(&r.value.checks, &["unique bound state", "neutral mode profile"]);
    report(4, "spectral structure", &cs, &[(format!("{n} sampled times, want 9"), n == 9)], r.elapsed, Duration::from_secs(30));
}

#[test]
fn criterion_05_transition() {
    let r = torus();
    let cs = pick(&r.value.checks, &["calibration", "nondecreasing", "transition budget", "Ttilde located", "k* excess"]);
    let tt = r.value.t_tilde.unwrap_or(f64::NAN);
    let inside = tt > 0.0 && tt < r.value.t_end;
    report(5, "transition", &cs, &[(format!("0 < Ttilde = {tt:e} < T"), inside)], r.elapsed, Duration::from_secs(120));
}

#[test]
fn criterion_06_unstable_eigenvalue() {
    let r = torus();
    let cs = pick(
        &r.value.checks,
        &["single c_i root", "Im W/|W|", "|W| at the root", "c_i(1)/", "for sampled t", "no root at k = 1.5", "no root at k = 2"],
    );
    report(6, "unstable eigenvalue at k = 1", &cs, &[], r.elapsed, Duration::from_secs(120));
}

#[test]
fn criterion_07_implicit_curve() {
    let r = torus();
    let cs = pick(&r.value.checks, &["eigencurve over", "strictly decreasing", "|dc_i/dk|", "implicit slope", "dWr/d"]);
    report(7, "implicit eigenvalue curve", &cs, &[], r.elapsed, Duration::from_secs(180));
}

#[test]
fn criterion_08_cross_solver() {
    let r = torus();
    let cs = pick(&r.value.checks, &["eigencurve zero", "boundary Wronskian", "phiB"]);
    report(8, "cross-solver consistency", &cs, &[], r.elapsed, Duration::from_secs(60));
}

#[test]
fn criterion_09_whole_line() {
    let r = line();
    let cs: Vec<&Check> = r.value.checks.iter().collect();
    report(9, "whole-line scenario", &cs, &[], r.elapsed, Duration::from_secs(120));
}

#[test]
fn criterion_10_bound_suites() {
    let r = torus();
    let cs = pick(&r.value.checks, &["bounds"]);
    report(10, "phi1/phi2 bound suites", &cs, &[(format!("{} suites, want 4", cs.len()), cs.len() == 4)], r.elapsed, Duration::from_secs(60));
}

#[test]
fn criterion_11_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("ref.cfg");
    std::fs::write(&cfg, "gamma0 = 0.15\ngamma1 = 0.03\ngamma2 = 0.8\nnu = 1e-3\nformats = csv, json\n").unwrap();
    let t = timed(|| {
        [dir.path().join("a"), dir.path().join("b")].map(|out| {
            let st = Command::new(env!("CARGO_BIN_EXE_viscoshear"))
                .args(["verify", "--config"])
                .arg(&cfg)
                .arg("--out")
                .arg(&out)
                .output()
                .unwrap();
            (st.status.code(), out)
        })
    });
    let [(ca, a), (cb, b)] = &t.value;
    let cmp = timed(|| {
        let mut extra = vec![(format!("exit codes {ca:?} and {cb:?} agree"), ca == cb)];
        for name in ["kstar_curve.csv", "eigencurve.csv", "verify.json"] {
            let (x, y) = (std::fs::read(a.join(name)), std::fs::read(b.join(name)));
            let same = matches!((&x, &y), (Ok(x), Ok(y)) if x == y);
            extra.push((format!("{name} byte-identical across runs"), same));
        }
        extra
    });
    // the two pipeline runs are charged to the other criteria
    report(11, "determinism", &[], &cmp.value, cmp.elapsed, Duration::from_secs(1));
}

#[test]
fn every_scenario_check_belongs_to_a_criterion() {
    let keys = [
        "unique bound state", "neutral mode profile", "calibration", "nondecreasing", "transition budget",
        "Ttilde located", "k* excess", "single c_i root", "Im W/|W|", "|W| at the root", "c_i(1)/",
        "for sampled t", "no root at k = 1.5", "no root at k = 2", "eigencurve over", "strictly decreasing",
        "|dc_i/dk|", "implicit slope", "dWr/d", "eigencurve zero", "boundary Wronskian", "phiB", "bounds",
    ];
    for c in &torus().value.checks {
        assert!(keys.iter().any(|k| c.name.contains(k)), "unassigned check {}", c.name);
    }
}
