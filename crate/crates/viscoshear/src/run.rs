//! Subcommand drivers. Each one reads a validated [`Config`], runs the
//! numerics on a [`Pool`], writes the requested files into `out_dir` and
//! prints a short summary.

use std::fs;
use std::io::{self, Write};
use std::path::Path;

use serde_json::{json, Value};
use thiserror::Error;
use viscoshear_core::calibrate::{self, CalibrationResult};
use viscoshear_core::rayleigh;
use viscoshear_core::scenario::{self, Check, ScenarioReport};
use viscoshear_core::spectrum::critical_wavenumber_fast;
use viscoshear_core::{Error, FlowParams};

use crate::config::{Config, ConfigError};
use crate::exec::Pool;
use crate::output::{self, fmt, num, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Calibrate,
    KstarSweep,
    Eigencurve,
    Verify,
    Torus,
    Line,
}

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok = 0,
    CheckFailed = 1,
    Usage = 2,
    Numerical = 3,
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{0}")]
    Numerical(#[from] Error),
    #[error("cannot write output: {0}")]
    Io(#[from] io::Error),
}

impl RunError {
    pub fn status(&self) -> Status {
        match self {
            RunError::Numerical(Error::InvalidParameter(_)) | RunError::Config(_) | RunError::Io(_) => Status::Usage,
            RunError::Numerical(_) => Status::Numerical,
        }
    }
}

pub fn run(cmd: Command, cfg: &Config, pool: &Pool, out: &mut dyn Write) -> Result<Status, RunError> {
    fs::create_dir_all(&cfg.out_dir)?;
    match cmd {
        Command::Calibrate => calibrate_cmd(cfg, out),
        Command::KstarSweep => sweep_cmd(cfg, pool, out),
        Command::Eigencurve => eigencurve_cmd(cfg, pool, out),
        Command::Torus => {
            let rep = scenario::run_torus_scenario_with(pool, &cfg.scenario)?;
            write_scenario_files(cfg, &rep)?;
            if cfg.formats.json {
                output::write_json(&output::report_json(&rep), &cfg.out_dir.join("torus_report.json"))?;
            }
            Ok(summarize(out, &[("torus", &rep.checks)])?)
        }
        Command::Line => {
            let rep = scenario::run_line_scenario_with(pool, &cfg.scenario)?;
            if cfg.formats.json {
                output::write_json(&output::report_json(&rep), &cfg.out_dir.join("line_report.json"))?;
            }
            Ok(summarize(out, &[("line", &rep.checks)])?)
        }
        Command::Verify => verify_cmd(cfg, pool, out),
    }
}

fn calibrate(cfg: &Config) -> Result<CalibrationResult, RunError> {
    crate::config::validate(cfg)?;
    Ok(calibrate::tune_m_for_kstar(&cfg.scenario.params()?, 0.0, 1.0 - cfg.scenario.delta)?)
}

/// Configured amplitude, or the calibrated one when `M` is not set.
fn resolve_params(cfg: &Config, out: &mut dyn Write) -> Result<FlowParams, RunError> {
    match cfg.scenario.m {
        Some(_) => Ok(cfg.scenario.params()?),
        None => {
            let c = calibrate(cfg)?;
            writeln!(out, "M not set; calibrated M = {}", fmt(c.m))?;
            Ok(cfg.scenario.params()?.with_m(c.m))
        }
    }
}

fn calibrate_cmd(cfg: &Config, out: &mut dyn Write) -> Result<Status, RunError> {
    let c = calibrate(cfg)?;
    writeln!(out, "M = {}", fmt(c.m))?;
    writeln!(out, "kstar(0) = {}", fmt(c.achieved))?;
    writeln!(out, "target = {}", fmt(1.0 - cfg.scenario.delta))?;
    writeln!(out, "bisections = {}", c.iterations)?;
    if cfg.formats.json {
        let v = json!({
            "M": num(c.m),
            "kstar0": num(c.achieved),
            "target": num(1.0 - cfg.scenario.delta),
            "bracket": [num(c.bracket.0), num(c.bracket.1)],
            "bisections": c.iterations,
        });
        output::write_json(&v, &cfg.out_dir.join("calibration.json"))?;
    }
    Ok(Status::Ok)
}

fn sweep_cmd(cfg: &Config, pool: &Pool, out: &mut dyn Write) -> Result<Status, RunError> {
    crate::config::validate(cfg)?;
    let p = resolve_params(cfg, out)?;
    let curve = calibrate::kstar_time_sweep_with(pool, &p, cfg.scenario.n_times, &cfg.scenario.grid)?;
    let table = output::kstar_table(&curve);
    write_table(cfg, &table, "kstar_curve", "critical wave number", "t", "kstar")?;
    if cfg.formats.json {
        let v = json!({
            "M": num(p.m),
            "T": num(curve.t_end),
            "Ttilde": curve.t_tilde.map_or(Value::Null, num),
            "kstar_at_Ttilde": curve.kstar_at_t_tilde.map_or(Value::Null, num),
        });
        output::write_json(&v, &cfg.out_dir.join("kstar_sweep.json"))?;
    }
    writeln!(out, "T = {}", fmt(curve.t_end))?;
    for pt in &curve.points {
        writeln!(out, "t = {}  kstar = {}", fmt(pt.t), pt.kstar.map_or("NA".into(), fmt))?;
    }
    match curve.t_tilde {
        Some(t) => writeln!(out, "Ttilde = {}", fmt(t))?,
        None => writeln!(out, "Ttilde: kstar does not cross 1 on [0, T]")?,
    }
    Ok(Status::Ok)
}

fn eigencurve_cmd(cfg: &Config, pool: &Pool, out: &mut dyn Write) -> Result<Status, RunError> {
    crate::config::validate(cfg)?;
    let p = resolve_params(cfg, out)?;
    let state = p.at(p.horizon())?;
    let kt = critical_wavenumber_fast(&state)?;
    let ks = match kt {
        Some(kt) if kt > cfg.scenario.k_min => scenario::eigencurve_grid(&cfg.scenario, kt),
        _ => Vec::new(),
    };
    let curve = rayleigh::eigencurve_with(pool, &state, &ks)?;
    write_table(cfg, &output::eigencurve_table(&curve), "eigencurve", "unstable eigenvalue at t = T", "k", "c_i")?;
    writeln!(out, "kstar(T) = {}", kt.map_or("NA".into(), fmt))?;
    if ks.is_empty() {
        writeln!(out, "no unstable band above k_min = {}", fmt(cfg.scenario.k_min))?;
        return Ok(Status::Ok);
    }
    for &(k, c, _) in &curve.points {
        writeln!(out, "k = {}  c_i = {}", fmt(k), fmt(c))?;
    }
    for k in &curve.absent {
        writeln!(out, "k = {}  no root", fmt(*k))?;
    }
    if let Some(z) = curve.zero_k {
        writeln!(out, "extrapolated zero at k = {}", fmt(z))?;
    }
    Ok(Status::Ok)
}

fn verify_cmd(cfg: &Config, pool: &Pool, out: &mut dyn Write) -> Result<Status, RunError> {
    let torus = scenario::run_torus_scenario_with(pool, &cfg.scenario)?;
    let fidelity = scenario::fidelity_checks(&torus.params);
    let line = scenario::run_line_scenario_with(pool, &cfg.scenario)?;
    write_scenario_files(cfg, &torus)?;
    let stages: [(&str, &[Check]); 3] = [("fidelity", &fidelity), ("torus", &torus.checks), ("line", &line.checks)];
    if cfg.formats.json {
        let checks: Vec<Value> =
            stages.iter().flat_map(|(s, cs)| cs.iter().map(move |c| output::check_json(c, Some(s)))).collect();
        let passed = stages.iter().all(|(_, cs)| cs.iter().all(|c| c.pass));
        let v = json!({
            "kind": "verify",
            "passed": passed,
            "checks": checks,
            "torus": report_summary(&torus),
            "line": report_summary(&line),
        });
        output::write_json(&v, &cfg.out_dir.join("verify.json"))?;
    }
    Ok(summarize(out, &stages)?)
}

fn report_summary(r: &ScenarioReport) -> Value {
    let mut v = output::report_json(r);
    if let Value::Object(m) = &mut v {
        m.remove("checks");
    }
    v
}

fn write_scenario_files(cfg: &Config, rep: &ScenarioReport) -> Result<(), RunError> {
    if let Some(s) = &rep.sweep {
        write_table(cfg, &output::kstar_table(s), "kstar_curve", "critical wave number", "t", "kstar")?;
    }
    if let Some(c) = &rep.eigencurve {
        write_table(cfg, &output::eigencurve_table(c), "eigencurve", "unstable eigenvalue at t = T", "k", "c_i")?;
    }
    Ok(())
}

fn write_table(cfg: &Config, t: &Table, stem: &str, title: &str, x: &str, y: &str) -> io::Result<()> {
    let dir: &Path = &cfg.out_dir;
    if cfg.formats.csv {
        t.write_csv(&dir.join(format!("{stem}.csv")))?;
    }
    if cfg.formats.svg {
        fs::write(dir.join(format!("{stem}.svg")), output::svg_plot(title, x, y, &t.column(x), &t.column(y)))?;
    }
    Ok(())
}

/// Print one line per check; failures also go to stderr with their detail.
fn summarize(out: &mut dyn Write, stages: &[(&str, &[Check])]) -> io::Result<Status> {
    let mut status = Status::Ok;
    for (stage, checks) in stages {
        for c in *checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            writeln!(
                out,
                "{tag}  {stage:<8} {:<64} {:>24}  [{}, {}]",
                c.name,
                fmt(c.measured),
                fmt(c.band.0),
                fmt(c.band.1)
            )?;
            if !c.pass {
                writeln!(out, "      {}", c.detail)?;
                eprintln!("check failed: {}: {}", c.name, c.detail);
                status = match (status, c.is_stage_error()) {
                    (Status::Numerical, _) | (_, true) => Status::Numerical,
                    _ => Status::CheckFailed,
                };
            }
        }
    }
    Ok(status)
}
