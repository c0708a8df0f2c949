//! End-to-end pipelines: the periodic-channel (torus) transition from
//! spectral stability to instability, and the whole-line emergence of a
//! bound state at the threshold amplitude. Each stage appends named checks
//! with the measured value and its acceptance band to a [`ScenarioReport`].

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_traits::Float;

use crate::calibrate::{self, KstarCurve, TOL_CAL};
use crate::exec::{Executor, Sequential};
use crate::flow::{self, FlowParams, FlowState};
use crate::rayleigh::{self, EigenCurve, DEFAULT_C_MAX};
use crate::spectrum::{self, Grid, TOL_EIG};
use crate::{Error, Result};

/// Largest fitted constant accepted for the neutral-mode profile.
pub const PROFILE_C_MAX: f64 = 20.0;
/// Largest fitted constant accepted for the regular-solution bounds.
pub const BOUNDS_C_MAX: f64 = 50.0;
/// Order-of-magnitude band for the fitted `1/C` ratios.
pub const ORDER_BAND: (f64, f64) = (1.0 / 50.0, 50.0);
/// Band for slopes and Wronskian partials.
pub const SLOPE_BAND: (f64, f64) = (1.0 / 20.0, 20.0);
/// Upper constant for the zero of `h1` in units of `γ0γ1`.
pub const H1_ZERO_C: f64 = 10.0;

/// One named acceptance check.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    /// NaN when the stage producing it failed.
    pub measured: f64,
    /// Inclusive band; infinite ends are open.
    pub band: (f64, f64),
    /// Failure explanation; empty on success.
    pub detail: String,
}

impl Check {
    pub fn within(name: &str, measured: f64, band: (f64, f64)) -> Self {
        let pass = measured >= band.0 && measured <= band.1;
        let detail = if pass {
            String::new()
        } else {
            format!("measured {measured:e} outside [{:e}, {:e}]", band.0, band.1)
        };
        Self { name: name.to_string(), pass, measured, band, detail }
    }

    /// Band check with a custom failure message.
    pub fn within_or(name: &str, measured: f64, band: (f64, f64), failure: &str) -> Self {
        let mut c = Self::within(name, measured, band);
        if !c.pass {
            c.detail = format!("{failure} (measured {measured:e})");
        }
        c
    }

    fn gate(mut self, ok: bool, why: &str) -> Self {
        if self.pass && !ok {
            self.pass = false;
            self.detail = why.to_string();
        }
        self
    }

    pub fn error(name: &str, err: &Error) -> Self {
        Self { name: name.to_string(), pass: false, measured: f64::NAN, band: (f64::NAN, f64::NAN), detail: err.to_string() }
    }

    /// True when the check records a numerical failure rather than a
    /// measurement.
    pub fn is_stage_error(&self) -> bool {
        !self.pass && self.measured.is_nan() && self.band.0.is_nan()
    }
}

/// Inputs of both pipelines.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioConfig {
    pub gamma0: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub nu: f64,
    /// Starting guess for the tuned amplitude.
    pub m: Option<f64>,
    /// Initial gap `1 − k*(0)`.
    pub delta: f64,
    /// Number of intervals of the uniform `t` grid.
    pub n_times: usize,
    pub grid: Grid,
    /// Left end of the eigencurve `k` grid (the right end is `k*(T)`).
    pub k_min: f64,
    pub n_k: usize,
    pub c_max: f64,
    /// Grid for the pointwise bound suites.
    pub bounds_grid: Grid,
}

impl Default for ScenarioConfig {
    fn default() -> Self {
        Self {
            gamma0: 0.15,
            gamma1: 0.03,
            gamma2: 0.8,
            nu: 1e-3,
            m: None,
            delta: 0.01,
            n_times: 8,
            grid: Grid::default(),
            k_min: 0.9,
            n_k: 12,
            c_max: DEFAULT_C_MAX,
            bounds_grid: Grid { half_width: 20.0, n_points: 4001 },
        }
    }
}

impl ScenarioConfig {
    /// Flow parameters with the configured (or zero) amplitude.
    pub fn params(&self) -> Result<FlowParams> {
        FlowParams::new(self.m.unwrap_or(0.0), self.gamma0, self.gamma1, self.gamma2, self.nu)
    }

    pub fn validate(&self) -> Result<()> {
        self.params()?;
        self.grid.validate()?;
        self.bounds_grid.validate()?;
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(Error::InvalidParameter("delta must lie in (0, 1)"));
        }
        if self.n_times < 8 {
            return Err(Error::InvalidParameter("n_times must be at least 8"));
        }
        if !(self.k_min > 0.0) || self.n_k < 3 {
            return Err(Error::InvalidParameter("eigencurve needs k_min > 0 and n_k >= 3"));
        }
        if !(self.c_max > rayleigh::SCAN_MIN) {
            return Err(Error::InvalidParameter("c_max must exceed the smallest scan value"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioReport {
    pub kind: &'static str,
    /// Parameters with the calibrated amplitude.
    pub params: FlowParams,
    pub t_end: f64,
    pub t_tilde: Option<f64>,
    pub kstar0: Option<f64>,
    pub kstar_t: Option<f64>,
    pub ci_at_k1: Option<f64>,
    pub slope_at_k1: Option<f64>,
    /// `(k, c_i)` of the probe root (whole-line scenario).
    pub probe_root: Option<(f64, f64)>,
    pub sweep: Option<KstarCurve>,
    pub eigencurve: Option<EigenCurve>,
    pub checks: Vec<Check>,
}

impl ScenarioReport {
    fn new(kind: &'static str, params: FlowParams) -> Self {
        Self {
            kind,
            params,
            t_end: params.horizon(),
            t_tilde: None,
            kstar0: None,
            kstar_t: None,
            ci_at_k1: None,
            slope_at_k1: None,
            probe_root: None,
            sweep: None,
            eigencurve: None,
            checks: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    fn push(&mut self, c: Check) {
        self.checks.push(c);
    }
}

fn pass_flag(name: &str, ok: bool, measured: f64, band: (f64, f64), why: &str) -> Check {
    Check::within(name, measured, band).gate(ok, why)
}

/// Periodic-channel pipeline; see the module docs.
pub fn run_torus_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    run_torus_scenario_with(&Sequential, cfg)
}

pub fn run_torus_scenario_with<E: Executor>(exec: &E, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let base = cfg.params()?;
    let target = 1.0 - cfg.delta;
    let mut rep = ScenarioReport::new("torus", base);

    let cal = match calibrate::tune_m_for_kstar(&base, 0.0, target) {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::error("calibration k*(0) = 1 - delta", &e));
            return Ok(rep);
        }
    };
    rep.push(Check::within("calibration k*(0) = 1 - delta", (cal.achieved - target).abs(), (0.0, TOL_CAL)));
    let params = base.with_m(cal.m);
    rep.params = params;
    let t_end = params.horizon();

    let sweep = match calibrate::kstar_time_sweep_with(exec, &params, cfg.n_times, &cfg.grid) {
        Ok(s) => s,
        Err(e) => {
            rep.push(Check::error("k*(t) sweep", &e));
            return Ok(rep);
        }
    };
    rep.kstar0 = sweep.points[0].kstar;
    rep.kstar_t = sweep.points[sweep.points.len() - 1].kstar;
    rep.t_tilde = sweep.t_tilde;
    rep.push(Check::within("k*(t) nondecreasing (max lambda1 increase)", sweep.max_lambda_increase(), (f64::NEG_INFINITY, 10.0 * TOL_EIG)));
    rep.push(Check::within("unique bound state (min lambda2)", sweep.min_lambda2(), (-10.0 * TOL_EIG, f64::INFINITY)));
    rep.push(profile_check_at(&params, 0.0, &cfg.grid));
    let k0 = rep.kstar0.unwrap_or(0.0);
    let kt = rep.kstar_t.unwrap_or(0.0);
    rep.push(Check::within_or("transition budget k*(T) > 1", kt, (1.0, f64::INFINITY), "transition budget insufficient").gate(kt > 1.0, "transition budget insufficient"));
    rep.push(Check::within("k* excess (k*(T) - k*(0))/(gamma1 gamma2)", (kt - k0) / (params.gamma1 * params.gamma2), ORDER_BAND));
    match (sweep.t_tilde, sweep.kstar_at_t_tilde) {
        (Some(tt), Some(ktt)) => rep.push(pass_flag(
            "Ttilde located (|k*(Ttilde) - 1|)",
            tt > 0.0 && tt < t_end,
            (ktt - 1.0).abs(),
            (0.0, TOL_CAL),
            "Ttilde outside (0, T)",
        )),
        _ => rep.push(pass_flag("Ttilde located (|k*(Ttilde) - 1|)", false, f64::NAN, (0.0, TOL_CAL), "k*(t) never crosses 1")),
    }
    let bound_times: Vec<(f64, f64)> = sweep.points.iter().filter_map(|p| p.kstar.map(|k| (p.t, k))).collect();
    rep.sweep = Some(sweep);

    let state_t = params.at(t_end)?;
    let mut root_t = None;
    match rayleigh::scan_roots(exec, &state_t, 1.0, cfg.c_max) {
        Ok(scan) => {
            rep.push(Check::within("single c_i root at k = 1, t = T (sign changes)", scan.sign_changes as f64, (1.0, 1.0)));
            rep.push(Check::within("Im W/|W| over the scan at k = 1, t = T", scan.max_imag_ratio(), (0.0, 1e-6)));
            if let Some(r) = scan.root {
                rep.ci_at_k1 = Some(r.c_i);
                root_t = Some(r.c_i);
                rep.push(Check::within("|W| at the root <= tol_root", r.residual, (0.0, r.tol_root)));
                let g = params.gamma0 * params.gamma1 * params.gamma2;
                rep.push(Check::within("c_i(1)/(gamma0 gamma1 gamma2) at t = T", r.c_i / g, ORDER_BAND));
            }
        }
        Err(e) => rep.push(Check::error("single c_i root at k = 1, t = T (sign changes)", &e)),
    }
    for k in [1.5, 2.0] {
        let name = format!("no root at k = {k}, t = T (sign changes)");
        match rayleigh::scan_roots(exec, &state_t, k, cfg.c_max) {
            Ok(s) => rep.push(Check::within(&name, s.sign_changes as f64, (0.0, 0.0))),
            Err(e) => rep.push(Check::error(&name, &e)),
        }
    }

    if let Some(tt) = rep.t_tilde {
        dichotomy_checks(exec, &mut rep, &params, tt, cfg.c_max);
    }

    if kt > cfg.k_min {
        eigencurve_checks(exec, &mut rep, &state_t, cfg, kt, root_t);
    } else {
        rep.push(pass_flag("eigencurve over [k_min, k*(T))", false, kt, (cfg.k_min, f64::INFINITY), "k*(T) below k_min"));
    }

    // the boundary Wronskian vanishes at every k*(t)
    let mut worst: f64 = 0.0;
    let mut failure = None;
    for &(t, k) in &bound_times {
        match params.at(t).and_then(|s| rayleigh::wronskian_boundary(&s, k)) {
            Ok(w) => worst = worst.max(w.w.norm() / w.scale()),
            Err(e) => failure = Some(e),
        }
    }
    match failure {
        None => rep.push(Check::within("boundary Wronskian at k*(t) (|W|/scale)", worst, (0.0, 1e-4))),
        Some(e) => rep.push(Check::error("boundary Wronskian at k*(t) (|W|/scale)", &e)),
    }
    match phib_difference(&state_t, &cfg.grid) {
        Ok(d) => rep.push(Check::within("phiB vs eigensolver mode at t = T (L2 difference)", d, (0.0, 1e-3))),
        Err(e) => rep.push(Check::error("phiB vs eigensolver mode at t = T (L2 difference)", &e)),
    }

    if let Some(c) = root_t {
        bound_checks(&mut rep, &state_t, c, "t = T, k = 1, c_i = root", &cfg.bounds_grid);
    }
    if let Some(tt) = rep.t_tilde {
        match params.at(tt) {
            Ok(s) => bound_checks(&mut rep, &s, 1e-4, "t = Ttilde, k = 1, c_i = 1e-4", &cfg.bounds_grid),
            Err(e) => rep.push(Check::error("bounds at Ttilde", &e)),
        }
    }
    Ok(rep)
}

fn profile_check_at(params: &FlowParams, t: f64, grid: &Grid) -> Check {
    let name = "neutral mode profile at t = 0 (fitted C)";
    let run = || -> Result<spectrum::ProfileReport> {
        let s = params.at(t)?;
        let r = spectrum::lowest_eigenpair(&s, grid)?;
        spectrum::profile_check(&r, &s)
    };
    match run() {
        Ok(p) => pass_flag(
            name,
            p.even && p.positive && p.monotone,
            p.fitted_c(),
            (1.0, PROFILE_C_MAX),
            "mode not even, positive and monotone on y >= 0",
        ),
        Err(e) => Check::error(name, &e),
    }
}

// 9 times: both ends, Ttilde ± 2% T and five interior points
fn dichotomy_times(t_end: f64, tt: f64) -> Vec<f64> {
    let mut ts = vec![0.0, t_end, (tt - 0.02 * t_end).max(0.0), (tt + 0.02 * t_end).min(t_end)];
    for j in 1..=5 {
        ts.push(t_end * j as f64 / 6.0);
    }
    ts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    ts
}

fn dichotomy_checks<E: Executor>(exec: &E, rep: &mut ScenarioReport, params: &FlowParams, tt: f64, c_max: f64) {
    let mut before = 0.0f64;
    let mut after_bad = 0.0f64;
    for t in dichotomy_times(params.horizon(), tt) {
        let r = params.at(t).and_then(|s| rayleigh::scan_roots(exec, &s, 1.0, c_max));
        match r {
            Ok(s) if t < tt => before = before.max(s.sign_changes as f64),
            Ok(s) => {
                if s.sign_changes != 1 {
                    after_bad += 1.0;
                }
            }
            Err(e) => {
                rep.push(Check::error("root dichotomy in t at k = 1", &e));
                return;
            }
        }
    }
    rep.push(Check::within("no root at k = 1 for sampled t < Ttilde (sign changes)", before, (0.0, 0.0)));
    rep.push(Check::within("one root at k = 1 for sampled t > Ttilde (violations)", after_bad, (0.0, 0.0)));
}

/// `n_k` uniform wave numbers on `[k_min, kt)`.
pub fn eigencurve_grid(cfg: &ScenarioConfig, kt: f64) -> Vec<f64> {
    let n = cfg.n_k;
    (0..n).map(|j| cfg.k_min + (kt - cfg.k_min) * j as f64 / n as f64).collect()
}

fn eigencurve_checks<E: Executor>(
    exec: &E,
    rep: &mut ScenarioReport,
    state: &FlowState,
    cfg: &ScenarioConfig,
    kt: f64,
    root: Option<f64>,
) {
    let ks = eigencurve_grid(cfg, kt);
    let curve = match rayleigh::eigencurve_with(exec, state, &ks) {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::error("eigencurve", &e));
            return;
        }
    };
    let max_step = curve.points.windows(2).map(|w| w[1].1 - w[0].1).fold(f64::NEG_INFINITY, f64::max);
    rep.push(pass_flag(
        "c_i strictly decreasing along the eigencurve (max step)",
        curve.absent.is_empty(),
        max_step,
        (f64::NEG_INFINITY, 0.0),
        "root missing at some k < k*(T)",
    ));
    let g0 = state.params.gamma0;
    // the sample farthest from the band centre in log scale
    let worst = curve
        .slope_samples
        .iter()
        .map(|s| s.1.abs() / g0)
        .fold(None, |acc: Option<f64>, v| match acc {
            Some(a) if libm::log(a).abs() >= libm::log(v).abs() => Some(a),
            _ => Some(v),
        })
        .unwrap_or(f64::NAN);
    rep.push(Check::within("|dc_i/dk|/gamma0 along the eigencurve (worst sample)", worst, SLOPE_BAND));
    match curve.zero_k {
        Some(z) => rep.push(Check::within("eigencurve zero vs k*(T) (relative)", (z - kt).abs() / kt, (0.0, 1e-3))),
        None => rep.push(pass_flag("eigencurve zero vs k*(T) (relative)", false, f64::NAN, (0.0, 1e-3), "too few roots")),
    }
    rep.eigencurve = Some(curve);

    let Some(c1) = root else { return };
    if kt <= 1.0 {
        return;
    }
    let h = (1e-3f64).min(0.5 * (kt - 1.0));
    let slope = rayleigh::eigenvalue_for_k_with(exec, state, 1.0 + h, cfg.c_max).and_then(|a| {
        let b = rayleigh::eigenvalue_for_k_with(exec, state, 1.0 - h, cfg.c_max)?;
        match (a, b) {
            (Some(a), Some(b)) => Ok((a.c_i - b.c_i) / (2.0 * h)),
            _ => Err(Error::NonConvergence { what: "root missing next to k = 1", spread: h }),
        }
    });
    let slope = match slope {
        Ok(s) => s,
        Err(e) => {
            rep.push(Check::error("curve slope at k = 1", &e));
            return;
        }
    };
    rep.slope_at_k1 = Some(slope);
    match rayleigh::wronskian_partials(state, 1.0, c1) {
        Ok((dk, dc)) => {
            let implicit = -dk / dc;
            rep.push(Check::within("implicit slope -dWr/dk / dWr/dci vs curve slope (relative)", (implicit - slope).abs() / slope.abs(), (0.0, 0.2)));
            rep.push(Check::within("dWr/dci * gamma0", dc * g0, (-SLOPE_BAND.1, -SLOPE_BAND.0)));
            rep.push(Check::within("dWr/dk", dk, (-SLOPE_BAND.1, -SLOPE_BAND.0)));
        }
        Err(e) => rep.push(Check::error("Wronskian partials", &e)),
    }
}

fn phib_difference(state: &FlowState, grid: &Grid) -> Result<f64> {
    let r = spectrum::lowest_eigenpair(state, grid)?;
    let k = r.kstar.ok_or(Error::InvalidParameter("no bound state at t = T"))?;
    let pb = rayleigh::neutral_mode_phib(state, k, grid)?;
    let c = grid.center();
    let sign = if pb.mode[c] * r.mode[c] < 0.0 { -1.0 } else { 1.0 };
    let diff: Vec<f64> = pb.mode.iter().zip(&r.mode).map(|(a, b)| a - sign * b).collect();
    Ok(grid.norm(&diff))
}

fn bound_checks(rep: &mut ScenarioReport, state: &FlowState, c_i: f64, at: &str, grid: &Grid) {
    let run = || -> Result<(rayleigh::BoundSuite, rayleigh::BoundSuite)> {
        let p1 = rayleigh::solve_phi1(state, 1.0, grid)?;
        let p2 = rayleigh::solve_phi2(state, 1.0, c_i, &p1)?;
        Ok((rayleigh::phi1_bounds(state, &p1), rayleigh::phi2_bounds(state, &p1, &p2)))
    };
    let n1 = format!("phi1 bounds at {at} (max fitted C)");
    let n2 = format!("phi2 bounds at {at} (max fitted C)");
    match run() {
        Ok((b1, b2)) => {
            let ok1 = b1.checks.iter().all(|c| c.holds);
            let ok2 = b2.checks.iter().all(|c| c.holds);
            rep.push(pass_flag(&n1, ok1, b1.max_constant(), (1.0, BOUNDS_C_MAX), "a sign condition fails"));
            rep.push(pass_flag(&n2, ok2, b2.max_constant(), (1.0, BOUNDS_C_MAX), "a bound has no finite constant"));
        }
        Err(e) => {
            rep.push(Check::error(&n1, &e));
            rep.push(Check::error(&n2, &e));
        }
    }
}

/// Whole-line pipeline at the threshold amplitude `M0`.
pub fn run_line_scenario(cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    run_line_scenario_with(&Sequential, cfg)
}

pub fn run_line_scenario_with<E: Executor>(exec: &E, cfg: &ScenarioConfig) -> Result<ScenarioReport> {
    cfg.validate()?;
    let base = cfg.params()?;
    let mut rep = ScenarioReport::new("line", base);
    let m0 = match calibrate::find_critical_m0(&base) {
        Ok(c) => c,
        Err(e) => {
            rep.push(Check::error("critical amplitude M0 (lambda1 at M0)", &e));
            return Ok(rep);
        }
    };
    rep.push(Check::within("critical amplitude M0 (lambda1 at M0)", m0.achieved, (-TOL_EIG, 0.0)));
    let params = base.with_m(m0.m);
    rep.params = params;
    let t_end = params.horizon();

    match calibrate::kstar_time_sweep_with(exec, &params, cfg.n_times, &cfg.grid) {
        Ok(s) => {
            let first = s.points[0];
            let last = s.points[s.points.len() - 1];
            rep.kstar0 = first.kstar;
            rep.kstar_t = last.kstar;
            rep.push(pass_flag("k* absent at t = 0 (lambda1)", first.kstar.is_none(), first.lambda1, (-TOL_EIG, f64::INFINITY), "bound state at t = 0"));
            rep.push(pass_flag("k* present at t = T (lambda1)", last.kstar.is_some(), last.lambda1, (f64::NEG_INFINITY, -TOL_EIG), "no bound state at t = T"));
            let ratio = last.kstar.map_or(f64::NAN, |k| k / (params.gamma1 * params.gamma2));
            rep.push(Check::within("k*(T)/(gamma1 gamma2)", ratio, ORDER_BAND));
            rep.sweep = Some(s);
        }
        Err(e) => {
            rep.push(Check::error("k*(t) sweep", &e));
            return Ok(rep);
        }
    }
    if let Some(kt) = rep.kstar_t {
        let probe = 0.5 * kt;
        let name = "root at probe k = k*(T)/2, t = T (sign changes)";
        match params.at(t_end).and_then(|s| rayleigh::scan_roots(exec, &s, probe, cfg.c_max)) {
            Ok(s) => {
                if let Some(r) = s.root {
                    rep.probe_root = Some((probe, r.c_i));
                }
                rep.push(Check::within(name, s.sign_changes as f64, (1.0, 1.0)));
            }
            Err(e) => rep.push(Check::error(name, &e)),
        }
    }
    Ok(rep)
}

/// Closed-form fidelity checks of the flow family and the Couette oracle.
pub fn fidelity_checks(params: &FlowParams) -> Vec<Check> {
    let mut out = Vec::new();
    let t_end = params.horizon();
    let run = || -> Result<Vec<Check>> {
        let mut v = Vec::new();
        // heat equation at 25 points
        let mut worst: f64 = 0.0;
        let dt = 1e-3 * t_end;
        for i in 1..=5 {
            let t = t_end * i as f64 / 5.0;
            let s = params.at(t)?;
            let w = s.s2.sqrt();
            for y in [0.0, 0.5 * w, w, 2.0 * w, 3.0 * s.s1.sqrt()] {
                worst = worst.max(flow::heat_residual(&s, y, dt)?);
            }
        }
        v.push(Check::within("heat residual at 25 (t, y)", worst, (0.0, 1e-6)));
        // closed-form derivatives against fourth-order differences
        let mut rel: f64 = 0.0;
        for t in [0.0, 0.5 * t_end, t_end] {
            let s = params.at(t)?;
            let h = 1e-3 * s.s2.sqrt();
            for y in [0.3, 0.8, 1.7, 3.0].map(|f| f * s.s2.sqrt()) {
                let d = |f: &dyn Fn(f64) -> f64| {
                    (f(y - 2.0 * h) - 8.0 * f(y - h) + 8.0 * f(y + h) - f(y + 2.0 * h)) / (12.0 * h)
                };
                let exact = s.derivs(y);
                let pairs = [
                    (d(&|x| s.b(x)), exact.b1),
                    (d(&|x| s.derivs(x).b1), exact.b2),
                    (d(&|x| s.derivs(x).b2), exact.b3),
                ];
                for (fd, ex) in pairs {
                    rel = rel.max((fd - ex).abs() / ex.abs());
                }
            }
        }
        v.push(Check::within("finite differences of b', b'', b''' (relative)", rel, (0.0, 1e-6)));
        // Couette oracle
        let g = Grid::new(10.0, 2001)?;
        let couette = params.with_m(0.0).at(0.0)?;
        let mut dev: f64 = 0.0;
        for k in [0.5, 1.0, 2.0] {
            for &(y, f, _) in &rayleigh::solve_phi1(&couette, k, &g)?.samples {
                let want = if y == 0.0 { 1.0 } else { libm::sinh(k * y) / (k * y) };
                dev = dev.max((f - want).abs() / want);
            }
        }
        v.push(Check::within("Couette phi1 vs sinh(ky)/(ky) (relative)", dev, (0.0, 1e-8)));
        // h1 identity
        let w0 = params.gamma0 * params.gamma1;
        let mut rel: f64 = 0.0;
        let mut zero_lo = f64::INFINITY;
        let mut zero_hi: f64 = 0.0;
        for t in [0.25 * t_end, 0.5 * t_end, t_end] {
            let d = flow::h1_diagnostics(params, t)?;
            let exact = flow::h1_total_closed_form(params, t);
            rel = rel.max((d.total_integral - exact).abs() / exact.abs());
            zero_lo = zero_lo.min(d.zero_point / w0);
            zero_hi = zero_hi.max(d.zero_point / w0);
        }
        v.push(Check::within("h1 total integral vs closed form (relative)", rel, (0.0, 1e-10)));
        v.push(Check::within("h1 zero point / (gamma0 gamma1), smallest", zero_lo, (1.5f64.sqrt(), H1_ZERO_C)));
        v.push(Check::within("h1 zero point / (gamma0 gamma1), largest", zero_hi, (1.5f64.sqrt(), H1_ZERO_C)));
        Ok(v)
    };
    match run() {
        Ok(v) => out.extend(v),
        Err(e) => out.push(Check::error("closed-form fidelity", &e)),
    }
    out
}
