//! Parameter searches: tune the amplitude `M` to a target critical wave
//! number, find the threshold amplitude `M0` at which a bound state appears,
//! and sweep `k*(t)` over `[0, T]` with the crossing time `T̃` of `k* = 1`.

use alloc::vec::Vec;

use num_traits::Float;

use crate::exec::{Executor, Sequential};
use crate::flow::FlowParams;
use crate::roots::bisect_predicate;
use crate::spectrum::{critical_wavenumber_fast, lowest_eigenpair, lowest_eigenvalue, Grid, TOL_EIG};
use crate::{Error, Result};

pub const TOL_CAL: f64 = 1e-6;
pub const M_BRACKET: (f64, f64) = (0.01, 100.0);
/// The threshold amplitude can sit far below `M_BRACKET.0`.
pub const M0_BRACKET: (f64, f64) = (1e-8, 100.0);
pub const MAX_BISECTIONS: usize = 80;
/// Relative width of the warm-start bracket around a supplied `M`.
const WARM_WIDTH: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationResult {
    pub m: f64,
    /// `k*` (for [`tune_m_for_kstar`]) or `λ1` (for [`find_critical_m0`]) at `m`.
    pub achieved: f64,
    pub iterations: usize,
    pub bracket: (f64, f64),
}

fn kstar_at(params: &FlowParams, m: f64, t: f64) -> Result<f64> {
    Ok(critical_wavenumber_fast(&params.with_m(m).at(t)?)?.unwrap_or(0.0))
}

fn lambda_at(params: &FlowParams, m: f64, t: f64) -> Result<f64> {
    lowest_eigenvalue(&params.with_m(m).at(t)?)
}

/// Bisection on `M` for `k*(M, t) = target`, using that `λ1` decreases
/// strictly in `M`.
///
/// A positive `params.m` is taken as a starting guess: when a bracket of
/// relative width `1e−5` around it already straddles the target, the search
/// starts there instead of from [`M_BRACKET`].
pub fn tune_m_for_kstar(params: &FlowParams, t: f64, target: f64) -> Result<CalibrationResult> {
    if !(target > 0.0 && target * target <= 2.0) {
        return Err(Error::InvalidParameter("target k* must lie in (0, sqrt 2]"));
    }
    let f = |m: f64| kstar_at(params, m, t).map(|k| k - target);
    let guess = params.m;
    if guess > 0.0 {
        let fg = f(guess)?;
        if fg.abs() <= TOL_CAL {
            return Ok(CalibrationResult { m: guess, achieved: fg + target, iterations: 0, bracket: (guess, guess) });
        }
        let (lo, hi) = (guess * (1.0 - WARM_WIDTH), guess * (1.0 + WARM_WIDTH));
        if f(lo)? < 0.0 && f(hi)? > 0.0 {
            return bisect_m(&f, lo, hi, target);
        }
    }
    let (lo, hi) = M_BRACKET;
    if f(lo)? >= 0.0 || f(hi)? <= 0.0 {
        return Err(Error::BracketFailure("k* does not straddle the target for M in [0.01, 100]"));
    }
    bisect_m(&f, lo, hi, target)
}

fn bisect_m<F: Fn(f64) -> Result<f64>>(f: &F, mut lo: f64, mut hi: f64, target: f64) -> Result<CalibrationResult> {
    for it in 1..=MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid)?;
        if fm.abs() <= TOL_CAL {
            return Ok(CalibrationResult { m: mid, achieved: fm + target, iterations: it, bracket: (lo, hi) });
        }
        if fm < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence { what: "M calibration", spread: hi - lo })
}

/// Smallest `M` (to relative precision `1e−4`) at which `λ1(M, 0) < −tol_eig`.
/// The returned `m` is the lower end of the final bracket, so
/// `λ1(m, 0) ∈ [−tol_eig, 0]` and `λ1(m(1 + 1e−4), 0) < −tol_eig`.
pub fn find_critical_m0(params: &FlowParams) -> Result<CalibrationResult> {
    let bound = |m: f64| lambda_at(params, m, 0.0).map(|l| l < -TOL_EIG);
    let (lo, hi) = M0_BRACKET;
    if bound(lo)? || !bound(hi)? {
        return Err(Error::BracketFailure("bound state threshold not inside M in [1e-8, 100]"));
    }
    // bisection in log M across ten decades
    let (a, b, it) = bisect_predicate(
        |x| bound(libm::exp(x)),
        libm::log(lo),
        libm::log(hi),
        |a, b| libm::exp(b) - libm::exp(a) <= 1e-4 * libm::exp(a),
        MAX_BISECTIONS,
    )?;
    let (m_lo, m_hi) = (libm::exp(a), libm::exp(b));
    Ok(CalibrationResult { m: m_lo, achieved: lambda_at(params, m_lo, 0.0)?, iterations: it, bracket: (m_lo, m_hi) })
}

/// One time sample of a sweep.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepPoint {
    pub t: f64,
    pub kstar: Option<f64>,
    pub lambda1: f64,
    pub lambda2: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KstarCurve {
    pub points: Vec<SweepPoint>,
    /// Horizon `T = γ0²γ1²/ν`.
    pub t_end: f64,
    pub t_tilde: Option<f64>,
    /// `k*` at `t_tilde`.
    pub kstar_at_t_tilde: Option<f64>,
}

impl KstarCurve {
    pub fn times(&self) -> Vec<f64> {
        self.points.iter().map(|p| p.t).collect()
    }

    pub fn kstars(&self) -> Vec<Option<f64>> {
        self.points.iter().map(|p| p.kstar).collect()
    }

    /// Largest increase of `λ1` between consecutive samples (nonpositive for
    /// a nondecreasing `k*`).
    pub fn max_lambda_increase(&self) -> f64 {
        self.points.windows(2).map(|w| w[1].lambda1 - w[0].lambda1).fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn nondecreasing(&self) -> bool {
        self.max_lambda_increase() <= 10.0 * TOL_EIG
    }

    pub fn strictly_increasing(&self) -> bool {
        self.points.windows(2).all(|w| match (w[0].kstar, w[1].kstar) {
            (Some(a), Some(b)) => b > a,
            _ => false,
        })
    }

    pub fn min_lambda2(&self) -> f64 {
        self.points.iter().map(|p| p.lambda2).fold(f64::INFINITY, f64::min)
    }
}

/// Uniform sweep of `n_times + 1` samples over `[0, T]`, with `T̃` located by
/// bisection in `t` when `k*` crosses 1.
pub fn kstar_time_sweep(params: &FlowParams, n_times: usize, grid: &Grid) -> Result<KstarCurve> {
    kstar_time_sweep_with(&Sequential, params, n_times, grid)
}

pub fn kstar_time_sweep_with<E: Executor>(
    exec: &E,
    params: &FlowParams,
    n_times: usize,
    grid: &Grid,
) -> Result<KstarCurve> {
    if n_times < 8 {
        return Err(Error::InvalidParameter("n_times must be at least 8"));
    }
    let t_end = params.horizon();
    let times: Vec<f64> = (0..=n_times).map(|i| t_end * i as f64 / n_times as f64).collect();
    let points = exec
        .map(&times, |&t| {
            let r = lowest_eigenpair(&params.at(t)?, grid)?;
            Ok(SweepPoint { t, kstar: r.kstar, lambda1: r.lambda1, lambda2: r.lambda2 })
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    let below = |p: &SweepPoint| p.kstar.is_none_or(|k| k < 1.0);
    let mut t_tilde = None;
    let mut kstar_at_t_tilde = None;
    if let Some(j) = points.windows(2).position(|w| below(&w[0]) && !below(&w[1])) {
        let (t, k) = locate_crossing(params, points[j].t, points[j + 1].t)?;
        t_tilde = Some(t);
        kstar_at_t_tilde = Some(k);
    }
    Ok(KstarCurve { points, t_end, t_tilde, kstar_at_t_tilde })
}

fn locate_crossing(params: &FlowParams, mut lo: f64, mut hi: f64) -> Result<(f64, f64)> {
    let k = |t: f64| kstar_at(params, params.m, t);
    for _ in 0..MAX_BISECTIONS {
        let mid = 0.5 * (lo + hi);
        let km = k(mid)?;
        if (km - 1.0).abs() <= TOL_CAL {
            return Ok((mid, km));
        }
        if km < 1.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Err(Error::NonConvergence { what: "transition time bisection", spread: hi - lo })
}
