//! Lowest eigenpair of `L = −d²/dy² + V`, `V = b''/b`.
//!
//! Two independent solvers are run on every call:
//!
//! * shooting in `κ = √(−λ)`: integrate `φ'' = (V + κ²)φ` from the origin
//!   with even data and match `φ' = −κφ` at the support radius, beyond which
//!   `V` vanishes to double precision so the Robin closure is exact;
//! * a three-point finite-volume discretization on a `sinh`-graded mesh over
//!   `[−Y, Y]` with the same Robin closure, solved by Sturm bisection on two
//!   nested meshes and Richardson-extrapolated.
//!
//! The shooting value is reported as `λ1`; the finite-volume system supplies
//! `λ2`, the negative eigenvalue count and an eigenvector (inverse
//! iteration) used as cross-checks.

use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::flow::FlowState;
use crate::ode::{Dopri5, Tolerance};
use crate::roots::brent;
use crate::tridiag::SymTridiag;
use crate::{Error, Result};

/// Tolerance on converged eigenvalues.
pub const TOL_EIG: f64 = 1e-8;

/// Largest accepted gap between the shooting and finite-volume `λ1`.
pub const FV_AGREEMENT: f64 = 1e-6;

/// Uniform symmetric grid on `[−half_width, half_width]` with `y = 0` as the
/// middle node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub half_width: f64,
    pub n_points: usize,
}

impl Default for Grid {
    fn default() -> Self {
        Self { half_width: 20.0, n_points: 32769 }
    }
}

impl Grid {
    pub fn new(half_width: f64, n_points: usize) -> Result<Self> {
        let g = Self { half_width, n_points };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.half_width > 0.0 && self.half_width.is_finite()) {
            return Err(Error::InvalidParameter("half_width must be positive"));
        }
        if self.n_points % 2 == 0 {
            return Err(Error::InvalidParameter("n_points must be odd"));
        }
        if self.n_points < 5 {
            return Err(Error::InvalidParameter("n_points must be at least 5"));
        }
        Ok(())
    }

    pub fn spacing(&self) -> f64 {
        2.0 * self.half_width / (self.n_points - 1) as f64
    }

    /// Index of `y = 0`.
    pub fn center(&self) -> usize {
        (self.n_points - 1) / 2
    }

    pub fn node(&self, j: usize) -> f64 {
        (j as f64 - self.center() as f64) * self.spacing()
    }

    pub fn nodes(&self) -> Vec<f64> {
        (0..self.n_points).map(|j| self.node(j)).collect()
    }

    /// Discrete L² norm (trapezoid weights).
    pub fn norm(&self, v: &[f64]) -> f64 {
        let h = self.spacing();
        let n = v.len();
        let mut s = 0.0;
        for (j, x) in v.iter().enumerate() {
            let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
            s += w * x * x;
        }
        (s * h).sqrt()
    }
}

/// Convergence record of one eigensolve.
#[derive(Debug, Clone, PartialEq)]
pub struct Convergence {
    /// `λ1` from shooting at ODE tolerances 1e−10 and 1e−12.
    pub shooting: (f64, f64),
    /// Finite-volume mesh sizes (coarse, fine).
    pub fv_points: (usize, usize),
    /// Finite-volume `λ1` on the coarse and fine meshes.
    pub fv_lambda1: (f64, f64),
    /// Richardson extrapolation of the finite-volume `λ1`.
    pub richardson: f64,
    /// Eigenvalues below zero on the fine finite-volume mesh.
    pub negative_count: usize,
    /// Robin parameter used at `±Y`.
    pub kappa: f64,
    /// Max deviation between the inverse-iteration eigenvector and the
    /// shooting mode, both scaled to 1 at the origin, on the support.
    pub mode_deviation: f64,
}

/// Lowest (and second) eigenvalue with the normalized ground state.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralResult {
    pub lambda1: f64,
    pub lambda2: f64,
    pub kstar: Option<f64>,
    /// Ground state on the grid (unit discrete L² norm, positive); empty when
    /// there is no bound state.
    pub mode: Vec<f64>,
    pub grid: Grid,
    pub convergence: Convergence,
}

fn shoot_tolerance(rtol: f64) -> Tolerance {
    Tolerance::new(rtol, rtol * 1e-3)
}

/// Integrate the even solution with `φ(0) = 1` up to `y_end` (either sign).
fn shoot(state: &FlowState, kappa: f64, y_end: f64, rtol: f64) -> Result<[f64; 2]> {
    let k2 = kappa * kappa;
    let h0 = 1e-3 * state.s2.sqrt();
    let mut s = Dopri5::new(
        |y: f64, u: &[f64; 2]| [u[1], (state.potential(y) + k2) * u[0]],
        0.0,
        [1.0, 0.0],
        h0,
        shoot_tolerance(rtol),
    );
    s.advance_to(y_end)?;
    Ok(*s.y())
}

/// Matching function `G(κ) = φ'(Ys) + κφ(Ys)`; its zero in `κ > 0` is the
/// bound state.
pub fn matching_function(state: &FlowState, kappa: f64, rtol: f64) -> Result<f64> {
    let ys = state.support_radius();
    let u = shoot(state, kappa, ys, rtol)?;
    Ok(u[1] + kappa * u[0])
}

/// `κ = √(−λ1)` by shooting, or `None` when `L` has no negative eigenvalue.
pub fn ground_state_kappa(state: &FlowState, rtol: f64) -> Result<Option<f64>> {
    let g0 = matching_function(state, 0.0, rtol)?;
    if g0 >= 0.0 {
        return Ok(None);
    }
    let kmax = state.potential_bound().sqrt() + 1.0;
    let r = brent(|k| matching_function(state, k, rtol), 0.0, kmax, 1e-15, 0.0, 200)?;
    Ok(Some(r.x))
}

/// `λ1` by shooting alone (0 when there is no bound state). Cheap path used
/// inside parameter searches.
pub fn lowest_eigenvalue(state: &FlowState) -> Result<f64> {
    Ok(ground_state_kappa(state, 1e-12)?.map_or(0.0, |k| -k * k))
}

/// `sinh`-graded finite-volume discretization, symmetrized with the lumped
/// mass. Returns the matrix, the node positions and the lumped weights.
fn fv_system(state: &FlowState, y_max: f64, n: usize, kappa: f64) -> (SymTridiag, Vec<f64>, Vec<f64>) {
    // grading scale: finer at the origin would resolve nothing new and
    // inflate the matrix norm (and the bisection roundoff) like 1/h²
    let a = state.s1.sqrt();
    let xi_max = libm::asinh(y_max / a);
    let c = (n - 1) / 2;
    let dxi = xi_max / c as f64;
    let y: Vec<f64> = (0..n).map(|i| a * libm::sinh((i as f64 - c as f64) * dxi)).collect();
    let h: Vec<f64> = y.windows(2).map(|w| w[1] - w[0]).collect();
    let mut w = vec![0.0; n];
    for i in 0..n {
        let left = if i > 0 { h[i - 1] } else { 0.0 };
        let right = if i + 1 < n { h[i] } else { 0.0 };
        w[i] = 0.5 * (left + right);
    }
    let mut diag = vec![0.0; n];
    let mut off = vec![0.0; n - 1];
    for i in 0..n {
        let mut aii = w[i] * state.potential(y[i]);
        if i > 0 {
            aii += 1.0 / h[i - 1];
        }
        if i + 1 < n {
            aii += 1.0 / h[i];
        }
        if i == 0 || i + 1 == n {
            aii += kappa;
        }
        diag[i] = aii / w[i];
    }
    for i in 0..n - 1 {
        off[i] = -1.0 / h[i] / (w[i] * w[i + 1]).sqrt();
    }
    (SymTridiag::new(diag, off), y, w)
}

/// Sample the ground state on `grid` from the shooting solution: both
/// half-lines are integrated node to node out to the support radius and
/// continued by the exact exponential tail.
fn sample_mode(state: &FlowState, kappa: f64, grid: &Grid) -> Result<Vec<f64>> {
    let n = grid.n_points;
    let c = grid.center();
    let ys = state.support_radius();
    let mut mode = vec![0.0; n];
    mode[c] = 1.0;
    let k2 = kappa * kappa;
    for dir in [1.0f64, -1.0] {
        let mut s = Dopri5::new(
            |y: f64, u: &[f64; 2]| [u[1], (state.potential(y) + k2) * u[0]],
            0.0,
            [1.0, 0.0],
            1e-3 * state.s2.sqrt(),
            shoot_tolerance(1e-12),
        );
        let mut tail_from: Option<f64> = None;
        for m in 1..=c {
            let j = if dir > 0.0 { c + m } else { c - m };
            let y = grid.node(j);
            if y.abs() <= ys {
                s.advance_to(y)?;
                mode[j] = s.y()[0];
            } else {
                let base = *tail_from.get_or_insert_with(|| {
                    // both halves stop exactly at the support radius
                    let _ = s.advance_to(dir * ys);
                    s.y()[0]
                });
                mode[j] = base * libm::exp(-kappa * (y.abs() - ys));
            }
        }
    }
    let norm = grid.norm(&mode);
    if !(norm > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    for v in &mut mode {
        *v /= norm;
    }
    Ok(mode)
}

/// Lowest eigenpair of the operator with asymptotic Robin closure.
pub fn lowest_eigenpair(state: &FlowState, grid: &Grid) -> Result<SpectralResult> {
    grid.validate()?;
    let k_lo = ground_state_kappa(state, 1e-10)?;
    let k_hi = ground_state_kappa(state, 1e-12)?;
    let lam = |k: Option<f64>| k.map_or(0.0, |k| -k * k);
    let (l_lo, l_hi) = (lam(k_lo), lam(k_hi));
    if (l_lo - l_hi).abs() > TOL_EIG {
        return Err(Error::NonConvergence {
            what: "shooting refinements disagree",
            spread: (l_lo - l_hi).abs(),
        });
    }
    let kappa = k_hi.unwrap_or(0.0);
    let lambda1 = l_hi;

    // finite-volume cross-check on nested graded meshes
    let y_max = grid.half_width.max(state.support_radius());
    let n_coarse = grid.n_points;
    let n_fine = 2 * grid.n_points - 1;
    let (a_c, _, _) = fv_system(state, y_max, n_coarse, kappa);
    let (a_f, y_f, w_f) = fv_system(state, y_max, n_fine, kappa);
    let l1c = a_c.eigenvalue(0, 1e-14);
    let l1f = a_f.eigenvalue(0, 1e-14);
    let richardson = (4.0 * l1f - l1c) / 3.0;
    let lambda2 = a_f.eigenvalue(1, 1e-14);
    let negative_count = a_f.sturm_count(0.0);
    if (richardson - lambda1).abs() > FV_AGREEMENT {
        return Err(Error::NonConvergence {
            what: "finite-volume and shooting eigenvalues disagree",
            spread: (richardson - lambda1).abs(),
        });
    }

    let kstar = if lambda1 < -TOL_EIG { Some(kappa) } else { None };
    let (mode, mode_deviation) = if kstar.is_some() {
        let mode = sample_mode(state, kappa, grid)?;
        let dev = fv_mode_deviation(state, &a_f, l1f, &y_f, &w_f, kappa)?;
        (mode, dev)
    } else {
        (Vec::new(), 0.0)
    };

    Ok(SpectralResult {
        lambda1,
        lambda2,
        kstar,
        mode,
        grid: *grid,
        convergence: Convergence {
            shooting: (l_lo, l_hi),
            fv_points: (n_coarse, n_fine),
            fv_lambda1: (l1c, l1f),
            richardson,
            negative_count,
            kappa,
            mode_deviation,
        },
    })
}

fn fv_mode_deviation(
    state: &FlowState,
    a: &SymTridiag,
    lam: f64,
    y: &[f64],
    w: &[f64],
    kappa: f64,
) -> Result<f64> {
    let psi = a.inverse_iteration(lam - 1e-9 * lam.abs().max(1e-6), 3)?;
    let c = (y.len() - 1) / 2;
    let phi0 = psi[c] / w[c].sqrt();
    let ys = state.support_radius();
    // compare at every fine node inside the support on y >= 0, walking outward
    let k2 = kappa * kappa;
    let mut s = Dopri5::new(
        |yy: f64, u: &[f64; 2]| [u[1], (state.potential(yy) + k2) * u[0]],
        0.0,
        [1.0, 0.0],
        1e-3 * state.s2.sqrt(),
        shoot_tolerance(1e-12),
    );
    let mut dev: f64 = 0.0;
    for i in c + 1..y.len() {
        if y[i] > ys {
            break;
        }
        s.advance_to(y[i])?;
        let fv = psi[i] / w[i].sqrt() / phi0;
        dev = dev.max((fv - s.y()[0]).abs());
    }
    Ok(dev)
}

/// `√(−λ1)` when `λ1 < −tol_eig`.
pub fn critical_wavenumber(state: &FlowState, grid: &Grid) -> Result<Option<f64>> {
    Ok(lowest_eigenpair(state, grid)?.kstar)
}

/// Cheap `k*` (shooting only), thresholded like [`critical_wavenumber`].
pub fn critical_wavenumber_fast(state: &FlowState) -> Result<Option<f64>> {
    let k = ground_state_kappa(state, 1e-12)?;
    Ok(k.filter(|k| k * k > TOL_EIG))
}

/// Rayleigh quotient `(‖φ'‖² + ∫Vφ²)/‖φ‖²` of a grid function, with `φ'` by
/// fourth-order differences and trapezoid sums.
pub fn rayleigh_quotient(state: &FlowState, grid: &Grid, candidate: &[f64]) -> Result<f64> {
    if candidate.len() != grid.n_points {
        return Err(Error::InvalidParameter("candidate length does not match the grid"));
    }
    let norm = grid.norm(candidate);
    if !(norm >= 1e-12) {
        return Err(Error::ZeroNorm);
    }
    let n = grid.n_points;
    let h = grid.spacing();
    let f = candidate;
    let mut d = vec![0.0; n];
    for j in 0..n {
        d[j] = if j >= 2 && j + 2 < n {
            (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h)
        } else if j < 2 {
            (-25.0 * f[j] + 48.0 * f[j + 1] - 36.0 * f[j + 2] + 16.0 * f[j + 3] - 3.0 * f[j + 4])
                / (12.0 * h)
        } else {
            (25.0 * f[j] - 48.0 * f[j - 1] + 36.0 * f[j - 2] - 16.0 * f[j - 3] + 3.0 * f[j - 4])
                / (12.0 * h)
        };
    }
    let mut kinetic = 0.0;
    let mut potential = 0.0;
    for j in 0..n {
        let w = if j == 0 || j + 1 == n { 0.5 } else { 1.0 };
        kinetic += w * d[j] * d[j];
        potential += w * state.potential(grid.node(j)) * f[j] * f[j];
    }
    Ok((kinetic + potential) * h / (norm * norm))
}

/// Outcome of the ground-state shape checks.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileReport {
    /// `max |φ(y) − φ(−y)|`.
    pub evenness_deviation: f64,
    pub min_value: f64,
    /// Largest increase between consecutive nodes on `y >= 0`.
    pub max_increase: f64,
    /// Smallest `C` with `√k*/C ≤ φ ≤ C√k*` on `|y| ≤ 1/k*`.
    pub plateau_c: f64,
    /// Smallest `C` with `φ ≤ C√k*·exp(−k*|y|/C)` on `|y| ≥ 1/k*`.
    pub envelope_c: f64,
    pub even: bool,
    pub positive: bool,
    pub monotone: bool,
}

impl ProfileReport {
    pub fn fitted_c(&self) -> f64 {
        self.plateau_c.max(self.envelope_c)
    }

    pub fn passes(&self, c_max: f64) -> bool {
        self.even && self.positive && self.monotone && self.fitted_c() <= c_max
    }
}

/// Shape checks of the normalized ground state.
pub fn profile_check(result: &SpectralResult, _state: &FlowState) -> Result<ProfileReport> {
    let k = result.kstar.ok_or(Error::InvalidParameter("profile check needs a bound state"))?;
    let g = &result.grid;
    let m = &result.mode;
    let c = g.center();
    let n = g.n_points;
    let mut evenness: f64 = 0.0;
    for j in 0..=c {
        evenness = evenness.max((m[c + j] - m[c - j]).abs());
    }
    let min_value = m.iter().cloned().fold(f64::INFINITY, f64::min);
    let mut max_increase = f64::NEG_INFINITY;
    for j in c..n - 1 {
        max_increase = max_increase.max(m[j + 1] - m[j]);
    }
    let sk = k.sqrt();
    let mut plateau_c: f64 = 1.0;
    let mut far = Vec::new();
    for j in 0..n {
        let y = g.node(j).abs();
        if y <= 1.0 / k {
            plateau_c = plateau_c.max(m[j] / sk).max(sk / m[j]);
        } else {
            far.push((y, m[j]));
        }
    }
    let envelope_ok = |cc: f64| far.iter().all(|&(y, v)| v <= cc * sk * libm::exp(-k * y / cc));
    let envelope_c = if envelope_ok(1.0) {
        1.0
    } else {
        let (mut lo, mut hi) = (1.0, 2.0);
        while !envelope_ok(hi) && hi < 1e12 {
            lo = hi;
            hi *= 2.0;
        }
        for _ in 0..60 {
            let mid = 0.5 * (lo + hi);
            if envelope_ok(mid) {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        hi
    };
    Ok(ProfileReport {
        evenness_deviation: evenness,
        min_value,
        max_increase,
        plateau_c,
        envelope_c,
        even: evenness < 1e-8,
        positive: min_value > 0.0,
        monotone: max_increase <= 1e-14,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowParams;

    fn reference(m: f64, t: f64) -> FlowState {
        FlowParams::new(m, 0.15, 0.03, 0.8, 1e-3).unwrap().at(t).unwrap()
    }

    #[test]
    fn grid_layout() {
        let g = Grid::default();
        assert_eq!(g.node(g.center()), 0.0);
        assert_eq!(g.node(0), -20.0);
        assert_eq!(g.node(g.n_points - 1), 20.0);
        assert!(Grid::new(20.0, 4096).is_err());
    }

    #[test]
    fn couette_has_no_bound_state() {
        let s = reference(0.0, 0.0);
        let r = lowest_eigenpair(&s, &Grid::default()).unwrap();
        assert!(r.lambda1 >= -TOL_EIG);
        assert!(r.kstar.is_none());
        assert!(r.mode.is_empty());
        assert!(r.lambda2 >= r.lambda1);
    }

    #[test]
    fn eigenpair_is_consistent() {
        let s = reference(0.7, 0.0);
        let g = Grid::default();
        let r = lowest_eigenpair(&s, &g).unwrap();
        let k = r.kstar.unwrap();
        assert!((k * k + r.lambda1).abs() < 1e-15);
        assert!((g.norm(&r.mode) - 1.0).abs() < 1e-12);
        assert!(r.lambda2 >= -10.0 * TOL_EIG);
        assert_eq!(r.convergence.negative_count, 1);
        assert!(r.convergence.mode_deviation < 1e-4, "{:?}", r.convergence);
        let rep = profile_check(&r, &s).unwrap();
        assert!(rep.passes(20.0), "{rep:?}");
    }
}
