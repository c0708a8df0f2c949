//! Regular Rayleigh solutions for purely imaginary wave speeds `c = i·c_i`,
//! the Wronskian `W(c, k)` and the unstable eigenvalue curve `k ↦ c_i(k)`.
//!
//! The regular solution is factored as `φ = (b − c)·φ1·φ2`. Both factors are
//! integrated outward from the critical point `y_c = 0` in flux form
//! (`Q = b²φ1'`, `P = (b − c)²φ1²φ2'`). Outside the support of `b''` the flow
//! is a shifted Couette flow and every solution is a sum of `e^{±ky}`, so all
//! far-field integrals are closed exactly.
//!
//! `W` is split as `I + II` with `I = ∫(b − c)^{-2}` and
//! `II = ∫(b − c)^{-2}(φ1^{-2}φ2^{-2} − 1)`. `I` is rewritten by parts as
//! `−∫ V·b·(b + ic)/(b'²(b² + c²))`, which avoids the `1/c_i` cancellation of
//! the raw integrand.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::Float;

use crate::exec::{Executor, Sequential};
use crate::flow::FlowState;
use crate::ode::{Dopri5, Tolerance};
use crate::quad;
use crate::roots;
use crate::spectrum::Grid;
use crate::{Error, Result};

/// Distance from the critical point at which the Frobenius seed is applied.
pub const EPS_START: f64 = 1e-6;
/// Number of log-spaced `c_i` values in the root scan.
pub const SCAN_POINTS: usize = 200;
/// Smallest `c_i` in the root scan.
pub const SCAN_MIN: f64 = 1e-8;
pub const DEFAULT_C_MAX: f64 = 0.5;
/// Root tolerance relative to `|W(i·c_max, k)|`.
pub const ROOT_REL_TOL: f64 = 1e-10;

const PHI_RTOL: f64 = 1e-10;
const W_RTOL: f64 = 1e-12;
const TAIL_REL: f64 = 1e-8;

fn cx(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

// the seed is only accurate for ε ≪ c_i
fn eps_start(c: f64) -> f64 {
    if c > 0.0 {
        EPS_START.min(1e-3 * c)
    } else {
        EPS_START
    }
}

fn check_k(k: f64) -> Result<()> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter("wave number k must be positive"));
    }
    Ok(())
}

/// Real factor `φ1` sampled on grid nodes as `(y, φ1, φ1')`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phi1Solution {
    pub k: f64,
    pub c_r: f64,
    pub y_c: f64,
    pub samples: Vec<(f64, f64, f64)>,
}

/// Complex factor `φ2` sampled on the same nodes as its `φ1` as `(y, φ2, φ2')`.
#[derive(Debug, Clone, PartialEq)]
pub struct Phi2Solution {
    pub k: f64,
    pub c: Complex64,
    pub samples: Vec<(f64, Complex64, Complex64)>,
}

/// Integrate `(b²φ1')' = k²b²φ1` from `±ε` to every grid node.
pub fn solve_phi1(state: &FlowState, k: f64, grid: &Grid) -> Result<Phi1Solution> {
    check_k(k)?;
    grid.validate()?;
    let n = grid.n_points;
    let c = grid.center();
    let eps = EPS_START;
    let k2 = k * k;
    let mut samples = vec![(0.0, 1.0, 0.0); n];
    for dir in [1.0f64, -1.0] {
        let y0 = dir * eps;
        let b0 = state.b(y0);
        let rhs = |y: f64, u: &[f64; 2]| {
            let b = state.b(y);
            let b2 = b * b;
            [u[1] / b2, k2 * b2 * (1.0 + u[0])]
        };
        let mut s = Dopri5::new(
            rhs,
            y0,
            [k2 * eps * eps / 6.0, b0 * b0 * k2 * y0 / 3.0],
            eps,
            Tolerance::new(PHI_RTOL, 1e-13),
        )
        .with_atol([1e-16, 1e-300]);
        for m in 1..=c {
            let j = if dir > 0.0 { c + m } else { c - m };
            let y = grid.node(j);
            if y.abs() <= eps {
                samples[j] = (y, 1.0 + k2 * y * y / 6.0, k2 * y / 3.0);
                continue;
            }
            s.advance_to(y)?;
            let u = s.y();
            let b = state.b(y);
            samples[j] = (y, 1.0 + u[0], u[1] / (b * b));
        }
    }
    samples[c] = (0.0, 1.0, 0.0);
    Ok(Phi1Solution { k, c_r: 0.0, y_c: 0.0, samples })
}

// φ1 and φ2 advanced together; u = [φ1 − 1, Q, Re(φ2 − 1), Im(φ2 − 1), Re P, Im P]
fn phi12_rhs(state: &FlowState, k: f64, c: f64, y: f64, u: &[f64]) -> [f64; 6] {
    let d = state.derivs(y);
    let (b, b1) = (d.b, d.b1);
    let phi1 = 1.0 + u[0];
    let dphi1 = u[1] / (b * b);
    let bc = cx(b, -c);
    let phi2 = cx(1.0 + u[2], u[3]);
    let p = cx(u[4], u[5]);
    let dphi2 = p / (bc * bc * phi1 * phi1);
    // −2ic·b'·(b − c)/b·φ1φ1'φ2, with φ1'/b regular at the origin
    let dp = cx(0.0, -2.0 * c) * b1 * bc * (u[1] / (b * b * b)) * phi1 * phi2;
    [dphi1, k * k * b * b * phi1, dphi2.re, dphi2.im, dp.re, dp.im]
}

fn phi12_seed(state: &FlowState, k: f64, c: f64, y0: f64) -> [f64; 6] {
    let k2 = k * k;
    let b0 = state.b(y0);
    let b1 = state.slope(0.0);
    // leading Frobenius terms of the regular branch
    let p = cx(-2.0 * c * c * k2 * y0 / 3.0, -c * b1 * k2 * y0 * y0 / 3.0);
    // φ2 − 1 ≈ k²y²/3 holds for |y| ≪ c; at c = 0, φ2 ≡ 1
    let a2 = if c > 0.0 { k2 * y0 * y0 / 3.0 } else { 0.0 };
    [k2 * y0 * y0 / 6.0, b0 * b0 * k2 * y0 / 3.0, a2, 0.0, p.re, p.im]
}

const PHI12_ATOL: [f64; 6] = [1e-16, 1e-300, 1e-16, 1e-16, 1e-300, 1e-300];

/// Integrate the `φ2` equation on the nodes of `phi1` (which fixes `k` and the
/// grid). `φ1` is re-integrated jointly so the right-hand side never needs
/// interpolation.
pub fn solve_phi2(state: &FlowState, k: f64, c_i: f64, phi1: &Phi1Solution) -> Result<Phi2Solution> {
    check_k(k)?;
    if !(c_i >= 0.0 && c_i.is_finite()) {
        return Err(Error::InvalidParameter("c_i must be nonnegative"));
    }
    if phi1.k != k {
        return Err(Error::InvalidParameter("phi1 was computed for a different k"));
    }
    let one = cx(1.0, 0.0);
    let zero = cx(0.0, 0.0);
    let mut samples: Vec<(f64, Complex64, Complex64)> =
        phi1.samples.iter().map(|s| (s.0, one, zero)).collect();
    if c_i == 0.0 {
        return Ok(Phi2Solution { k, c: zero, samples });
    }
    let eps = eps_start(c_i);
    let c = match phi1.samples.iter().position(|s| s.0 == 0.0) {
        Some(c) => c,
        None => return Err(Error::InvalidParameter("phi1 samples must contain the critical point")),
    };
    let n = samples.len();
    for dir in [1.0f64, -1.0] {
        let y0 = dir * eps;
        let mut s = Dopri5::new(
            |y: f64, u: &[f64; 6]| phi12_rhs(state, k, c_i, y, u),
            y0,
            phi12_seed(state, k, c_i, y0),
            eps,
            Tolerance::new(PHI_RTOL, 1e-13),
        )
        .with_atol(PHI12_ATOL);
        let count = if dir > 0.0 { n - 1 - c } else { c };
        for m in 1..=count {
            let j = if dir > 0.0 { c + m } else { c - m };
            let y = samples[j].0;
            if y.abs() <= eps {
                samples[j] = (y, one + k * k * y * y / 3.0, cx(2.0 * k * k * y / 3.0, 0.0));
                continue;
            }
            s.advance_to(y)?;
            let u = s.y();
            let b = state.b(y);
            let bc = cx(b, -c_i);
            let phi1v = 1.0 + u[0];
            let p = cx(u[4], u[5]);
            samples[j] = (y, cx(1.0 + u[2], u[3]), p / (bc * bc * phi1v * phi1v));
        }
    }
    Ok(Phi2Solution { k, c: cx(0.0, c_i), samples })
}

/// `φ = (b − ic_i)·φ1·φ2` on the common nodes, as `(y, φ, φ')`.
///
/// At the critical point the factorization gives `φ(0) = −ic_i` and
/// `φ'(0) = b'(0)`; both are checked.
pub fn assemble_phi(
    state: &FlowState,
    phi1: &Phi1Solution,
    phi2: &Phi2Solution,
    c_i: f64,
) -> Result<Vec<(f64, Complex64, Complex64)>> {
    if phi1.samples.len() != phi2.samples.len() || phi1.k != phi2.k {
        return Err(Error::InvalidParameter("phi1 and phi2 do not match"));
    }
    let mut out = Vec::with_capacity(phi1.samples.len());
    for (&(y, f1, d1), &(y2, f2, d2)) in phi1.samples.iter().zip(&phi2.samples) {
        if y != y2 {
            return Err(Error::InvalidParameter("phi1 and phi2 use different nodes"));
        }
        let bc = cx(state.b(y), -c_i);
        let phi = bc * f1 * f2;
        let dphi = state.slope(y) * f1 * f2 + bc * (d1 * f2 + f1 * d2);
        if y == 0.0 {
            let dev = (phi - cx(0.0, -c_i)).norm().max((dphi - state.slope(0.0)).norm());
            if dev > 1e-8 {
                return Err(Error::ConsistencyFailure { what: "phi normalization at y_c", deviation: dev });
            }
        }
        out.push((y, phi, dphi));
    }
    Ok(out)
}

/// Wronskian at one `(c, k)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WronskianValue {
    pub k: f64,
    pub c: Complex64,
    pub w: Complex64,
    /// Combined quadrature and integrator error estimate.
    pub quad_error: f64,
    /// The two pieces `I` and `II` (`w = i_part + ii_part`).
    pub i_part: Complex64,
    pub ii_part: Complex64,
}

impl WronskianValue {
    /// Natural magnitude of `W` against which cancellation is judged.
    pub fn scale(&self) -> f64 {
        self.i_part.norm() + self.ii_part.norm()
    }
}

#[derive(Debug, Clone, Copy)]
struct Edge {
    phi: Complex64,
    dphi: Complex64,
    bc: Complex64,
}

// u = phi12 state followed by Re II, Im II
fn w_rhs(state: &FlowState, k: f64, c: f64, y: f64, u: &[f64; 8]) -> [f64; 8] {
    let f = phi12_rhs(state, k, c, y, u);
    let b = state.b(y);
    let bc = cx(b, -c);
    let a = cx(u[0], 0.0) + cx(u[2], u[3]) + u[0] * cx(u[2], u[3]);
    // 1/(φ1φ2)² − 1 without cancellation
    let g = -(a * 2.0 + a * a) / ((a + 1.0) * (a + 1.0) * bc * bc);
    [f[0], f[1], f[2], f[3], f[4], f[5], g.re, g.im]
}

fn edge(state: &FlowState, c: f64, y: f64, u: &[f64; 8]) -> Edge {
    let b = state.b(y);
    let bc = cx(b, -c);
    let phi1 = 1.0 + u[0];
    let dphi1 = u[1] / (b * b);
    let phi2 = cx(1.0 + u[2], u[3]);
    let dphi2 = cx(u[4], u[5]) / (bc * bc * phi1 * phi1);
    Edge {
        phi: bc * phi1 * phi2,
        dphi: state.slope(y) * phi1 * phi2 + bc * (dphi1 * phi2 + phi1 * dphi2),
        bc,
    }
}

fn w_half(state: &FlowState, k: f64, c: f64, y_end: f64, rtol: f64) -> Result<([f64; 8], f64)> {
    let eps = eps_start(c);
    let y0 = y_end.signum() * eps;
    let s6 = phi12_seed(state, k, c, y0);
    let seed = [s6[0], s6[1], s6[2], s6[3], s6[4], s6[5], 0.0, 0.0];
    let mut s = Dopri5::new(
        |y: f64, u: &[f64; 8]| w_rhs(state, k, c, y, u),
        y0,
        seed,
        eps,
        Tolerance::new(rtol, 1e-15),
    )
    .with_atol([1e-16, 1e-300, 1e-16, 1e-16, 1e-300, 1e-300, 1e-16, 1e-16]);
    s.advance_to(y_end)?;
    let e = s.error_sum();
    Ok((*s.y(), e[6].hypot(e[7])))
}

struct IiTerm {
    value: Complex64,
    error: f64,
    right: Edge,
    left: Edge,
}

fn ii_term(state: &FlowState, k: f64, c: f64, rtol: f64) -> Result<IiTerm> {
    let y_end = state.support_radius();
    let (ur, er) = w_half(state, k, c, y_end, rtol)?;
    let (ul, el) = w_half(state, k, c, -y_end, rtol)?;
    let right = edge(state, c, y_end, &ur);
    let left = edge(state, c, -y_end, &ul);
    // exact far-field pieces: ∫φ^{-2} from the e^{±ky} closure, ∫(b − c)^{-2} = ∓1/(b − c)
    let tail_r = 1.0 / (right.phi * (k * right.phi + right.dphi)) - 1.0 / right.bc;
    let tail_l = 1.0 / (left.phi * (k * left.phi - left.dphi)) + 1.0 / left.bc;
    // [−ε, ε]: the integrand tends to −k²/(3b'(0)²) when c = 0 and to 0 otherwise
    let core = if c == 0.0 {
        let b1 = state.slope(0.0);
        -2.0 * eps_start(c) * k * k / (3.0 * b1 * b1)
    } else {
        0.0
    };
    let value = cx(ur[6], ur[7]) - cx(ul[6], ul[7]) + tail_r + tail_l + core;
    Ok(IiTerm { value, error: er + el, right, left })
}

fn scale_breaks(state: &FlowState, c: f64) -> Vec<f64> {
    let y_s = state.support_radius();
    let b1 = state.slope(0.0);
    let mut v = Vec::new();
    if c > 0.0 {
        for m in [1.0, 10.0, 100.0] {
            v.push(m * c / b1);
        }
    }
    let (r1, r2) = (state.s1.sqrt(), state.s2.sqrt());
    v.extend_from_slice(&[r2, 4.0 * r2, r1, 3.0 * r1]);
    v.retain(|&x| x > 0.0 && x < y_s);
    v.sort_by(|a, b| a.partial_cmp(b).unwrap());
    v
}

// I(c) for c > 0 after integration by parts
fn i_term(state: &FlowState, c: f64) -> Result<(Complex64, f64)> {
    let y_s = state.support_radius();
    let f = |y: f64| {
        let v = state.potential(y);
        let b = state.b(y);
        let s = state.slope(y);
        let den = s * s * (b * b + c * c);
        [-v * b * b / den, -v * b * c / den]
    };
    let br = scale_breaks(state, c);
    let bl: Vec<f64> = br.iter().map(|x| -x).collect();
    let r = quad::integrate(f, 0.0, y_s, &br, 1e-13, 1e-16)?;
    let l = quad::integrate(f, -y_s, 0.0, &bl, 1e-13, 1e-16)?;
    Ok((cx(r.value[0] + l.value[0], r.value[1] + l.value[1]), r.error + l.error))
}

// ∫ over |y| > Y of |V|, bounded by the Gaussian tail of b''
fn truncation_check(state: &FlowState, scale: f64) -> Result<()> {
    let y_s = state.support_radius();
    let neglected = 2.0 * state.potential(y_s).abs() * state.s1 / y_s;
    if neglected > TAIL_REL * scale {
        return Err(Error::TailDominance { y: y_s, relative: neglected / scale });
    }
    Ok(())
}

fn wronskian_tol(state: &FlowState, k: f64, c_i: f64, rtol: f64) -> Result<(WronskianValue, IiTerm)> {
    check_k(k)?;
    if !(c_i > 0.0 && c_i.is_finite()) {
        return Err(Error::InvalidParameter("wronskian needs c_i > 0"));
    }
    let (i_part, i_err) = i_term(state, c_i)?;
    let ii = ii_term(state, k, c_i, rtol)?;
    let value = WronskianValue {
        k,
        c: cx(0.0, c_i),
        w: i_part + ii.value,
        quad_error: i_err + ii.error,
        i_part,
        ii_part: ii.value,
    };
    truncation_check(state, value.scale())?;
    Ok((value, ii))
}

/// `W(ic_i, k) = ∫φ^{-2}` for `c_i > 0`.
pub fn wronskian(state: &FlowState, k: f64, c_i: f64) -> Result<WronskianValue> {
    wronskian_tol(state, k, c_i, W_RTOL).map(|r| r.0)
}

/// Same as [`wronskian`] with an explicit integrator tolerance.
pub fn wronskian_with_rtol(state: &FlowState, k: f64, c_i: f64, rtol: f64) -> Result<WronskianValue> {
    wronskian_tol(state, k, c_i, rtol).map(|r| r.0)
}

/// Determinant form of the Wronskian evaluated at probe points.
#[derive(Debug, Clone, PartialEq)]
pub struct DetCheck {
    pub w: WronskianValue,
    pub values: Vec<(f64, Complex64)>,
    /// Largest `|det − W| / |W|`.
    pub max_deviation: f64,
    /// Largest pairwise `|det_i − det_j| / |W|`.
    pub spread: f64,
}

/// Build the decaying solutions `φ±` independently, by integrating the
/// Rayleigh equation inward from the support edges with the exact
/// exponential data there, and evaluate `det(φ−, φ+; φ−', φ+')`.
pub fn wronskian_det_check(state: &FlowState, k: f64, c_i: f64, probe_ys: &[f64]) -> Result<DetCheck> {
    let (w, ii) = wronskian_tol(state, k, c_i, W_RTOL)?;
    let y_s = state.support_radius();
    let a = k * ii.right.phi + ii.right.dphi;
    let bm = k * ii.left.phi - ii.left.dphi;
    let plus0 = [-1.0 / a, k / a];
    let minus0 = [1.0 / bm, k / bm];
    let rhs = |y: f64, u: &[f64; 4]| {
        let b = state.b(y);
        let q = k * k + state.potential(y) * b / cx(b, -c_i);
        let f = q * cx(u[0], u[1]);
        [u[2], u[3], f.re, f.im]
    };
    let run = |y0: f64, init: [Complex64; 2], ys: &[f64]| -> Result<Vec<[Complex64; 2]>> {
        let scale = init[0].norm().max(init[1].norm());
        let mut s = Dopri5::new(
            rhs,
            y0,
            [init[0].re, init[0].im, init[1].re, init[1].im],
            1e-3,
            Tolerance::new(W_RTOL, 1e-15 * scale),
        );
        let mut out = Vec::with_capacity(ys.len());
        for &y in ys {
            s.advance_to(y)?;
            let u = s.y();
            out.push([cx(u[0], u[1]), cx(u[2], u[3])]);
        }
        Ok(out)
    };
    let mut desc: Vec<usize> = (0..probe_ys.len()).collect();
    desc.sort_by(|&i, &j| probe_ys[j].partial_cmp(&probe_ys[i]).unwrap());
    let mut asc = desc.clone();
    asc.reverse();
    let ys_desc: Vec<f64> = desc.iter().map(|&i| probe_ys[i]).collect();
    let ys_asc: Vec<f64> = asc.iter().map(|&i| probe_ys[i]).collect();
    let plus = run(y_s, plus0, &ys_desc)?;
    let minus = run(-y_s, minus0, &ys_asc)?;
    let mut dets = vec![cx(0.0, 0.0); probe_ys.len()];
    for (m, &i) in desc.iter().enumerate() {
        dets[i] = -plus[m][0];
    }
    let mut p = vec![[cx(0.0, 0.0); 2]; probe_ys.len()];
    for (m, &i) in desc.iter().enumerate() {
        p[i] = plus[m];
    }
    for (m, &i) in asc.iter().enumerate() {
        let mi = minus[m];
        dets[i] = mi[0] * p[i][1] - p[i][0] * mi[1];
    }
    let wn = w.w.norm();
    let mut max_deviation: f64 = 0.0;
    let mut spread: f64 = 0.0;
    for (i, d) in dets.iter().enumerate() {
        max_deviation = max_deviation.max((d - w.w).norm() / wn);
        for e in &dets[i + 1..] {
            spread = spread.max((d - e).norm() / wn);
        }
    }
    let values = probe_ys.iter().cloned().zip(dets).collect();
    Ok(DetCheck { w, values, max_deviation, spread })
}

/// Solve `b(y) = v` by safeguarded Newton iteration (b is strictly increasing).
fn inverse_b(state: &FlowState, v: f64, guess: f64) -> f64 {
    let mut y = guess;
    for _ in 0..60 {
        let step = (state.b(y) - v) / state.slope(y);
        y -= step;
        if step.abs() <= 1e-16 * y.abs().max(1e-300) {
            break;
        }
    }
    y
}

/// `PV ∫ (b^{-1})''(v)/v dv`, i.e. `−H((b^{-1})'')(0)` with the unnormalized
/// Hilbert transform `Hf(x) = PV ∫ f(v)/(x − v) dv`. The odd numerator is
/// paired with its mirror, leaving the smooth even integrand
/// `(b^{-1})''(v)/v = −V/b'³`, which is summed by the trapezoid rule with
/// repeated halving.
pub fn hilbert_term(state: &FlowState) -> Result<(f64, f64)> {
    let vmax = state.b(state.support_radius());
    let g = |y: f64| -state.potential(y) / state.slope(y).powi(3);
    let mut n = 1024usize;
    let mut h = vmax / n as f64;
    let mut ys = vec![0.0; n + 1];
    let mut sum = 0.5 * (g(0.0) + g(state.support_radius()));
    for j in 1..n {
        ys[j] = inverse_b(state, j as f64 * h, ys[j - 1]);
        sum += g(ys[j]);
    }
    ys[n] = state.support_radius();
    let mut value = 2.0 * h * sum;
    while n < 1 << 22 {
        let mut odd = 0.0;
        let mut new_ys = vec![0.0; 2 * n + 1];
        for j in 0..n {
            new_ys[2 * j] = ys[j];
            let y = inverse_b(state, (2 * j + 1) as f64 * 0.5 * h, ys[j]);
            new_ys[2 * j + 1] = y;
            odd += g(y);
        }
        new_ys[2 * n] = ys[n];
        sum += odd;
        n *= 2;
        h *= 0.5;
        ys = new_ys;
        let next = 2.0 * h * sum;
        let change = (next - value).abs();
        value = next;
        if change <= 1e-12 * value.abs().max(1e-300) {
            return Ok((value, change));
        }
    }
    Err(Error::PvFailure { spread: value })
}

/// `W(0, k) = −H((b^{-1})'')(0) + ∫ b^{-2}(φ1^{-2} − 1)`; the `iπ(b^{-1})''(0)`
/// term vanishes because `b` is odd.
pub fn wronskian_boundary(state: &FlowState, k: f64) -> Result<WronskianValue> {
    check_k(k)?;
    let (h, h_err) = hilbert_term(state)?;
    let ii = ii_term(state, k, 0.0, W_RTOL)?;
    let value = WronskianValue {
        k,
        c: cx(0.0, 0.0),
        w: cx(h, 0.0) + ii.value,
        quad_error: h_err + ii.error,
        i_part: cx(h, 0.0),
        ii_part: ii.value,
    };
    truncation_check(state, value.scale())?;
    Ok(value)
}

/// A root of `Re W(ic_i, k)` in `c_i`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRoot {
    pub c_i: f64,
    /// `|W|` at the root.
    pub residual: f64,
    pub tol_root: f64,
    /// Largest `|Im W|/|W|` seen on the scan.
    pub max_imag_ratio: f64,
}

/// Outcome of a root scan, including the `Absent` case.
#[derive(Debug, Clone, PartialEq)]
pub struct Scan {
    pub c: Vec<f64>,
    pub w: Vec<WronskianValue>,
    pub sign_changes: usize,
    pub root: Option<EigenRoot>,
}

impl Scan {
    pub fn max_imag_ratio(&self) -> f64 {
        self.w.iter().fold(0.0, |m, w| m.max(w.w.im.abs() / w.w.norm()))
    }
}

/// Log-spaced scan values in `[SCAN_MIN, c_max]`.
pub fn scan_grid(c_max: f64) -> Vec<f64> {
    let (l0, l1) = (libm::log(SCAN_MIN), libm::log(c_max));
    (0..SCAN_POINTS)
        .map(|j| {
            if j + 1 == SCAN_POINTS {
                c_max
            } else {
                libm::exp(l0 + (l1 - l0) * j as f64 / (SCAN_POINTS - 1) as f64)
            }
        })
        .collect()
}

/// Scan `Re W` in `c_i` and refine a single sign change by Brent's method.
/// Unlike [`eigenvalue_for_k`], more than one sign change is reported in the
/// result instead of as an error.
pub fn scan_roots<E: Executor>(exec: &E, state: &FlowState, k: f64, c_max: f64) -> Result<Scan> {
    check_k(k)?;
    if !(c_max > SCAN_MIN) {
        return Err(Error::InvalidParameter("c_max must exceed the smallest scan value"));
    }
    let c = scan_grid(c_max);
    let w: Vec<WronskianValue> =
        exec.map(&c, |&ci| wronskian(state, k, ci)).into_iter().collect::<Result<_>>()?;
    let tol_root = ROOT_REL_TOL * w[w.len() - 1].w.norm();
    let mut brackets = Vec::new();
    for j in 0..c.len() - 1 {
        let (a, b) = (w[j].w.re, w[j + 1].w.re);
        if a == 0.0 || a.signum() != b.signum() && b != 0.0 {
            brackets.push(j);
        }
    }
    let mut scan = Scan { c, w, sign_changes: brackets.len(), root: None };
    if brackets.len() == 1 {
        let j = brackets[0];
        let r = roots::brent(
            |ci| wronskian(state, k, ci).map(|w| w.w.re),
            scan.c[j],
            scan.c[j + 1],
            1e-15 * scan.c[j],
            tol_root,
            200,
        )?;
        let at = wronskian(state, k, r.x)?;
        scan.root = Some(EigenRoot {
            c_i: r.x,
            residual: at.w.norm(),
            tol_root,
            max_imag_ratio: scan.max_imag_ratio(),
        });
    }
    Ok(scan)
}

/// Purely imaginary unstable eigenvalue at wave number `k`, if any.
pub fn eigenvalue_for_k(state: &FlowState, k: f64, c_max: f64) -> Result<Option<EigenRoot>> {
    eigenvalue_for_k_with(&Sequential, state, k, c_max)
}

pub fn eigenvalue_for_k_with<E: Executor>(
    exec: &E,
    state: &FlowState,
    k: f64,
    c_max: f64,
) -> Result<Option<EigenRoot>> {
    let scan = scan_roots(exec, state, k, c_max)?;
    if scan.sign_changes > 1 {
        return Err(Error::MultipleRoots { count: scan.sign_changes });
    }
    Ok(scan.root)
}

/// Sampled eigenvalue curve `k ↦ c_i(k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct EigenCurve {
    /// `(k, c_i, |W|)` where a root was found.
    pub points: Vec<(f64, f64, f64)>,
    /// `(k, dc_i/dk)` by central differences (one-sided at the ends).
    pub slope_samples: Vec<(f64, f64)>,
    /// Wave numbers of the grid where no root was found.
    pub absent: Vec<f64>,
    /// Quadratic extrapolation of the last three points to `c_i = 0`.
    pub zero_k: Option<f64>,
    pub tol_root: f64,
}

pub fn eigencurve(state: &FlowState, k_grid: &[f64]) -> Result<EigenCurve> {
    eigencurve_with(&Sequential, state, k_grid)
}

pub fn eigencurve_with<E: Executor>(exec: &E, state: &FlowState, k_grid: &[f64]) -> Result<EigenCurve> {
    let mut points = Vec::new();
    let mut absent = Vec::new();
    let mut tol_root: f64 = 0.0;
    for &k in k_grid {
        match eigenvalue_for_k_with(exec, state, k, DEFAULT_C_MAX)? {
            Some(r) => {
                tol_root = tol_root.max(r.tol_root);
                points.push((k, r.c_i, r.residual));
            }
            None => absent.push(k),
        }
    }
    let n = points.len();
    let mut slope_samples = Vec::with_capacity(n);
    for i in 0..n {
        let (lo, hi) = match (i, n) {
            (_, 1) => break,
            (0, _) => (0, 1),
            (i, n) if i == n - 1 => (n - 2, n - 1),
            (i, _) => (i - 1, i + 1),
        };
        let s = (points[hi].1 - points[lo].1) / (points[hi].0 - points[lo].0);
        slope_samples.push((points[i].0, s));
    }
    let zero_k = match n {
        0 | 1 => None,
        2 => {
            let (p, q) = (points[0], points[1]);
            Some(q.0 - q.1 * (q.0 - p.0) / (q.1 - p.1))
        }
        _ => {
            // inverse interpolation k(c) through the last three points, at c = 0
            let (p0, p1, p2) = (points[n - 3], points[n - 2], points[n - 1]);
            let l = |a: (f64, f64, f64), b: (f64, f64, f64), c: (f64, f64, f64)| {
                a.0 * (0.0 - b.1) * (0.0 - c.1) / ((a.1 - b.1) * (a.1 - c.1))
            };
            Some(l(p0, p1, p2) + l(p1, p0, p2) + l(p2, p0, p1))
        }
    };
    Ok(EigenCurve { points, slope_samples, absent, zero_k, tol_root })
}

/// Central differences of `Re W` with steps `1e−4` in `k` and `1e−4·γ0` in `c_i`.
pub fn wronskian_partials(state: &FlowState, k: f64, c_i: f64) -> Result<(f64, f64)> {
    let hk = 1e-4;
    let hc = 1e-4 * state.params.gamma0;
    if !(c_i > hc) || !(k > hk) {
        return Err(Error::InvalidParameter("partials need c_i > 1e-4·gamma0 and k > 1e-4"));
    }
    let re = |k: f64, c: f64| wronskian(state, k, c).map(|w| w.w.re);
    let dk = (re(k + hk, c_i)? - re(k - hk, c_i)?) / (2.0 * hk);
    let dc = (re(k, c_i + hc)? - re(k, c_i - hc)?) / (2.0 * hc);
    Ok((dk, dc))
}

/// Neutral mode built from the second solution `φ^B`.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiB {
    /// `φ^B` itself on the grid nodes.
    pub raw: Vec<f64>,
    /// `−φ^B/‖φ^B‖`, comparable with the eigensolver mode.
    pub mode: Vec<f64>,
    pub norm: f64,
}

/// `φ^B = φA/b'(0)·∫_{−∞}^y (b'(0) − b')/b² − φ1/b'(0) + φA·∫_{−∞}^y b^{-2}(φ1^{-2} − 1)`
/// with `φA = b·φ1` at `k = k*`. Both integrals start from exact tails at the
/// left support edge; beyond the support `φ^B` is continued by its decaying
/// exponential.
pub fn neutral_mode_phib(state: &FlowState, kstar: f64, grid: &Grid) -> Result<PhiB> {
    check_k(kstar)?;
    grid.validate()?;
    let k = kstar;
    let k2 = k * k;
    let y_s = state.support_radius();
    let d0 = state.derivs(0.0);
    let b10 = d0.b1;
    let eps = EPS_START;
    // limits at the origin of the two integrands
    let g0 = [-d0.b3 / (2.0 * b10 * b10), -k2 / (3.0 * b10 * b10)];
    let rhs = |y: f64, u: &[f64; 4]| {
        let b = state.b(y);
        let b2 = b * b;
        let a1 = u[0];
        [
            u[1] / b2,
            k2 * b2 * (1.0 + a1),
            state.slope_drop(y) / b2,
            -(2.0 * a1 + a1 * a1) / ((1.0 + a1) * (1.0 + a1) * b2),
        ]
    };
    let n = grid.n_points;
    let c = grid.center();
    // (φ1, K1, K2) at nodes with |y| ≤ Y_s, and the values at ±Y_s
    let mut at = vec![(1.0, 0.0, 0.0); n];
    let mut ends = [(0.0, 0.0, [0.0; 4]); 2];
    for (side, dir) in [1.0f64, -1.0].into_iter().enumerate() {
        let y0 = dir * eps;
        let b0 = state.b(y0);
        let mut s = Dopri5::new(
            rhs,
            y0,
            [k2 * eps * eps / 6.0, b0 * b0 * k2 * y0 / 3.0, 0.0, 0.0],
            eps,
            Tolerance::new(W_RTOL, 1e-15),
        )
        .with_atol([1e-16, 1e-300, 1e-16, 1e-16]);
        let finish = |u: &[f64; 4]| (1.0 + u[0], u[2] + dir * eps * g0[0], u[3] + dir * eps * g0[1]);
        for m in 1..=c {
            let j = if dir > 0.0 { c + m } else { c - m };
            let y = grid.node(j);
            if y.abs() > y_s {
                break;
            }
            if y.abs() <= eps {
                at[j] = (1.0 + k2 * y * y / 6.0, y * g0[0], y * g0[1]);
                continue;
            }
            s.advance_to(y)?;
            at[j] = finish(s.y());
        }
        s.advance_to(dir * y_s)?;
        let u = *s.y();
        let b = state.b(dir * y_s);
        ends[side] = (b, u[1] / (b * b), [1.0 + u[0], u[1], u[2] + dir * eps * g0[0], u[3] + dir * eps * g0[1]]);
    }
    // exact left tails at −Y_s
    let (bl, dphi1_l, ul) = ends[1];
    let phi_a = bl * ul[0];
    let dphi_a = state.slope(-y_s) * ul[0] + bl * dphi1_l;
    let tail1 = (b10 - state.slope(-y_s)) * (-1.0 / bl);
    let tail2 = 1.0 / (phi_a * (k * phi_a - dphi_a)) + 1.0 / bl;
    let base1 = tail1 - ul[2];
    let base2 = tail2 - ul[3];
    let phib = |y: f64, phi1: f64, k1: f64, k2v: f64| {
        let pa = state.b(y) * phi1;
        pa * ((base1 + k1) / b10 + base2 + k2v) - phi1 / b10
    };
    let (br, _, ur) = ends[0];
    let _ = br;
    let right_edge = phib(y_s, ur[0], ur[2], ur[3]);
    let left_edge = phib(-y_s, ul[0], ul[2], ul[3]);
    let mut raw = vec![0.0; n];
    for j in 0..n {
        let y = grid.node(j);
        raw[j] = if y > y_s {
            right_edge * libm::exp(-k * (y - y_s))
        } else if y < -y_s {
            left_edge * libm::exp(k * (y + y_s))
        } else if j == c {
            -1.0 / b10
        } else {
            let (phi1, k1, k2v) = at[j];
            phib(y, phi1, k1, k2v)
        };
    }
    let norm = grid.norm(&raw);
    if !(norm > 1e-300) {
        return Err(Error::ZeroNorm);
    }
    let mode = raw.iter().map(|v| -v / norm).collect();
    Ok(PhiB { raw, mode, norm })
}

/// One pointwise bound with its fitted constant.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundCheck {
    pub name: &'static str,
    /// Smallest constant for which the bound holds on every sample; `None`
    /// for sign conditions.
    pub constant: Option<f64>,
    pub holds: bool,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct BoundSuite {
    pub checks: Vec<BoundCheck>,
}

impl BoundSuite {
    pub fn max_constant(&self) -> f64 {
        self.checks.iter().filter_map(|c| c.constant).fold(0.0, f64::max)
    }

    pub fn passes(&self, c_max: f64) -> bool {
        self.checks.iter().all(|c| c.holds && c.constant.is_none_or(|v| v <= c_max))
    }

    fn push_sign(&mut self, name: &'static str, holds: bool) {
        self.checks.push(BoundCheck { name, constant: None, holds });
    }

    fn push_fit(&mut self, name: &'static str, constant: f64) {
        self.checks.push(BoundCheck { name, constant: Some(constant), holds: constant.is_finite() });
    }
}

// smallest C ≥ 1 with ok(C), for predicates monotone in C
fn fit_constant<F: Fn(f64) -> bool>(ok: F) -> f64 {
    if ok(1.0) {
        return 1.0;
    }
    let (mut lo, mut hi) = (1.0, 2.0);
    while !ok(hi) {
        lo = hi;
        hi *= 2.0;
        if hi > 1e12 {
            return f64::INFINITY;
        }
    }
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if ok(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

fn max_ratio<I: Iterator<Item = (f64, f64)>>(it: I) -> f64 {
    // (numerator, denominator) pairs; constant is max num/den, at least 1
    it.filter(|&(_, d)| d > 0.0).fold(1.0, |m, (n, d)| m.max(n / d))
}

// ratio φ1(y)/φ1(y1) ≤ C·e^{−k·d/C} for pairs moving toward y_c
fn fit_ratio(k: f64, pts: &[(f64, f64)]) -> f64 {
    fit_constant(|cc| {
        for (i, &(ya, fa)) in pts.iter().enumerate() {
            for &(yb, fb) in &pts[i + 1..] {
                // |ya| > |yb|: the sample nearer the critical point is b
                let (near, far, d) = if ya.abs() > yb.abs() {
                    (fb, fa, (ya - yb).abs())
                } else {
                    (fa, fb, (ya - yb).abs())
                };
                if near / far > cc * libm::exp(-k * d / cc) {
                    return false;
                }
            }
        }
        true
    })
}

fn subsample<T: Copy>(v: &[T], max: usize) -> Vec<T> {
    let stride = v.len().div_ceil(max).max(1);
    v.iter().step_by(stride).copied().collect()
}

/// Pointwise checks of the `φ1` estimates with fitted constants: `φ1 ≥ 1`,
/// `yφ1' ≥ 0`, the exponential envelope, the bounds on `φ1'`, `φ1''` and
/// `φ1 − 1`, and the decay ratios toward the critical point on either side.
pub fn phi1_bounds(state: &FlowState, phi1: &Phi1Solution) -> BoundSuite {
    let k = phi1.k;
    let k2 = k * k;
    let s = &phi1.samples;
    let mut suite = BoundSuite::default();
    suite.push_sign("phi1 >= 1", s.iter().all(|&(_, f, _)| f >= 1.0 - 1e-14));
    suite.push_sign("y*phi1' >= 0", s.iter().all(|&(y, _, d)| y * d >= -1e-14 * d.abs()));
    let lower = fit_constant(|cc| s.iter().all(|&(y, f, _)| libm::exp(k * y.abs() / cc) / cc <= f));
    let upper = fit_constant(|cc| s.iter().all(|&(y, f, _)| f <= cc * libm::exp(cc * k * y.abs())));
    suite.push_fit("phi1 exponential envelope", lower.max(upper));
    suite.push_fit(
        "phi1' <= C k min(k|y|,1) phi1",
        max_ratio(s.iter().map(|&(y, f, d)| (d.abs(), k * (k * y.abs()).min(1.0) * f))),
    );
    suite.push_fit(
        "phi1'' <= C k^2 phi1",
        max_ratio(s.iter().map(|&(y, f, d)| {
            let dd = if y == 0.0 { k2 / 3.0 } else { k2 * f - 2.0 * state.slope(y) * d / state.b(y) };
            (dd.abs(), k2 * f)
        })),
    );
    suite.push_sign("phi1 - 1 >= 0", s.iter().all(|&(_, f, _)| f - 1.0 >= -1e-14));
    suite.push_fit(
        "phi1 - 1 <= C min(1, k^2 y^2) phi1",
        max_ratio(s.iter().map(|&(y, f, _)| (f - 1.0, (k2 * y * y).min(1.0) * f))),
    );
    let left: Vec<(f64, f64)> = s.iter().filter(|p| p.0 <= 0.0).map(|p| (p.0, p.1)).collect();
    let right: Vec<(f64, f64)> = s.iter().filter(|p| p.0 >= 0.0).map(|p| (p.0, p.1)).collect();
    suite.push_fit("phi1 ratio decay, left of y_c", fit_ratio(k, &subsample(&left, 300)));
    suite.push_fit("phi1 ratio decay, right of y_c", fit_ratio(k, &subsample(&right, 300)));
    suite
}

/// Pointwise checks of the `φ2` estimates and of the envelope of `φ`.
pub fn phi2_bounds(state: &FlowState, phi1: &Phi1Solution, phi2: &Phi2Solution) -> BoundSuite {
    let k = phi2.k;
    let k2 = k * k;
    let c = phi2.c.im;
    let mut suite = BoundSuite::default();
    let pts: Vec<_> = phi1
        .samples
        .iter()
        .zip(&phi2.samples)
        .filter(|(a, _)| a.0 != 0.0)
        .map(|(&(y, f1, d1), &(_, f2, d2))| (y, f1, d1, f2, d2))
        .collect();
    suite.push_fit(
        "|phi2 - 1| <= C min(k c, k^2 c |y|, k^2 y^2)",
        max_ratio(pts.iter().map(|&(y, _, _, f2, _)| {
            let y = y.abs();
            ((f2 - 1.0).norm(), (k * c).min(k2 * c * y).min(k2 * y * y))
        })),
    );
    suite.push_fit(
        "|phi2'| <= C k^2 min(c, |y|)",
        max_ratio(pts.iter().map(|&(y, _, _, _, d2)| (d2.norm(), k2 * c.min(y.abs())))),
    );
    suite.push_fit(
        "|phi2''| <= C k^2",
        max_ratio(pts.iter().map(|&(y, f1, d1, f2, d2)| {
            let b = state.b(y);
            let b1 = state.slope(y);
            let bc = cx(b, -c);
            let den = bc * bc * f1 * f1;
            let dden = 2.0 * bc * b1 * f1 * f1 + 2.0 * bc * bc * f1 * d1;
            let dp = cx(0.0, -2.0 * c) * b1 * (bc / b) * f1 * d1 * f2;
            (((dp - d2 * dden) / den).norm(), k2)
        })),
    );
    let env: Vec<(f64, f64)> = pts
        .iter()
        .map(|&(y, f1, _, f2, _)| {
            let phi = cx(state.b(y), -c) * f1 * f2;
            (y, phi.norm() / cx(y, -c).norm())
        })
        .collect();
    let lower = fit_constant(|cc| env.iter().all(|&(y, r)| libm::exp(k * y.abs() / cc) / cc <= r));
    let upper = fit_constant(|cc| env.iter().all(|&(y, r)| r <= cc * libm::exp(cc * k * y.abs())));
    suite.push_fit("phi envelope |y - c| e^{k|y|/C} / C <= |phi| <= C |y - c| e^{Ck|y|}", lower.max(upper));
    suite
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowParams;

    fn couette() -> FlowState {
        FlowParams::new(0.0, 0.15, 0.03, 0.8, 1e-3).unwrap().at(0.0).unwrap()
    }

    fn reference_at_horizon() -> FlowState {
        let p = FlowParams::new(0.7017, 0.15, 0.03, 0.8, 1e-3).unwrap();
        p.at(p.horizon()).unwrap()
    }

    #[test]
    fn couette_phi1_is_sinhc() {
        let g = Grid::new(10.0, 2001).unwrap();
        for k in [0.5, 1.0, 2.0] {
            let s = solve_phi1(&couette(), k, &g).unwrap();
            for &(y, f, _) in &s.samples {
                let want = if y == 0.0 { 1.0 } else { libm::sinh(k * y) / (k * y) };
                assert!(((f - want) / want).abs() < 1e-8, "k={k} y={y}: {f} vs {want}");
            }
        }
    }

    #[test]
    fn phi2_trivial_without_growth_rate() {
        let g = Grid::new(5.0, 201).unwrap();
        let st = reference_at_horizon();
        let p1 = solve_phi1(&st, 1.0, &g).unwrap();
        let p2 = solve_phi2(&st, 1.0, 0.0, &p1).unwrap();
        assert!(p2.samples.iter().all(|s| s.1 == cx(1.0, 0.0) && s.2 == cx(0.0, 0.0)));
    }

    #[test]
    fn phi2_parity_and_reflection() {
        let g = Grid::new(5.0, 401).unwrap();
        let st = reference_at_horizon();
        let p1 = solve_phi1(&st, 1.0, &g).unwrap();
        let p2 = solve_phi2(&st, 1.0, 1e-3, &p1).unwrap();
        let phi = assemble_phi(&st, &p1, &p2, 1e-3).unwrap();
        let n = g.n_points;
        for j in 0..n {
            let (a, b) = (p2.samples[j].1, p2.samples[n - 1 - j].1);
            assert!((a.re - b.re).abs() < 1e-8 && (a.im + b.im).abs() < 1e-8);
            let (p, q) = (phi[j].1, phi[n - 1 - j].1);
            assert!((p + q.conj()).norm() < 1e-8 * p.norm().max(1.0));
        }
    }

    #[test]
    fn couette_assembled_phi_is_sinh() {
        let g = Grid::new(3.0, 301).unwrap();
        let st = couette();
        let p1 = solve_phi1(&st, 1.0, &g).unwrap();
        let p2 = solve_phi2(&st, 1.0, 0.0, &p1).unwrap();
        for (y, phi, _) in assemble_phi(&st, &p1, &p2, 0.0).unwrap() {
            assert!((phi.re - libm::sinh(y)).abs() < 1e-8 * libm::cosh(y) && phi.im == 0.0);
        }
    }

    #[test]
    fn couette_wronskian_matches_closed_form() {
        // with b = y, φ = (y − ic)·sinh(ky)/(ky)·φ2 and W has no root; the
        // determinant route is an independent evaluation
        let st = couette();
        let d = wronskian_det_check(&st, 1.0, 0.1, &[-1.0, 0.3, 1.0]).unwrap();
        assert!(d.max_deviation < 1e-6 && d.spread < 1e-6, "{d:?}");
        assert!(d.w.i_part.norm() < 1e-15);
        for c in [1e-6, 1e-3, 0.1, 0.5] {
            let w = wronskian(&st, 1.0, c).unwrap();
            assert!(w.w.re.abs() > 0.1, "{w:?}");
        }
    }

    #[test]
    fn wronskian_is_real_for_imaginary_c() {
        let st = reference_at_horizon();
        for c in [1e-6, 1e-3, 0.1] {
            let w = wronskian(&st, 1.0, c).unwrap();
            assert!(w.w.im.abs() <= 1e-6 * w.w.norm(), "{w:?}");
        }
    }

    #[test]
    fn boundary_limit_matches_small_growth_rate() {
        let st = reference_at_horizon();
        for k in [0.8, 1.3] {
            let w0 = wronskian_boundary(&st, k).unwrap().w.re;
            let (c1, c2) = (1e-6, 2e-6);
            let w1 = wronskian(&st, k, c1).unwrap().w.re;
            let w2 = wronskian(&st, k, c2).unwrap().w.re;
            let limit = 2.0 * w1 - w2;
            assert!((w0 - limit).abs() <= 1e-4 * w0.abs(), "k={k}: {w0} vs {limit}");
            assert!((w0 - w1).abs() <= 1e-4 * w0.abs());
        }
    }

    #[test]
    fn det_check_reference_state() {
        let st = reference_at_horizon();
        let d = wronskian_det_check(&st, 1.2, 0.01, &[-1.0, -0.1, 0.05, 1.0]).unwrap();
        assert!(d.max_deviation < 1e-6 && d.spread < 1e-6, "{d:?}");
    }

    #[test]
    fn hilbert_term_matches_direct_integral() {
        let st = reference_at_horizon();
        let (h, _) = hilbert_term(&st).unwrap();
        let y_s = st.support_radius();
        let (direct, _) = quad::integrate1(
            |y| -st.potential(y) / (st.slope(y) * st.slope(y)),
            -y_s,
            y_s,
            &[-st.s1.sqrt(), -st.s2.sqrt(), 0.0, st.s2.sqrt(), st.s1.sqrt()],
            1e-13,
            0.0,
        )
        .unwrap();
        assert!((h - direct).abs() < 1e-10 * direct.abs(), "{h} vs {direct}");
    }

    #[test]
    fn phib_value_at_origin() {
        let st = reference_at_horizon();
        let g = Grid::new(20.0, 4001).unwrap();
        let pb = neutral_mode_phib(&st, 1.0, &g).unwrap();
        assert_eq!(pb.raw[g.center()], -1.0 / st.slope(0.0));
        assert!((g.norm(&pb.mode) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn fit_constant_brackets() {
        assert_eq!(fit_constant(|c| c >= 0.5), 1.0);
        let c = fit_constant(|c| c >= 37.0);
        assert!((c - 37.0).abs() < 1e-9);
        assert!(fit_constant(|_| false).is_infinite());
    }
}
