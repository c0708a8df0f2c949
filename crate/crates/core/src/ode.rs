//! Adaptive Dormand–Prince 5(4) integrator for small fixed-size real systems.
//!
//! Complex-valued problems are written as real systems of twice the size.
//! The stepper keeps its step size between calls to [`Dopri5::advance_to`], so
//! a solution can be sampled node by node without losing the adapted step.

use num_traits::Float;
use crate::{Error, Result};

const C2: f64 = 1.0 / 5.0;
const C3: f64 = 3.0 / 10.0;
const C4: f64 = 4.0 / 5.0;
const C5: f64 = 8.0 / 9.0;

const A21: f64 = 1.0 / 5.0;
const A31: f64 = 3.0 / 40.0;
const A32: f64 = 9.0 / 40.0;
const A41: f64 = 44.0 / 45.0;
const A42: f64 = -56.0 / 15.0;
const A43: f64 = 32.0 / 9.0;
const A51: f64 = 19372.0 / 6561.0;
const A52: f64 = -25360.0 / 2187.0;
const A53: f64 = 64448.0 / 6561.0;
const A54: f64 = -212.0 / 729.0;
const A61: f64 = 9017.0 / 3168.0;
const A62: f64 = -355.0 / 33.0;
const A63: f64 = 46732.0 / 5247.0;
const A64: f64 = 49.0 / 176.0;
const A65: f64 = -5103.0 / 18656.0;
const A71: f64 = 35.0 / 384.0;
const A73: f64 = 500.0 / 1113.0;
const A74: f64 = 125.0 / 192.0;
const A75: f64 = -2187.0 / 6784.0;
const A76: f64 = 11.0 / 84.0;

// error coefficients: b (5th order) minus b* (4th order)
const E1: f64 = 71.0 / 57600.0;
const E3: f64 = -71.0 / 16695.0;
const E4: f64 = 71.0 / 1920.0;
const E5: f64 = -17253.0 / 339200.0;
const E6: f64 = 22.0 / 525.0;
const E7: f64 = -1.0 / 40.0;

/// Tolerances and step limits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub rtol: f64,
    pub atol: f64,
    /// Smallest step allowed relative to `max(|x|, 1)` before giving up.
    pub min_step_rel: f64,
    pub max_steps: usize,
}

impl Tolerance {
    pub const fn new(rtol: f64, atol: f64) -> Self {
        Self { rtol, atol, min_step_rel: 1e-15, max_steps: 2_000_000 }
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self::new(1e-10, 1e-13)
    }
}

/// Explicit adaptive stepper with FSAL reuse.
pub struct Dopri5<const N: usize, F>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    rhs: F,
    tol: Tolerance,
    x: f64,
    y: [f64; N],
    k1: [f64; N],
    h: f64,
    steps: usize,
    /// Sum over accepted steps of the |local error estimate| per component.
    err_sum: [f64; N],
    /// Components excluded from step-size control (pure quadratures).
    passive: [bool; N],
    atol: [f64; N],
}

impl<const N: usize, F> Dopri5<N, F>
where
    F: FnMut(f64, &[f64; N]) -> [f64; N],
{
    pub fn new(mut rhs: F, x0: f64, y0: [f64; N], h0: f64, tol: Tolerance) -> Self {
        let k1 = rhs(x0, &y0);
        Self {
            rhs,
            tol,
            x: x0,
            y: y0,
            k1,
            h: h0.abs(),
            steps: 0,
            err_sum: [0.0; N],
            passive: [false; N],
            atol: [tol.atol; N],
        }
    }

    /// Per-component absolute tolerances, for systems whose components live
    /// on very different scales.
    pub fn with_atol(mut self, atol: [f64; N]) -> Self {
        self.atol = atol;
        self
    }

    /// Mark components whose error should not drive step control.
    pub fn with_passive(mut self, passive: [bool; N]) -> Self {
        self.passive = passive;
        self
    }

    pub fn x(&self) -> f64 {
        self.x
    }

    pub fn y(&self) -> &[f64; N] {
        &self.y
    }

    /// Derivative at the current point.
    pub fn dy(&self) -> &[f64; N] {
        &self.k1
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn error_sum(&self) -> &[f64; N] {
        &self.err_sum
    }

    /// Integrate up to exactly `target` (either direction).
    pub fn advance_to(&mut self, target: f64) -> Result<()> {
        let dir = if target >= self.x { 1.0 } else { -1.0 };
        while (target - self.x) * dir > 0.0 {
            let remaining = (target - self.x).abs();
            let min_h = self.tol.min_step_rel * self.x.abs().max(target.abs()).max(1e-300);
            let mut last = false;
            let mut h = self.h;
            if h >= remaining {
                h = remaining;
                last = true;
            }
            if self.steps >= self.tol.max_steps {
                return Err(Error::StepFailure { y: self.x });
            }
            let (y_new, k7, err) = self.trial(h * dir);
            let norm = self.error_norm(&y_new, &err);
            if norm <= 1.0 {
                self.steps += 1;
                for i in 0..N {
                    self.err_sum[i] += err[i].abs();
                }
                self.x = if last { target } else { self.x + h * dir };
                self.y = y_new;
                self.k1 = k7;
                let fac = if norm == 0.0 { 5.0 } else { (0.9 * norm.powf(-0.2)).clamp(0.2, 5.0) };
                // keep the adapted step when the last one was clipped to the target
                self.h = if last { self.h.max(h * fac) } else { h * fac };
            } else {
                let fac = (0.9 * norm.powf(-0.2)).clamp(0.1, 1.0);
                self.h = h * fac;
                if self.h < min_h {
                    return Err(Error::StepFailure { y: self.x });
                }
            }
        }
        Ok(())
    }

    fn error_norm(&self, y_new: &[f64; N], err: &[f64; N]) -> f64 {
        let mut acc = 0.0;
        let mut n = 0usize;
        for i in 0..N {
            if self.passive[i] {
                continue;
            }
            let sc = self.atol[i] + self.tol.rtol * self.y[i].abs().max(y_new[i].abs());
            let r = err[i] / sc;
            acc += r * r;
            n += 1;
        }
        if n == 0 {
            return 0.0;
        }
        (acc / n as f64).sqrt()
    }

    fn trial(&mut self, h: f64) -> ([f64; N], [f64; N], [f64; N]) {
        let x = self.x;
        let y = &self.y;
        let k1 = &self.k1;
        let mut tmp = [0.0; N];

        for i in 0..N {
            tmp[i] = y[i] + h * A21 * k1[i];
        }
        let k2 = (self.rhs)(x + C2 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A31 * k1[i] + A32 * k2[i]);
        }
        let k3 = (self.rhs)(x + C3 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A41 * k1[i] + A42 * k2[i] + A43 * k3[i]);
        }
        let k4 = (self.rhs)(x + C4 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i] + h * (A51 * k1[i] + A52 * k2[i] + A53 * k3[i] + A54 * k4[i]);
        }
        let k5 = (self.rhs)(x + C5 * h, &tmp);
        for i in 0..N {
            tmp[i] = y[i]
                + h * (A61 * k1[i] + A62 * k2[i] + A63 * k3[i] + A64 * k4[i] + A65 * k5[i]);
        }
        let k6 = (self.rhs)(x + h, &tmp);
        let mut y_new = [0.0; N];
        for i in 0..N {
            y_new[i] = y[i]
                + h * (A71 * k1[i] + A73 * k3[i] + A74 * k4[i] + A75 * k5[i] + A76 * k6[i]);
        }
        let k7 = (self.rhs)(x + h, &y_new);
        let mut err = [0.0; N];
        for i in 0..N {
            err[i] = h
                * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
        }
        (y_new, k7, err)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn harmonic_oscillator_full_period() {
        let tol = Tolerance::new(1e-11, 1e-14);
        let mut s = Dopri5::new(|_x, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], 1e-3, tol);
        let two_pi = 2.0 * core::f64::consts::PI;
        s.advance_to(two_pi).unwrap();
        assert!(s.y()[0].abs() < 1e-9);
        assert!((s.y()[1] - 1.0).abs() < 1e-9);
        assert_eq!(s.x(), two_pi);
    }

    #[test]
    fn backwards_exponential() {
        let tol = Tolerance::new(1e-12, 1e-15);
        let mut s = Dopri5::new(|_x, y: &[f64; 1]| [y[0]], 0.0, [1.0], 1e-3, tol);
        for j in 1..=20 {
            s.advance_to(-0.1 * j as f64).unwrap();
        }
        let want = libm::exp(-2.0);
        assert!((s.y()[0] - want).abs() < 1e-11 * want.max(1.0));
    }

    #[test]
    fn passive_quadrature_component() {
        // y0' = cos x drives control; y1 = ∫ x² accumulates passively.
        let tol = Tolerance::new(1e-10, 1e-13);
        let mut s = Dopri5::new(|x: f64, _y: &[f64; 2]| [libm::cos(x), x * x], 0.0, [0.0, 0.0], 0.1, tol)
            .with_passive([false, true]);
        s.advance_to(1.0).unwrap();
        assert!((s.y()[1] - 1.0 / 3.0).abs() < 1e-12);
    }
}
