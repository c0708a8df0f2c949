//! Bracketed scalar root finders.

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Root {
    pub x: f64,
    pub fx: f64,
    pub iterations: usize,
    /// Final bracket, with `f` of opposite sign (or zero) at its ends.
    pub bracket: (f64, f64),
}

/// Brent's method (zeroin). `f(a)` and `f(b)` must differ in sign.
///
/// Stops when the bracket is narrower than `xtol` (plus a few ulps) or when
/// `|f(x)| <= ftol`.
pub fn brent<F>(mut f: F, a: f64, b: f64, xtol: f64, ftol: f64, max_iter: usize) -> Result<Root>
where
    F: FnMut(f64) -> Result<f64>,
{
    let (mut a, mut b) = (a, b);
    let mut fa = f(a)?;
    let mut fb = f(b)?;
    if fa == 0.0 {
        return Ok(Root { x: a, fx: 0.0, iterations: 0, bracket: (a, a) });
    }
    if fb == 0.0 {
        return Ok(Root { x: b, fx: 0.0, iterations: 0, bracket: (b, b) });
    }
    if fa.signum() == fb.signum() {
        return Err(Error::BracketFailure("function has the same sign at both ends"));
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut e = d;
    for it in 1..=max_iter {
        if fb.signum() == fc.signum() {
            c = a;
            fc = fa;
            d = b - a;
            e = d;
        }
        if fc.abs() < fb.abs() {
            a = b;
            b = c;
            c = a;
            fa = fb;
            fb = fc;
            fc = fa;
        }
        let tol = 2.0 * f64::EPSILON * b.abs() + 0.5 * xtol;
        let m = 0.5 * (c - b);
        if m.abs() <= tol || fb.abs() <= ftol {
            let br = if b < c { (b, c) } else { (c, b) };
            return Ok(Root { x: b, fx: fb, iterations: it, bracket: br });
        }
        if e.abs() >= tol && fa.abs() > fb.abs() {
            let s = fb / fa;
            let (mut p, mut q);
            if a == c {
                p = 2.0 * m * s;
                q = 1.0 - s;
            } else {
                let qa = fa / fc;
                let r = fb / fc;
                p = s * (2.0 * m * qa * (qa - r) - (b - a) * (r - 1.0));
                q = (qa - 1.0) * (r - 1.0) * (s - 1.0);
            }
            if p > 0.0 {
                q = -q;
            } else {
                p = -p;
            }
            if 2.0 * p < (3.0 * m * q - (tol * q).abs()).min((e * q).abs()) {
                e = d;
                d = p / q;
            } else {
                d = m;
                e = m;
            }
        } else {
            d = m;
            e = m;
        }
        a = b;
        fa = fb;
        b += if d.abs() > tol { d } else { tol.copysign(m) };
        fb = f(b)?;
    }
    Err(Error::NonConvergence { what: "brent iteration limit", spread: (c - b).abs() })
}

/// Plain bisection on a sign predicate. `inside(x)` is `true` on the side of
/// `hi`. Returns the final `(lo, hi)` after the predicate `done(lo, hi)`
/// holds or `max_iter` halvings.
pub fn bisect_predicate<P, D>(
    mut inside: P,
    mut lo: f64,
    mut hi: f64,
    mut done: D,
    max_iter: usize,
) -> Result<(f64, f64, usize)>
where
    P: FnMut(f64) -> Result<bool>,
    D: FnMut(f64, f64) -> bool,
{
    for it in 0..max_iter {
        if done(lo, hi) {
            return Ok((lo, hi, it));
        }
        let mid = 0.5 * (lo + hi);
        if inside(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    if done(lo, hi) {
        Ok((lo, hi, max_iter))
    } else {
        Err(Error::NonConvergence { what: "bisection iteration limit", spread: (hi - lo).abs() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn brent_finds_cubic_root() {
        let r = brent(|x| Ok(x * x * x - 2.0), 0.0, 2.0, 1e-15, 0.0, 100).unwrap();
        assert!((r.x - libm::cbrt(2.0)).abs() < 1e-14);
        assert!(r.iterations < 20);
    }

    #[test]
    fn brent_rejects_same_sign() {
        assert!(matches!(
            brent(|x| Ok(x * x + 1.0), -1.0, 1.0, 1e-12, 0.0, 50),
            Err(Error::BracketFailure(_))
        ));
    }

    #[test]
    fn bisection_threshold() {
        let (lo, hi, _) =
            bisect_predicate(|x| Ok(x > 0.3), 0.0, 1.0, |l, h| h - l < 1e-12, 100).unwrap();
        assert!(lo <= 0.3 && hi > 0.3 && hi - lo < 1e-12);
    }
}
