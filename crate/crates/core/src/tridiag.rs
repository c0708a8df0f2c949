//! Symmetric tridiagonal eigenvalues by Sturm-sequence bisection and
//! eigenvectors by inverse iteration.

use num_traits::Float;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, Result};

/// Symmetric tridiagonal matrix with diagonal `d` and off-diagonal `e`
/// (`e.len() == d.len() - 1`).
#[derive(Debug, Clone, PartialEq)]
pub struct SymTridiag {
    pub d: Vec<f64>,
    pub e: Vec<f64>,
}

impl SymTridiag {
    pub fn new(d: Vec<f64>, e: Vec<f64>) -> Self {
        assert!(!d.is_empty() && e.len() + 1 == d.len());
        Self { d, e }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Number of eigenvalues strictly below `x`.
    pub fn sturm_count(&self, x: f64) -> usize {
        // a vanishing pivot is replaced by −tiny and counted as negative
        let tiny = f64::MIN_POSITIVE.sqrt();
        let mut count = 0;
        let mut q = self.d[0] - x;
        for i in 0..self.d.len() {
            if i > 0 {
                q = self.d[i] - x - self.e[i - 1] * self.e[i - 1] / q;
            }
            if q.abs() < tiny {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Gershgorin interval containing the whole spectrum.
    pub fn gershgorin(&self) -> (f64, f64) {
        let n = self.d.len();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let r = if i > 0 { self.e[i - 1].abs() } else { 0.0 }
                + if i + 1 < n { self.e[i].abs() } else { 0.0 };
            lo = lo.min(self.d[i] - r);
            hi = hi.max(self.d[i] + r);
        }
        (lo, hi)
    }

    /// The `j`-th smallest eigenvalue (0-based) to absolute accuracy `tol`.
    pub fn eigenvalue(&self, j: usize, tol: f64) -> f64 {
        let (mut lo, mut hi) = self.gershgorin();
        for _ in 0..200 {
            if hi - lo <= tol {
                break;
            }
            let mid = 0.5 * (lo + hi);
            if mid == lo || mid == hi {
                break;
            }
            if self.sturm_count(mid) > j {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvector for an isolated eigenvalue close to `shift`, normalized to
    /// unit Euclidean norm with a positive first nonzero component.
    pub fn inverse_iteration(&self, shift: f64, iterations: usize) -> Result<Vec<f64>> {
        let n = self.d.len();
        let mut x = vec![1.0; n];
        let f = LuPivot::factor(self, shift);
        for _ in 0..iterations.max(1) {
            let mut y = f.solve(&x);
            let norm = y.iter().map(|v| v * v).sum::<f64>().sqrt();
            if !norm.is_finite() || norm == 0.0 {
                return Err(Error::ZeroNorm);
            }
            for v in &mut y {
                *v /= norm;
            }
            x = y;
        }
        if let Some(first) = x.iter().find(|v| v.abs() > 1e-300) {
            if *first < 0.0 {
                for v in &mut x {
                    *v = -*v;
                }
            }
        }
        Ok(x)
    }
}

/// Gaussian elimination with partial pivoting for `A − σI`, in the layout of
/// LAPACK's `dgttrf` (fill-in on a second superdiagonal).
struct LuPivot {
    dl: Vec<f64>,
    d: Vec<f64>,
    du: Vec<f64>,
    du2: Vec<f64>,
    swap: Vec<bool>,
}

impl LuPivot {
    fn factor(a: &SymTridiag, shift: f64) -> Self {
        let n = a.d.len();
        let mut d: Vec<f64> = a.d.iter().map(|v| v - shift).collect();
        let mut dl = a.e.clone();
        let mut du = a.e.clone();
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] != 0.0 {
                    let fact = dl[i] / d[i];
                    dl[i] = fact;
                    d[i + 1] -= fact * du[i];
                }
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] = -fact * du[i + 1];
                }
                swap[i] = true;
            }
        }
        // exact singularity means the shift hit an eigenvalue; nudge the pivot
        let scale = a.gershgorin().1.abs().max(a.gershgorin().0.abs()).max(1.0);
        for v in &mut d {
            if *v == 0.0 {
                *v = f64::EPSILON * scale;
            }
        }
        Self { dl, d, du, du2, swap }
    }

    fn solve(&self, rhs: &[f64]) -> Vec<f64> {
        let n = rhs.len();
        let mut b = rhs.to_vec();
        for i in 0..n.saturating_sub(1) {
            if self.swap[i] {
                let temp = b[i];
                b[i] = b[i + 1];
                b[i + 1] = temp - self.dl[i] * b[i];
            } else {
                b[i + 1] -= self.dl[i] * b[i];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let mut s = b[i];
            if i + 1 < n {
                s -= self.du[i] * x[i + 1];
            }
            if i + 2 < n {
                s -= self.du2[i] * x[i + 2];
            }
            x[i] = s / self.d[i];
        }
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn laplacian(n: usize) -> SymTridiag {
        SymTridiag::new(vec![2.0; n], vec![-1.0; n - 1])
    }

    #[test]
    fn laplacian_eigenvalues() {
        let n = 50;
        let a = laplacian(n);
        for j in [0, 1, 7, 49] {
            let want = 2.0 - 2.0 * libm::cos((j + 1) as f64 * core::f64::consts::PI / (n + 1) as f64);
            let got = a.eigenvalue(j, 1e-14);
            assert!((got - want).abs() < 1e-13, "j={j}: {got} vs {want}");
        }
        assert_eq!(a.sturm_count(0.0), 0);
        assert_eq!(a.sturm_count(4.0), n);
    }

    #[test]
    fn inverse_iteration_recovers_sine_mode() {
        let n = 40;
        let a = laplacian(n);
        let lam = a.eigenvalue(2, 1e-15);
        let v = a.inverse_iteration(lam + 1e-10, 3).unwrap();
        let mut w: Vec<f64> =
            (1..=n).map(|i| libm::sin(3.0 * i as f64 * core::f64::consts::PI / (n + 1) as f64)).collect();
        let nw = w.iter().map(|x| x * x).sum::<f64>().sqrt();
        w.iter_mut().for_each(|x| *x /= nw);
        let dot: f64 = v.iter().zip(&w).map(|(a, b)| a * b).sum();
        assert!((dot.abs() - 1.0).abs() < 1e-10);
    }

    #[test]
    fn pivoted_solve_matches_dense() {
        // strongly non-diagonally-dominant shifted matrix forces swaps
        let a = SymTridiag::new(vec![0.1, -3.0, 0.2, 5.0, -0.3], vec![4.0, 0.5, 7.0, -2.0]);
        let f = LuPivot::factor(&a, 0.0);
        let x_true = [1.0, -2.0, 0.5, 3.0, -1.0];
        let mut b = [0.0; 5];
        for i in 0..5 {
            b[i] = a.d[i] * x_true[i];
            if i > 0 {
                b[i] += a.e[i - 1] * x_true[i - 1];
            }
            if i + 1 < 5 {
                b[i] += a.e[i] * x_true[i + 1];
            }
        }
        let x = f.solve(&b);
        for i in 0..5 {
            assert!((x[i] - x_true[i]).abs() < 1e-12, "{x:?}");
        }
    }
}
