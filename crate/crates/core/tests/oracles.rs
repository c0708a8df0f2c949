//! Independent closed forms and cross-solver agreement.

use viscoshear_core::exec::Sequential;
use viscoshear_core::rayleigh::*;
use viscoshear_core::spectrum::{critical_wavenumber_fast, lowest_eigenpair, Grid};
use viscoshear_core::FlowParams;

fn couette() -> viscoshear_core::FlowState {
    FlowParams::new(0.0, 0.15, 0.03, 0.8, 1e-3).unwrap().at(0.0).unwrap()
}

fn fixture() -> FlowParams {
    FlowParams::new(0.7017, 0.15, 0.03, 0.8, 1e-3).unwrap()
}

// With b = y the regular solution is φ = sinh(ky)/k − ic·cosh(ky), and
// pairing it with the companion cosh(ky)/k − ic·sinh(ky) gives
// ∫φ^{-2} = −2k/(1 + k²c²).
#[test]
fn couette_wronskian_closed_form() {
    let s = couette();
    for k in [0.3, 1.0, 2.0] {
        for c in [1e-6, 1e-3, 0.05, 0.5] {
            let w = wronskian(&s, k, c).unwrap();
            let want = -2.0 * k / (1.0 + k * k * c * c);
            assert!((w.w.re - want).abs() < 1e-9 * want.abs(), "k={k} c={c}: {} vs {want}", w.w.re);
            assert!(w.w.im.abs() < 1e-12);
        }
        let w0 = wronskian_boundary(&s, k).unwrap().w.re;
        assert!((w0 + 2.0 * k).abs() < 1e-9 * 2.0 * k);
    }
}

#[test]
fn couette_has_no_root() {
    let s = couette();
    for k in [0.5, 1.0, 2.0] {
        assert!(eigenvalue_for_k(&s, k, DEFAULT_C_MAX).unwrap().is_none());
    }
}

#[test]
fn couette_regular_solution() {
    let s = couette();
    let g = Grid::new(3.0, 61).unwrap();
    let (k, c) = (1.3, 0.02);
    let p1 = solve_phi1(&s, k, &g).unwrap();
    let p2 = solve_phi2(&s, k, c, &p1).unwrap();
    for (y, phi, dphi) in assemble_phi(&s, &p1, &p2, c).unwrap() {
        let want = (k * y).sinh() / k - num_complex::Complex64::new(0.0, c) * (k * y).cosh();
        let dwant = (k * y).cosh() - num_complex::Complex64::new(0.0, c * k) * (k * y).sinh();
        assert!((phi - want).norm() < 1e-8 * want.norm().max(c), "y={y}");
        assert!((dphi - dwant).norm() < 1e-8 * dwant.norm());
    }
}

#[test]
fn eigencurve_zero_matches_spectrum() {
    let p = fixture();
    let s = p.at(p.horizon()).unwrap();
    let kt = critical_wavenumber_fast(&s).unwrap().unwrap();
    let ks: Vec<f64> = (0..6).map(|j| 0.97 + (kt - 0.97) * j as f64 / 6.0).collect();
    let curve = eigencurve_with(&Sequential, &s, &ks).unwrap();
    assert!(curve.absent.is_empty());
    assert!(curve.points.iter().all(|p| p.2 <= curve.tol_root));
    assert!(curve.slope_samples.iter().all(|s| s.1 < 0.0));
    let z = curve.zero_k.unwrap();
    assert!((z - kt).abs() < 1e-3 * kt, "{z} vs {kt}");
    // above k* nothing
    assert!(eigenvalue_for_k(&s, kt * 1.01, DEFAULT_C_MAX).unwrap().is_none());
}

#[test]
fn determinant_form_matches_integral() {
    let p = fixture();
    let s = p.at(p.horizon()).unwrap();
    let d = wronskian_det_check(&s, 1.0, 1e-3, &[-1.0, 1.0]).unwrap();
    assert!(d.spread < 1e-6 && d.max_deviation < 1e-6, "{d:?}");
    let c = wronskian_det_check(&couette(), 1.0, 0.1, &[-2.0, 0.0, 0.7]).unwrap();
    assert!(c.max_deviation < 1e-6);
}

#[test]
fn boundary_limit_and_neutral_point() {
    let p = fixture();
    let s = p.at(0.5 * p.horizon()).unwrap();
    let ks = critical_wavenumber_fast(&s).unwrap().unwrap();
    let w = wronskian_boundary(&s, ks).unwrap();
    assert!(w.w.norm() <= 1e-4 * w.scale());
    let near = wronskian(&s, 1.1, 1e-6).unwrap().w.re;
    let at0 = wronskian_boundary(&s, 1.1).unwrap().w.re;
    assert!((near - at0).abs() <= 1e-4 * at0.abs());
}

#[test]
fn second_solution_reproduces_mode() {
    let p = fixture();
    let s = p.at(0.3 * p.horizon()).unwrap();
    let g = Grid::new(20.0, 8193).unwrap();
    let r = lowest_eigenpair(&s, &g).unwrap();
    let pb = neutral_mode_phib(&s, r.kstar.unwrap(), &g).unwrap();
    assert_eq!(pb.raw[g.center()], -1.0 / s.slope(0.0));
    let diff: Vec<f64> = pb.mode.iter().zip(&r.mode).map(|(a, b)| a + b).collect();
    let same: Vec<f64> = pb.mode.iter().zip(&r.mode).map(|(a, b)| a - b).collect();
    assert!(g.norm(&diff).min(g.norm(&same)) < 1e-3);
    // exponential decay beyond 1/k*
    let k = r.kstar.unwrap();
    for (y, v) in g.nodes().iter().zip(&pb.raw) {
        if y.abs() >= 1.0 / k {
            assert!(v.abs() <= 3.0 * (-k * y.abs() / 3.0).exp());
        }
    }
}
