use proptest::prelude::*;

use viscoshear_core::calibrate::{find_critical_m0, tune_m_for_kstar, TOL_CAL};
use viscoshear_core::rayleigh::{assemble_phi, solve_phi1, solve_phi2, wronskian, wronskian_with_rtol};
use viscoshear_core::spectrum::{lowest_eigenpair, lowest_eigenvalue, rayleigh_quotient, Grid, TOL_EIG};
use viscoshear_core::FlowParams;

fn params() -> impl Strategy<Value = (FlowParams, f64)> {
    (0.0f64..3.0, 0.05f64..0.3, 0.01f64..0.08, 0.3f64..0.95, 1e-4f64..1e-2, 0.0f64..2.0)
        .prop_filter_map("gamma1 < gamma2", |(m, g0, g1, g2, nu, tau)| {
            let p = FlowParams::new(m, g0, g1, g2, nu).ok()?;
            Some((p, tau * p.horizon()))
        })
}

fn fixture() -> FlowParams {
    FlowParams::new(0.7017, 0.15, 0.03, 0.8, 1e-3).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn profile_is_odd_monotone_with_single_inflection((p, t) in params(), u in 0.0f64..1.0) {
        let s = p.at(t).unwrap();
        let y = u * 3.0 * s.support_radius();
        let (d, m) = (s.derivs(y), s.derivs(-y));
        prop_assert!((d.b + m.b).abs() <= 1e-12 * (1.0 + y));
        prop_assert!((d.b1 - m.b1).abs() <= 1e-12 * (1.0 + y));
        prop_assert!(d.b1 > 0.0);
        if y > 0.0 && p.m > 0.0 {
            prop_assert!(d.b2 < 0.0 || d.b2.abs() < 1e-300);
        }
        let v = s.potential(y);
        prop_assert!((v - s.potential(-y)).abs() <= 1e-12 * (1.0 + v.abs()));
        if p.m > 0.0 {
            prop_assert!(v <= 0.0);
        }
    }

    #[test]
    fn couette_reduction((p, t) in params(), y in -50.0f64..50.0) {
        let s = p.with_m(0.0).at(t).unwrap();
        prop_assert_eq!(s.b(y), y);
        prop_assert_eq!(s.potential(y), 0.0);
    }

    #[test]
    fn lambda_decreases_in_m(m in 0.3f64..1.5, dm in 0.01f64..0.3) {
        let p = fixture();
        let a = lowest_eigenvalue(&p.with_m(m).at(0.0).unwrap()).unwrap();
        let b = lowest_eigenvalue(&p.with_m(m + dm).at(0.0).unwrap()).unwrap();
        if a < 0.0 {
            prop_assert!(b < a);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn rayleigh_quotient_bounded_below(seed in proptest::collection::vec(-1.0f64..1.0, 8), amp in 1e-4f64..1e-2) {
        let s = fixture().at(0.0).unwrap();
        let g = Grid::new(20.0, 4097).unwrap();
        let r = lowest_eigenpair(&s, &g).unwrap();
        // even smooth noise: a few even Gaussians of different widths
        let trial: Vec<f64> = g.nodes().iter().zip(&r.mode).map(|(&y, &m)| {
            let noise: f64 = seed.iter().enumerate()
                .map(|(j, a)| a * (-(y * y) / (0.05 * (j + 1) as f64).powi(2)).exp())
                .sum();
            m + amp * noise
        }).collect();
        let q = rayleigh_quotient(&s, &g, &trial).unwrap();
        prop_assert!(q >= r.lambda1 - 10.0 * TOL_EIG, "{q} < {}", r.lambda1);
    }

    #[test]
    fn regular_solution_reflection(k in 0.3f64..2.0, c in 1e-5f64..0.3, tau in 0.0f64..1.0) {
        let p = fixture();
        let s = p.at(tau * p.horizon()).unwrap();
        let g = Grid::new(4.0, 201).unwrap();
        let p1 = solve_phi1(&s, k, &g).unwrap();
        let p2 = solve_phi2(&s, k, c, &p1).unwrap();
        let phi = assemble_phi(&s, &p1, &p2, c).unwrap();
        let n = phi.len();
        for j in 0..n {
            let (a, b) = (phi[j].1, phi[n - 1 - j].1);
            prop_assert!((a + b.conj()).norm() <= 1e-8 * a.norm().max(1.0));
        }
    }

    #[test]
    fn quadrature_error_is_honest(k in 0.5f64..1.5, c in 1e-5f64..0.3) {
        let p = fixture();
        let s = p.at(p.horizon()).unwrap();
        let coarse = wronskian(&s, k, c).unwrap();
        let fine = wronskian_with_rtol(&s, k, c, 1e-13).unwrap();
        prop_assert!((coarse.w - fine.w).norm() <= coarse.quad_error,
            "{} > {}", (coarse.w - fine.w).norm(), coarse.quad_error);
    }

    #[test]
    fn calibration_certificate(target in 0.5f64..1.3) {
        let p = fixture().with_m(0.0);
        let r = tune_m_for_kstar(&p, 0.0, target).unwrap();
        prop_assert!((r.achieved - target).abs() <= TOL_CAL);
        let k = |m: f64| (-lowest_eigenvalue(&p.with_m(m).at(0.0).unwrap()).unwrap()).sqrt();
        if r.bracket.0 < r.bracket.1 {
            prop_assert!(k(r.bracket.0) <= target + TOL_CAL && k(r.bracket.1) >= target - TOL_CAL);
        }
        let again = tune_m_for_kstar(&p.with_m(r.m), 0.0, target).unwrap();
        prop_assert!(again.iterations <= 2);
    }
}

#[test]
fn threshold_bracket_straddles() {
    let p = fixture();
    let r = find_critical_m0(&p).unwrap();
    let l = |m: f64| lowest_eigenvalue(&p.with_m(m).at(0.0).unwrap()).unwrap();
    assert!(l(r.bracket.0) >= -TOL_EIG);
    assert!(l(r.bracket.1) < -TOL_EIG);
}

#[test]
fn eigenvalue_independent_of_truncation() {
    let s = fixture().at(0.0).unwrap();
    let a = lowest_eigenpair(&s, &Grid::new(20.0, 8193).unwrap()).unwrap();
    let b = lowest_eigenpair(&s, &Grid::new(40.0, 16385).unwrap()).unwrap();
    let c = lowest_eigenpair(&s, &Grid::new(20.0, 16385).unwrap()).unwrap();
    assert!((a.lambda1 - b.lambda1).abs() < TOL_EIG);
    assert!((a.lambda1 - c.lambda1).abs() < TOL_EIG);
}
