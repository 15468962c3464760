use num_complex::Complex64;
use proptest::prelude::*;
use qbm::green::{characteristic_polynomial, localize_check};
use qbm::oracle::{eta_fourier, nu_fourier, ode};
use qbm::{BathModel, GreenSolution, QbmError, Temperature};

fn drude() -> BathModel {
    BathModel::new(1.0, 0.01, 100.0, Temperature::Zero).unwrap()
}

#[test]
fn rejects_bad_parameters() {
    for (w, g, c) in [(0.0, 0.01, 100.0), (1.0, -0.1, 100.0), (1.0, 0.01, 0.5), (f64::NAN, 0.01, 100.0)] {
        assert!(matches!(BathModel::new(w, g, c, Temperature::Zero), Err(QbmError::Config(_))));
    }
    assert!(BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(-1.0)).is_err());
    assert!(BathModel::new(1.0, 0.0, 100.0, Temperature::Zero).is_ok());
}

#[test]
fn default_roots() {
    let sol = GreenSolution::solve_cubic(&drude()).unwrap();
    let [_, z2, z3] = sol.roots();
    assert!((z2.re - 0.005).abs() < 1e-8 && (z2.im.abs() - 1.000_037_5).abs() < 1e-7, "{z2}");
    assert!((z3.re - 99.989_999_9).abs() < 1e-6 && z3.im.abs() < 1e-12);
    // Near the weak-coupling estimate 0.0050005 + 0.9999875i.
    assert!((z2.re - 0.005_000_5).abs() < 1e-4 && (z2.im.abs() - 0.999_987_5).abs() < 1e-4);
    assert!(sol.residuals().iter().all(|r| *r < 1e-10));
}

#[test]
fn kernels_match_fourier_quadrature() {
    let m = drude();
    for s in [0.002, 0.02, 0.2] {
        let (a, b) = (m.eta(s).unwrap(), eta_fourier(&m, s));
        assert!(((a - b) / b).abs() < 1e-7, "eta({s})");
        let (a, b) = (m.nu(s).unwrap(), nu_fourier(&m, s));
        assert!(((a - b) / b).abs() < 1e-6, "nu({s})");
    }
    assert!(matches!(m.nu(0.0), Err(QbmError::Divergent { .. })));
}

#[test]
fn finite_temperature_nu_approaches_zero_temperature() {
    let cold = BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(1e4)).unwrap();
    let m = drude();
    for s in [0.01, 0.1] {
        let (a, b) = (cold.nu(s).unwrap(), m.nu(s).unwrap());
        assert!(((a - b) / b).abs() < 1e-4, "{s}: {a} vs {b}");
    }
}

#[test]
fn green_matches_volterra_solve() {
    let m = drude();
    let sol = GreenSolution::solve_cubic(&m).unwrap();
    for (t, g) in ode::volterra_green(&m, 10.0, 1e-4, 0.5) {
        assert!((sol.g(t) - g).abs() < 1e-6, "t = {t}");
    }
}

#[test]
fn localization_on_coarse_output_grid() {
    // One output interval spanning many solver steps.
    let sol = GreenSolution::solve_cubic(&drude()).unwrap();
    for grid in [vec![0.1], vec![10.0], vec![0.0, 0.5, 3.0, 9.0]] {
        let f = localize_check(&sol, 1.0, -0.4, &grid).unwrap();
        for (t, v) in grid.iter().zip(f) {
            assert!((v - sol.nonlocal_solution(1.0, -0.4, *t)).abs() < 1e-7, "t = {t}");
        }
    }
    assert!(localize_check(&sol, 1.0, 0.0, &[1.0, 0.5]).is_err());
}

#[test]
fn local_coefficients_boundary_and_asymptote() {
    let sol = GreenSolution::solve_cubic(&drude()).unwrap();
    let lc = sol.local_coefficients(0.0);
    assert_eq!(lc.omega_sq, 2.0);
    assert_eq!(lc.gamma, 0.0);
    let late = sol.local_coefficients(10.0);
    assert!((late.omega_sq.sqrt() - 1.0).abs() < 1e-3 && (late.gamma - 0.01).abs() < 1e-5);
}

#[test]
fn overdamped_bath_is_unsupported() {
    let m = BathModel::new(1.0, 2.0, 10.0, Temperature::Zero).unwrap();
    assert!(matches!(GreenSolution::solve_cubic(&m), Err(QbmError::UnsupportedRegime(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn green_initial_conditions(w0 in 0.3f64..3.0, g0 in 0.0f64..0.5, ratio in 5.0f64..300.0) {
        let m = BathModel::new(w0, g0, w0 * ratio, Temperature::Zero).unwrap();
        let sol = match GreenSolution::solve_cubic(&m) {
            Err(QbmError::UnsupportedRegime(_)) => return Err(TestCaseError::reject("overdamped")),
            r => r.unwrap(),
        };
        let sum: Complex64 = sol.roots().iter().sum();
        prop_assert!((sum.re - m.wc).abs() < 1e-9 * m.wc && sum.im.abs() < 1e-9 * m.wc);
        for z in sol.roots() {
            prop_assert!(characteristic_polynomial(&m, -z).norm() < 1e-8 * m.wc.powi(3));
        }
        let [g, dg, d2g, d3g] = sol.derivs(1e-300);
        prop_assert!(g.abs() < 1e-12 && (dg - 1.0).abs() < 1e-9 && d2g.abs() < 1e-9 * m.wc);
        prop_assert!((d3g + w0 * w0 + g0 * m.wc).abs() < 1e-8 * m.wc * m.wc);
    }

    #[test]
    fn wronskian_obeys_friction(t in 0.0f64..20.0) {
        // W(t) = W(0) exp(-int gamma), checked locally: d ln|W|/dt = -gamma.
        let sol = GreenSolution::solve_cubic(&drude()).unwrap();
        let h = 1e-5;
        let (a, b) = (sol.wronskian(t + h).abs().ln(), sol.wronskian(t + 2.0 * h).abs().ln());
        let lc = sol.local_coefficients(t + 1.5 * h);
        prop_assert!(((b - a) / h + lc.gamma).abs() < 1e-5);
    }
}
