use num_complex::Complex64;
use proptest::prelude::*;
use qbm::equilibrium::expint::{e1, e1_real, ei, expint_n, scaled_pair};
use qbm::oracle::{e1_quadrature, ei_quadrature};
use qbm::QbmError;

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * b.abs().max(1e-300)
}

#[test]
fn tabulated_values() {
    // Abramowitz & Stegun Table 5.1.
    assert!(close(e1_real(1.0).unwrap(), 0.219_383_934_395_520_3, 1e-14));
    assert!(close(e1_real(0.5).unwrap(), 0.559_773_594_776_160_8, 1e-14));
    assert!(close(ei(1.0).unwrap(), 1.895_117_816_355_937, 1e-14));
    assert!(close(expint_n(2, 1.0).unwrap(), 0.148_495_506_775_922_05, 1e-13));
}

#[test]
fn complex_e1_matches_quadrature() {
    for z in
        [Complex64::new(0.005, 1.0), Complex64::new(2.0, -3.0), Complex64::new(0.1, -0.5), Complex64::new(40.0, 9.0)]
    {
        let (a, b) = (e1(z).unwrap(), e1_quadrature(z));
        assert!((a - b).norm() < 1e-10 * b.norm(), "{z}: {a} vs {b}");
    }
}

#[test]
fn branch_cut_is_an_error() {
    assert!(matches!(e1(Complex64::new(-2.0, 0.0)), Err(QbmError::BranchCut(_))));
}

#[test]
fn scaled_pair_has_no_cancellation_near_zero() {
    // With A = e^w E1(w), B = e^{-w} Ei(w): A - B ~ -2(g + ln w) and
    // A + B ~ 2w(1 - g - ln w) as w -> 0.
    let (w, g) = (1e-7, 0.577_215_664_901_532_9);
    let (diff, sum) = scaled_pair(Complex64::new(w, 0.0)).unwrap();
    assert!((diff.re + 2.0 * (g + w.ln())).abs() < 1e-6);
    let lead = 2.0 * w * (1.0 - g - w.ln());
    assert!(((sum.re - lead) / lead).abs() < 1e-5, "{} vs {lead}", sum.re);
}

proptest! {
    #[test]
    fn ei_matches_quadrature(x in 0.01f64..60.0) {
        let (a, b) = (ei(x).unwrap(), ei_quadrature(x));
        prop_assert!(close(a, b, 1e-9), "{} vs {}", a, b);
    }

    #[test]
    fn e1_conjugate_symmetry(re in -5.0f64..30.0, im in 0.01f64..30.0) {
        let z = Complex64::new(re, im);
        let (a, b) = (e1(z).unwrap(), e1(z.conj()).unwrap());
        prop_assert!((a - b.conj()).norm() <= 1e-12 * a.norm());
    }

    #[test]
    fn expint_recurrence(n in 1u32..6, x in 0.05f64..20.0) {
        // n E_{n+1}(x) = e^{-x} - x E_n(x)
        let lhs = n as f64 * expint_n(n + 1, x).unwrap();
        let rhs = (-x).exp() - x * expint_n(n, x).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-11 * (-x).exp().max(lhs.abs()));
    }
}
