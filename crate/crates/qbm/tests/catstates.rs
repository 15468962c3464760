use proptest::prelude::*;
use qbm::catstates::{
    decoherence_exponent_alpha, decoherence_exponent_s, decoherence_time, decoherence_time_projected,
    evolve_projected_cat, evolve_two_translation, purity_entropy, wigner_grid, Covariance, GridSpec,
};
use qbm::oracle::wigner16;
use qbm::{BathModel, BathStack, ProjectedCatState, QbmError, Temperature, TwoTranslationState};
use std::sync::OnceLock;

fn stack() -> &'static BathStack {
    static S: OnceLock<BathStack> = OnceLock::new();
    S.get_or_init(|| BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero).unwrap()).unwrap())
}

#[test]
fn equilibrium_peak_purity_and_entropy() {
    let eq = stack().eq;
    let (purity, entropy) = purity_entropy(&Covariance::diagonal(eq.q2, eq.p2)).unwrap();
    assert!((purity - 0.988_675).abs() < 1e-6);
    assert!((entropy - 0.035_311).abs() < 1e-6);
    assert!(purity_entropy(&Covariance::diagonal(0.4, 0.4)).is_err());
}

#[test]
fn two_translation_normalization() {
    let st = TwoTranslationState { l0: 5.0 };
    let n2 = st.n_sq(&stack().eq);
    assert!(n2 > 1.0 && n2 <= 2.0);
    let d = evolve_two_translation(&st, stack(), 0.0).unwrap();
    assert_eq!(d.peaks.len(), 2);
    assert!((d.peaks[0].center[0] - 5.0).abs() < 1e-12 && d.peaks[0].center[1].abs() < 1e-12);
    let k = d.interferences[0].kappa;
    assert!(k[0].abs() < 1e-12 && (k[1].abs() - 10.0).abs() < 1e-9);
    assert_eq!(d.interferences[0].exponent, 0.0);
}

#[test]
fn decoherence_magnitude_and_times() {
    let s = stack();
    let a = decoherence_exponent_s(&s.eq, &s.scalars(0.01).unwrap().s, 1.0);
    assert!((a - 0.006_697).abs() < 1e-6);
    let td = decoherence_time(s, 5.0, 10.0).unwrap().unwrap();
    assert!((td - 0.137_76).abs() < 1e-5);
    let tp = decoherence_time_projected(&ProjectedCatState::default(), s, 10.0).unwrap().unwrap();
    assert!((tp - 0.155_14).abs() < 1e-5);
    assert_eq!(decoherence_time(s, 0.1, 1.0).unwrap(), None);
}

#[test]
fn projected_cat_matches_sixteen_term_algebra() {
    let s = stack();
    let cat = ProjectedCatState::new(2.0, -0.4, 1.3).unwrap();
    for t in [0.0, 0.5, 2.0] {
        let d = evolve_projected_cat(&cat, s, t).unwrap();
        let terms = wigner16::terms(s, cat.l0, cat.p0, cat.delta, t).unwrap();
        for (r, p) in [(0.0, 0.0), (1.5, -0.7), (-2.2, 0.9)] {
            assert!((d.eval(r, p) - wigner16::wigner(&terms, r, p)).abs() < 1e-10);
        }
    }
    assert!(matches!(ProjectedCatState::new(1.0, 0.0, 0.0), Err(QbmError::Config(_))));
}

#[test]
fn grid_integral_and_coverage_warning() {
    let s = stack();
    let d = evolve_projected_cat(&ProjectedCatState::default(), s, 1.0).unwrap();
    let grid = wigner_grid(&d, &GridSpec::covering(&d, 8.0, 601)).unwrap();
    assert!((grid.integral() - 1.0).abs() < 1e-6 && grid.warnings.is_empty());
    let small = GridSpec { r_min: -1.0, r_max: 1.0, nr: 11, p_min: -1.0, p_max: 1.0, np: 11 };
    assert_eq!(wigner_grid(&d, &small).unwrap().warnings.len(), 4);
    let bad = GridSpec { nr: 1, ..small };
    assert!(wigner_grid(&d, &bad).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn projected_cat_is_normalized(l0 in 0.0f64..8.0, p0 in -2.0f64..2.0, delta in 0.3f64..3.0, t in 0.0f64..20.0) {
        let cat = ProjectedCatState::new(l0, p0, delta).unwrap();
        let d = evolve_projected_cat(&cat, stack(), t).unwrap();
        prop_assert_eq!((d.peaks.len(), d.interferences.len()), (4, 6));
        prop_assert!((d.integral() - 1.0).abs() < 1e-10);
        for pk in &d.peaks {
            prop_assert!(pk.cov.det() >= 0.25 * (1.0 - 1e-9));
        }
        for it in &d.interferences {
            prop_assert!(it.exponent >= -1e-9, "{} {}", it.label, it.exponent);
        }
    }

    #[test]
    fn two_translation_exponent_routes_agree(t in 0.05f64..30.0, l0 in 0.5f64..10.0) {
        let s = stack();
        prop_assume!(s.green.g(t).abs() > 1e-3);
        let a = decoherence_exponent_s(&s.eq, &s.scalars(t).unwrap().s, l0);
        let b = decoherence_exponent_alpha(s, t, l0).unwrap();
        prop_assert!(a >= 0.0);
        prop_assert!((a - b).abs() <= 1e-8 * a.max(1e-6));
    }

    #[test]
    fn two_translation_is_normalized(l0 in 0.0f64..8.0, t in 0.0f64..20.0) {
        let d = evolve_two_translation(&TwoTranslationState { l0 }, stack(), t).unwrap();
        prop_assert!((d.integral() - 1.0).abs() < 1e-10);
    }
}
