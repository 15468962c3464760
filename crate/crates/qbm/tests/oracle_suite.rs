use qbm::oracle::{run_suite, SuiteOptions, CHECKS};
use qbm::{BathModel, QbmError, Temperature};

fn model() -> BathModel {
    BathModel::new(1.0, 0.01, 100.0, Temperature::Zero).unwrap()
}

#[test]
fn full_suite_passes() {
    let reports = run_suite(&model(), &SuiteOptions::default()).unwrap();
    assert_eq!(reports.len(), CHECKS.len());
    for r in &reports {
        assert!(r.pass, "{} failed: abs {} rel {} meta {:?}", r.name, r.max_abs, r.max_rel, r.metadata);
    }
}

#[test]
fn injected_fault_fails_only_its_check() {
    let opts = SuiteOptions {
        faults: vec!["diffusion".into()],
        only: vec!["diffusion".into(), "trace_identity".into()],
        ..Default::default()
    };
    let reports = run_suite(&model(), &opts).unwrap();
    let by_name = |n: &str| reports.iter().find(|r| r.name == n).unwrap();
    assert!(!by_name("diffusion").pass);
    assert!(by_name("diffusion").metadata.contains_key("injected_fault"));
    assert!(by_name("trace_identity").pass);
}

#[test]
fn high_temperature_suite_passes() {
    let m = BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(0.01)).unwrap();
    let opts = SuiteOptions {
        only: ["dispersions", "diffusion", "alpha_quadrature", "trace_identity"].map(String::from).to_vec(),
        ..Default::default()
    };
    for r in run_suite(&m, &opts).unwrap() {
        assert!(r.pass, "{}: {:?}", r.name, r);
    }
}

#[test]
fn unknown_check_is_a_config_error() {
    let opts = SuiteOptions { only: vec!["nope".into()], ..Default::default() };
    assert!(matches!(run_suite(&model(), &opts), Err(QbmError::Config(_))));
}
