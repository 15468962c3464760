//! Acceptance criteria 1–10, one PASS/FAIL line each. Exits nonzero if any fails.

use qbm::catstates::{
    decoherence_exponent_alpha, decoherence_exponent_s, evolve_projected_cat, evolve_two_translation, first_crossing,
    principal_exponent, purity_entropy, wigner_grid, GridSpec,
};
use qbm::equilibrium::short_time_decoherence;
use qbm::oracle::{run_suite, SuiteOptions};
use qbm::{
    BathModel, BathStack, CoefficientSample, ProjectedCatState, Result, StationaryState, Temperature,
    TwoTranslationState,
};
use std::f64::consts::PI;
use std::process::ExitCode;
use std::time::Instant;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Result<Outcome> {
    Ok(Outcome { pass, detail })
}

fn default_stack() -> Result<BathStack> {
    BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?)
}

fn rel(a: f64, b: f64) -> f64 {
    ((a - b) / b).abs()
}

fn c1_dispersions() -> Result<Outcome> {
    let eq = default_stack()?.eq;
    let (eq_q, eq_p) = (rel(eq.q2, 0.498), rel(eq.p2, 0.512));
    outcome(
        eq_q < 0.01 && eq_p < 0.01,
        format!("q2 = {:.6} ({:.2e} from 0.498), p2 = {:.6} ({:.2e} from 0.512)", eq.q2, eq_q, eq.p2, eq_p),
    )
}

fn c2_boundary() -> Result<Outcome> {
    let stack = default_stack()?;
    let s0 = CoefficientSample::compute(&stack, 0.0)?;
    let s10 = CoefficientSample::compute(&stack, 10.0)?;
    let w_err = (s0.omega_sq - 2.0).abs();
    let late_w = rel(s10.omega_sq.sqrt(), 1.0);
    let late_g = rel(s10.gamma, 0.01);
    outcome(
        w_err < 1e-8 && s0.gamma == 0.0 && late_w < 1e-3 && late_g < 1e-3,
        format!(
            "w2(0) - 2 = {w_err:.1e}, gamma(0) = {:.1e}, |w(10)/w0 - 1| = {late_w:.1e}, |gamma(10)/g0 - 1| = {late_g:.1e}",
            s0.gamma.abs()
        ),
    )
}

fn c3_high_temperature() -> Result<Outcome> {
    let beta = 0.01;
    let stack = BathStack::new(BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(beta))?)?;
    let st = StationaryState::from_stack(&stack)?;
    let target = 0.01 / beta;
    let e = rel(st.d1, target);
    let ratio = st.d2.abs() / st.d1;
    outcome(
        e < 0.02 && ratio < 0.02,
        format!("t = {:.0}: D1 = {:.5} vs g0 kT = {target} ({e:.2e}), |D2|/D1 = {ratio:.2e}", st.t, st.d1),
    )
}

fn c4_decoherence_magnitude() -> Result<Outcome> {
    let stack = default_stack()?;
    let (model, eq) = (&stack.model, &stack.eq);
    let tc = 1.0 / model.wc;
    let a = |t: f64| -> Result<f64> { Ok(decoherence_exponent_s(eq, &stack.scalars(t)?.s, 1.0)) };
    let at_tc = a(tc)?;
    let mag_ok = rel(at_tc, 0.02) <= 0.3;
    let mut worst = 1.0f64;
    let mut onset = None;
    for i in 1..=1000 {
        let t = tc * i as f64 / 1000.0;
        let ratio = short_time_decoherence(model, eq, t) / a(t)?;
        let off = if ratio > 0.0 { ratio.max(1.0 / ratio) } else { f64::INFINITY };
        if off > 2.0 && onset.is_none() {
            onset = Some(t);
        }
        worst = worst.max(off);
    }
    let law_ok = worst <= 2.0;
    let crossing = first_crossing(a, 0.02, 10.0 * tc, 0.01 * tc)?;
    outcome(
        mag_ok && law_ok,
        format!(
            "A(1/wc)/L0^2 = {at_tc:.6} (target 0.02 +/- 30%, reaches 0.02 at wc t = {}); short-time law off by more than 2x from wc t = {} (worst factor {worst:.1e})",
            crossing.map_or("none".into(), |t| format!("{:.3}", t * model.wc)),
            onset.map_or("never".into(), |t| format!("{:.3}", t * model.wc))
        ),
    )
}

fn oracle_checks(names: &[&str]) -> Result<Outcome> {
    let opts = SuiteOptions { only: names.iter().map(|s| s.to_string()).collect(), ..Default::default() };
    let reports = run_suite(&BathModel::new(1.0, 0.01, 100.0, Temperature::Zero)?, &opts)?;
    let detail = reports
        .iter()
        .map(|r| format!("{}: abs {:.2e} rel {:.2e} (tol {:.0e})", r.name, r.max_abs, r.max_rel, r.tolerance))
        .collect::<Vec<_>>()
        .join("; ");
    outcome(reports.len() == names.len() && reports.iter().all(|r| r.pass), detail)
}

fn c7_two_routes() -> Result<Outcome> {
    let stack = default_stack()?;
    let mut worst = 0.0f64;
    for i in 1..=100 {
        let t = 0.1 * i as f64;
        let s = decoherence_exponent_s(&stack.eq, &stack.scalars(t)?.s, 1.0);
        let a = decoherence_exponent_alpha(&stack, t, 1.0)?;
        worst = worst.max(rel(a, s));
    }
    let t_end = 3.0 * 2.0 * PI / stack.model.omega0;
    let n = 6000;
    let values = (0..=n)
        .map(|i| Ok(decoherence_exponent_s(&stack.eq, &stack.scalars(t_end * i as f64 / n as f64)?.s, 1.0)))
        .collect::<Result<Vec<_>>>()?;
    let extrema = values.windows(3).filter(|w| (w[1] - w[0]) * (w[2] - w[1]) < 0.0).count();
    outcome(
        worst < 1e-6 && extrema >= 2,
        format!("max relative route difference {worst:.2e} on t = 0.1..10; {extrema} extrema of A on [0, 3 periods]"),
    )
}

fn c8_wigner_sanity() -> Result<Outcome> {
    let stack = default_stack()?;
    let times = [0.0, 0.05, 1.0, 4.0, 10.0];
    let mut worst_int = 0.0f64;
    let mut purities = Vec::new();
    let va = TwoTranslationState { l0: 5.0 };
    let vb = ProjectedCatState::default();
    for &t in &times {
        for d in [evolve_two_translation(&va, &stack, t)?, evolve_projected_cat(&vb, &stack, t)?] {
            let grid = wigner_grid(&d, &GridSpec::covering(&d, 9.0, 801))?;
            worst_int = worst_int.max((grid.integral() - 1.0).abs());
        }
        let d = evolve_two_translation(&va, &stack, t)?;
        purities.push(purity_entropy(&d.peaks[0].cov)?.0);
    }
    let spread = purities.iter().fold(0.0f64, |m, p| m.max((p - purities[0]).abs()));
    outcome(
        worst_int < 1e-4 && spread < 1e-6,
        format!(
            "max |grid integral - 1| = {worst_int:.2e} over {} times x 2 states; peak purity {:.6} varies by {spread:.1e}",
            times.len(),
            purities[0]
        ),
    )
}

fn c9_projected_cat() -> Result<Outcome> {
    let stack = default_stack()?;
    let cat = ProjectedCatState::default();
    let d = evolve_projected_cat(&cat, &stack, 1.0)?;
    let shape_ok = d.peaks.len() == 4 && d.interferences.len() == 6;
    let (mut sep, mut wavelength, mut ratio) = (0.0f64, f64::INFINITY, 0.0f64);
    for i in 0..=1000 {
        let t = 0.01 * i as f64;
        let d = evolve_projected_cat(&cat, &stack, t)?;
        let (a, b) = (&d.peaks[0], &d.peaks[1]);
        sep = sep.max((a.center[0] - b.center[0]).abs() / a.cov.xx.sqrt());
        let ab = d.interference("ab").expect("six interference terms");
        wavelength = wavelength.min(ab.wavelength() / a.cov.xx.sqrt());
        if t > 2.0 / stack.model.wc {
            let a_va = decoherence_exponent_s(&stack.eq, &stack.scalars(t)?.s, cat.l0);
            ratio = ratio.max(rel(principal_exponent(&cat, &stack, t)?, a_va));
        }
    }
    outcome(
        shape_ok && sep < 0.05 && wavelength > 20.0 && ratio < 0.05,
        format!(
            "{} peaks, {} interferences; max sub-peak separation {sep:.4} sigma_x; min internal wavelength {wavelength:.1} sigma_x; max |A_ad/A_VA - 1| = {ratio:.4}",
            d.peaks.len(),
            d.interferences.len()
        ),
    )
}

fn c10_stationarity() -> Result<Outcome> {
    let stack = default_stack()?;
    let st = StationaryState::from_stack(&stack)?;
    let d = evolve_projected_cat(&ProjectedCatState::default(), &stack, st.t)?;
    let cov = d.peaks[0].cov;
    let flow = rel(st.sigma_p2, cov.pp).max(rel(st.sigma_x2, cov.xx));
    let eq = rel(st.sigma_p2, stack.eq.p2).max(rel(st.sigma_x2, stack.eq.q2));
    outcome(
        flow < 0.01 && eq < 0.01,
        format!(
            "t = {:.0}: sigma_p2 = d1/g0 = {:.6}, sigma_x2 = {:.6}; vs evolved peak {flow:.1e}, vs equilibrium {eq:.1e}",
            st.t, st.sigma_p2, st.sigma_x2
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Result<Outcome>); 10] = [
        ("equilibrium dispersions", c1_dispersions),
        ("coefficient boundary values", c2_boundary),
        ("high-temperature limits", c3_high_temperature),
        ("decoherence magnitude", c4_decoherence_magnitude),
        ("oracle equivalence: G and localization", || oracle_checks(&["green_volterra", "localization"])),
        ("oracle equivalence: diffusion", || oracle_checks(&["diffusion"])),
        ("two A-routes and non-monotonic A", c7_two_routes),
        ("Wigner sanity", c8_wigner_sanity),
        ("projected-cat structure", c9_projected_cat),
        ("stationarity", c10_stationarity),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = run().unwrap_or_else(|e| Outcome { pass: false, detail: format!("error: {e}") });
        let tag = if o.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!o.pass);
        println!("{tag} {:>2} {name} [{:.1}s]: {}", i + 1, start.elapsed().as_secs_f64(), o.detail);
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    }
}
