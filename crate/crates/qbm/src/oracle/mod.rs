//! Independent brute-force routes for every closed form in the crate.
//!
//! Each check recomputes a main-path quantity by a different numerical
//! method and reports the worst deviation. A fault can be injected into the
//! main-path side of any named check to confirm that the check can fail.

pub mod brute;
pub mod ode;
pub mod quadrature;
pub mod wigner16;

use crate::bath::{BathModel, Temperature};
use crate::catstates::{evolve_projected_cat, evolve_two_translation, ProjectedCatState, TwoTranslationState};
use crate::coefficients::{alpha_vector, diffusion, trace_identity_residual, u_derivatives, u_off_diagonal, BathStack};
use crate::equilibrium::expint;
use crate::error::Result;
use crate::green::characteristic_polynomial;
use num_complex::Complex64;
use quadrature::{adaptive, adaptive_breaks, fourier};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Metric {
    Absolute,
    Relative,
}

#[derive(Clone, Debug, Serialize)]
pub struct OracleReport {
    pub name: String,
    pub max_abs: f64,
    pub max_rel: f64,
    pub metric: Metric,
    pub tolerance: f64,
    pub metadata: BTreeMap<String, String>,
    pub pass: bool,
}

/// Running worst-case deviation for one check.
struct Tally {
    name: &'static str,
    metric: Metric,
    tolerance: f64,
    fault: f64,
    max_abs: f64,
    max_rel: f64,
    metadata: BTreeMap<String, String>,
}

impl Tally {
    fn new(name: &'static str, metric: Metric, tolerance: f64, opts: &SuiteOptions) -> Self {
        let fault = if opts.faults.iter().any(|f| f == name) { opts.fault_size } else { 0.0 };
        Tally {
            name,
            metric,
            tolerance: tolerance * opts.tolerance_scale,
            fault,
            max_abs: 0.0,
            max_rel: 0.0,
            metadata: BTreeMap::new(),
        }
    }

    /// Compares a main-path value against an oracle value; `scale` floors the
    /// relative denominator.
    fn compare(&mut self, main: f64, oracle: f64, scale: f64) {
        let main = main * (1.0 + self.fault) + self.fault * scale;
        let abs = (main - oracle).abs();
        let rel = abs / oracle.abs().max(scale);
        self.max_abs = self.max_abs.max(if abs.is_nan() { f64::INFINITY } else { abs });
        self.max_rel = self.max_rel.max(if rel.is_nan() { f64::INFINITY } else { rel });
    }

    fn note(mut self, key: &str, value: impl ToString) -> Self {
        self.metadata.insert(key.into(), value.to_string());
        self
    }

    fn finish(self) -> OracleReport {
        let worst = match self.metric {
            Metric::Absolute => self.max_abs,
            Metric::Relative => self.max_rel,
        };
        let mut metadata = self.metadata;
        if self.fault != 0.0 {
            metadata.insert("injected_fault".into(), self.fault.to_string());
        }
        OracleReport {
            name: self.name.into(),
            max_abs: self.max_abs,
            max_rel: self.max_rel,
            metric: self.metric,
            tolerance: self.tolerance,
            metadata,
            pass: worst <= self.tolerance,
        }
    }
}

#[derive(Clone, Debug)]
pub struct SuiteOptions {
    /// Names of checks whose main-path values get perturbed.
    pub faults: Vec<String>,
    /// Relative perturbation applied by a fault.
    pub fault_size: f64,
    /// Seed for the random Cauchy data of the localization check.
    pub seed: u64,
    /// Restrict to the checks in this list (all when empty).
    pub only: Vec<String>,
    /// Multiplies every check's tolerance.
    pub tolerance_scale: f64,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions { faults: Vec::new(), fault_size: 1e-3, seed: 20240601, only: Vec::new(), tolerance_scale: 1.0 }
    }
}

pub const CHECKS: [&str; 14] = [
    "expint",
    "eta_kernel",
    "nu_kernel",
    "green_volterra",
    "localization",
    "dispersions",
    "autocorrelation",
    "diffusion",
    "u_off_diagonal",
    "alpha_quadrature",
    "trace_identity",
    "projected_cat_algebra",
    "moment_flow",
    "two_translation_flow",
];

/// E₁(z) = ∫_0^1 e^{−z/x}/x dx for Re z > 0.
pub fn e1_quadrature(z: Complex64) -> Complex64 {
    let f = |part: usize| {
        move |x: f64| {
            if x <= 0.0 {
                return 0.0;
            }
            let v = (-z / x).exp() / x;
            if part == 0 {
                v.re
            } else {
                v.im
            }
        }
    };
    let breaks = [0.0, 0.01, 0.05, 0.2, 0.5, 1.0];
    Complex64::new(adaptive_breaks(&f(0), &breaks, 1e-16, 1e-13), adaptive_breaks(&f(1), &breaks, 1e-16, 1e-13))
}

/// Ei(x) = γ + ln x + ∫_0^x (e^t − 1)/t dt for x > 0.
pub fn ei_quadrature(x: f64) -> f64 {
    let g = |t: f64| if t == 0.0 { 1.0 } else { t.exp_m1() / t };
    expint::EULER_GAMMA + x.ln() + adaptive(&g, 0.0, x, 1e-16, 1e-14).0
}

/// w·coth(βw/2), continuous at w = 0.
fn w_coth(model: &BathModel, w: f64) -> f64 {
    match model.temperature {
        Temperature::Zero => w,
        Temperature::Beta(beta) => {
            let x = 0.5 * beta * w;
            if x.abs() < 1e-8 {
                2.0 / beta
            } else {
                w / x.tanh()
            }
        }
    }
}

/// Spectral route for S and its derivatives:
/// S(t) = −(1/π)∫_0^∞ Im Ĝ(iw) coth(βw/2) cos(wt) dw with the Laplace
/// transform Ĝ(s) = (s + w_c)/P(s) evaluated directly (no roots).
pub fn spectral_autocorrelation(stack: &BathStack, t: f64, k: usize) -> f64 {
    let model = stack.model;
    let im_g = |w: f64| {
        let s = Complex64::new(0.0, w);
        ((s + model.wc) / characteristic_polynomial(&model, s)).im
    };
    let f = |w: f64| {
        let coth = if w == 0.0 { 0.0 } else { w_coth(&model, w) / w };
        -im_g(w) * coth * w.powi(k as i32) / PI
    };
    let breaks = resonance_breaks(stack);
    let sign = [1.0, -1.0, -1.0, 1.0][k];
    sign * fourier(&f, t, k % 2 == 1, &breaks, 1e-12)
}

fn resonance_breaks(stack: &BathStack) -> Vec<f64> {
    let z2 = stack.green.roots()[1];
    let (w, g) = (z2.im, z2.re.max(1e-6));
    let mut b = vec![0.0];
    for k in [-100.0, -10.0, -1.0, 0.0, 1.0, 10.0, 100.0] {
        let x = w + k * g;
        if x > *b.last().unwrap() {
            b.push(x);
        }
    }
    let wc = stack.model.wc;
    for x in [0.1 * wc, wc, 10.0 * wc] {
        if x > *b.last().unwrap() {
            b.push(x);
        }
    }
    b
}

/// Fourier route for η(s) = (2/π)∫(I(w)/w)cos(ws)dw.
pub fn eta_fourier(model: &BathModel, s: f64) -> f64 {
    let (g0, wc) = (model.gamma0, model.wc);
    let f = |w: f64| 2.0 / PI * g0 * wc * wc / (w * w + wc * wc);
    fourier(&f, s, false, &[0.0, wc, 10.0 * wc], 1e-13)
}

/// Fourier route for ν(s) = (1/π)∫ I(w) coth(βw/2) cos(ws) dw.
pub fn nu_fourier(model: &BathModel, s: f64) -> f64 {
    let (g0, wc) = (model.gamma0, model.wc);
    let f = |w: f64| g0 * wc * wc / (w * w + wc * wc) * w_coth(model, w) / PI;
    fourier(&f, s, false, &[0.0, 0.1 * wc, wc, 10.0 * wc], 1e-13)
}

fn run_check(name: &str, stack: &BathStack, opts: &SuiteOptions) -> Result<OracleReport> {
    let model = stack.model;
    let green = &stack.green;
    let rel = Metric::Relative;
    let abs = Metric::Absolute;
    Ok(match name {
        "expint" => {
            let mut t = Tally::new("expint", rel, 1e-10, opts);
            for z in [
                Complex64::new(0.05, 0.0),
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 2.0),
                Complex64::new(3.0, -7.0),
                Complex64::new(0.005, 1.0),
                Complex64::new(25.0, 0.3),
            ] {
                let (main, orc) = (expint::e1(z)?, e1_quadrature(z));
                t.compare(main.re, orc.re, orc.norm());
                t.compare(main.im, orc.im, orc.norm());
            }
            for x in [0.02, 0.5, 1.0, 7.5, 30.0] {
                t.compare(expint::ei(x)?, ei_quadrature(x), 1e-300);
            }
            t.note("method", "E1 = int_0^1 exp(-z/x)/x dx; Ei by series-free quadrature").finish()
        }
        "eta_kernel" => {
            let mut t = Tally::new("eta_kernel", rel, 1e-7, opts);
            for s in [0.001, 0.01, 0.03, 0.1] {
                t.compare(model.eta(s)?, eta_fourier(&model, s), 1e-300);
            }
            t.note("method", "Fourier quadrature with Wynn epsilon").finish()
        }
        "nu_kernel" => {
            let mut t = Tally::new("nu_kernel", rel, 1e-6, opts);
            for s in [0.003, 0.01, 0.05, 0.3] {
                let orc = nu_fourier(&model, s);
                t.compare(model.nu(s)?, orc, 1e-3 * model.gamma0 * model.wc);
            }
            t.note("method", "Fourier quadrature with Wynn epsilon").finish()
        }
        "green_volterra" => {
            let mut t = Tally::new("green_volterra", abs, 1e-6, opts);
            for (tt, g) in ode::volterra_green(&model, 10.0, 1e-4, 1e-2) {
                t.compare(green.g(tt), g, 1.0);
            }
            t.note("method", "Crank-Nicolson h=1e-4 and h/2 with Richardson on [0,10]").finish()
        }
        "localization" => {
            let mut t = Tally::new("localization", abs, 1e-6, opts);
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            for _ in 0..10 {
                let (f0, df0) = (rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
                let err = ode::localization_error(green, f0, df0, 10.0, 1e-4);
                t.compare(err, 0.0, 1.0);
            }
            t.note("cases", 10).note("seed", opts.seed).note("method", "RK4 h=1e-4 on [0,10]").finish()
        }
        "dispersions" => {
            let mut t = Tally::new("dispersions", rel, 1e-8, opts);
            t.compare(stack.eq.q2, spectral_autocorrelation(stack, 0.0, 0), 1e-300);
            t.compare(stack.eq.p2, -spectral_autocorrelation(stack, 0.0, 2), 1e-300);
            t.note("method", "spectral integral of the response function").finish()
        }
        "autocorrelation" => {
            let mut t = Tally::new("autocorrelation", rel, 1e-7, opts);
            for tt in [0.01, 0.1, 1.0, 5.0] {
                let s = stack.acf.eval(tt)?;
                for (k, sk) in s.iter().enumerate() {
                    let orc = spectral_autocorrelation(stack, tt, k);
                    t.compare(*sk, orc, 1e-3);
                }
            }
            t.note("method", "spectral Fourier quadrature, Wynn epsilon").finish()
        }
        "diffusion" => {
            let mut t = Tally::new("diffusion", rel, 1e-4, opts);
            let bf = brute::BruteForce::new(green);
            for tt in [0.1, 0.5, 1.0, 5.0] {
                let b = bf.at(tt);
                let lc = green.local_coefficients(tt);
                let [u, ut, utp, uttp, utt] = b.u;
                let (d1o, d2o) = (uttp + lc.gamma * utp + lc.omega_sq * ut, utt + lc.gamma * ut + lc.omega_sq * u);
                let (d1, d2) = diffusion(&lc, &u_derivatives(&stack.eq, &stack.scalars(tt)?));
                t.compare(d1, d1o, 1e-300);
                t.compare(d2, d2o, 1e-300);
            }
            t.note("method", "spectral double time integrals in closed form, adaptive G7K15 in nu").finish()
        }
        "u_off_diagonal" => {
            let mut t = Tally::new("u_off_diagonal", rel, 1e-6, opts);
            let bf = brute::BruteForce::new(green);
            for (a, b) in [(1.0, 0.5), (3.0, 0.2)] {
                t.compare(u_off_diagonal(stack, a, b)?, bf.off_diagonal(a, b), 1e-3 * stack.eq.q2);
            }
            t.finish()
        }
        "alpha_quadrature" => {
            let mut t = Tally::new("alpha_quadrature", rel, 1e-6, opts);
            let bf = brute::BruteForce::new(green);
            for tt in [0.1, 0.5, 1.0, 5.0] {
                let b = bf.at(tt);
                let a = alpha_vector(stack, tt)?;
                t.compare(a[6], b.alpha6, 1e-300);
                t.compare(a[7], b.alpha7, 1e-300);
            }
            t.finish()
        }
        "trace_identity" => {
            let mut t = Tally::new("trace_identity", abs, 1e-10, opts);
            for tt in [0.05, 0.5, 1.0, 2.5, 7.0] {
                let a = alpha_vector(stack, tt)?;
                t.compare(trace_identity_residual(&a), 0.0, 1.0);
            }
            t.finish()
        }
        "projected_cat_algebra" => {
            let mut t = Tally::new("projected_cat_algebra", abs, 1e-9, opts);
            let cat = ProjectedCatState::new(3.0, 0.7, 0.8)?;
            for tt in [0.0, 0.03, 1.0, 3.0] {
                let d = evolve_projected_cat(&cat, stack, tt)?;
                let terms = wigner16::terms(stack, cat.l0, cat.p0, cat.delta, tt)?;
                for (r, p) in [(0.0, 0.0), (0.3, 0.2), (1.0, -0.5), (-2.0, 1.0), (3.0, 0.1), (2.9, -0.3)] {
                    t.compare(d.eval(r, p), wigner16::wigner(&terms, r, p), 1.0);
                }
                let peak = wigner16::find(&terms, wigner16::PEAK_SIGNS[0].1);
                for (label, signs) in wigner16::PAIR_SIGNS {
                    let term = wigner16::find(&terms, signs);
                    let it = d.interference(label).expect("six pairs");
                    t.compare(it.exponent, term.exponent(peak.log_weight.re), 1.0);
                    let k = term.wave_vector();
                    t.compare(it.wave_vector[0].abs(), k[0].abs(), 1.0);
                    t.compare(it.wave_vector[1].abs(), k[1].abs(), 1.0);
                }
                for (i, (_, signs)) in wigner16::PEAK_SIGNS.iter().enumerate() {
                    let term = wigner16::find(&terms, *signs);
                    t.compare(d.peaks[i].center[0], term.mean[0].re, 1.0);
                    t.compare(d.peaks[i].center[1], term.mean[1].re, 1.0);
                    t.compare(d.peaks[i].cov.xx, term.cov[0][0], 1.0);
                    t.compare(d.peaks[i].cov.xp, term.cov[0][1], 1.0);
                    t.compare(d.peaks[i].cov.pp, term.cov[1][1], 1.0);
                }
            }
            t.note("state", "L0=3, P0=0.7, delta=0.8")
                .note("method", "16-term Gaussian characteristic function")
                .finish()
        }
        "moment_flow" => {
            let mut t = Tally::new("moment_flow", abs, 1e-6, opts);
            let cat = ProjectedCatState::new(3.0, 0.0, 1.0)?;
            let (t0, t1) = (200.0, 210.0);
            let d0 = evolve_projected_cat(&cat, stack, t0)?;
            let d1 = evolve_projected_cat(&cat, stack, t1)?;
            for (p0, p1) in d0.peaks.iter().zip(&d1.peaks) {
                let start =
                    ode::Moments { r: p0.center[0], p: p0.center[1], xx: p0.cov.xx, xp: p0.cov.xp, pp: p0.cov.pp };
                let m = ode::moment_flow(stack, start, t0, t1, 1e-3)?;
                t.compare(m.xx, p1.cov.xx, 1.0);
                t.compare(m.xp, p1.cov.xp, 1.0);
                t.compare(m.pp, p1.cov.pp, 1.0);
                let scale = cat.l0;
                t.compare(m.r / scale, p1.center[0] / scale, 1.0);
                t.compare(m.p / scale, p1.center[1] / scale, 1.0);
            }
            t.note("window", format!("[{t0}, {t1}]")).note("method", "RK4 h=1e-3").finish()
        }
        "two_translation_flow" => {
            let mut t = Tally::new("two_translation_flow", abs, 1e-6, opts);
            let st = TwoTranslationState { l0: 1.0 };
            let t0 = 5.0 / model.wc;
            let c0 = evolve_two_translation(&st, stack, t0)?.peaks[0].center;
            let rhs = |tt: f64, y: &[f64; 2]| {
                let lc = green.local_coefficients(tt);
                [y[1], -lc.omega_sq * y[0] - lc.gamma * y[1]]
            };
            for t1 in [1.0, 4.0, 10.0] {
                let y = ode::integrate_rk4(c0, t0, t1, 1e-4, &rhs);
                let c1 = evolve_two_translation(&st, stack, t1)?.peaks[0].center;
                t.compare(y[0], c1[0], 1.0);
                t.compare(y[1], c1[1], 1.0);
            }
            t.note("method", "RK4 on the local equation from t0 = 5/wc").finish()
        }
        other => return Err(crate::error::QbmError::Config(format!("unknown oracle check '{other}'"))),
    })
}

/// Runs the selected checks. A check whose main-path computation errors is
/// reported as failed with the error in its metadata.
pub fn run_suite(model: &BathModel, opts: &SuiteOptions) -> Result<Vec<OracleReport>> {
    for f in opts.faults.iter().chain(&opts.only) {
        if !CHECKS.contains(&f.as_str()) {
            return Err(crate::error::QbmError::Config(format!(
                "unknown oracle check '{f}' (known: {})",
                CHECKS.join(", ")
            )));
        }
    }
    let stack = BathStack::new(*model)?;
    let names: Vec<&str> =
        CHECKS.iter().copied().filter(|n| opts.only.is_empty() || opts.only.iter().any(|o| o == n)).collect();
    use rayon::prelude::*;
    Ok(names
        .par_iter()
        .map(|n| {
            run_check(n, &stack, opts).unwrap_or_else(|e| OracleReport {
                name: n.to_string(),
                max_abs: f64::NAN,
                max_rel: f64::NAN,
                metric: Metric::Relative,
                tolerance: 0.0,
                metadata: BTreeMap::from([("error".to_string(), e.to_string())]),
                pass: false,
            })
        })
        .collect())
}
