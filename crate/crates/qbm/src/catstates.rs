//! Closed-form Wigner functions for the two delocalized initial states:
//! the two-translation state and the projected cat of two Gaussian packets.
//!
//! A [`WignerDecomposition`] is a sum of Gaussian peaks and cosine-modulated
//! interference terms. Grids are only a rendering of it.

use crate::coefficients::{correlation_alphas, u_derivatives, BathStack};
use crate::equilibrium::EquilibriumState;
use crate::error::{QbmError, Result};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Covariance [[xx, xp], [xp, pp]] of a phase-space Gaussian.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Covariance {
    pub xx: f64,
    pub xp: f64,
    pub pp: f64,
}

impl Covariance {
    pub fn diagonal(xx: f64, pp: f64) -> Self {
        Covariance { xx, xp: 0.0, pp }
    }

    pub fn det(&self) -> f64 {
        self.xx * self.pp - self.xp * self.xp
    }

    /// Shear b in W ∝ exp(−(r−r̄)²/2σ_x² − (p − p̄ − b(r−r̄))²/2σ_p²).
    pub fn shear(&self) -> f64 {
        self.xp / self.xx
    }

    /// σ_x² of the sheared parameterization (the marginal position variance).
    pub fn sigma_x2(&self) -> f64 {
        self.xx
    }

    /// σ_p² of the sheared parameterization (conditional momentum variance).
    pub fn sigma_p2(&self) -> f64 {
        self.det() / self.xx
    }

    fn quad_inv(&self, d: [f64; 2]) -> f64 {
        (self.pp * d[0] * d[0] - 2.0 * self.xp * d[0] * d[1] + self.xx * d[1] * d[1]) / self.det()
    }

    fn inv_apply(&self, m: [f64; 2]) -> [f64; 2] {
        let det = self.det();
        [(self.pp * m[0] - self.xp * m[1]) / det, (self.xx * m[1] - self.xp * m[0]) / det]
    }

    fn quad(&self, k: [f64; 2]) -> f64 {
        self.xx * k[0] * k[0] + 2.0 * self.xp * k[0] * k[1] + self.pp * k[1] * k[1]
    }

    /// Normalized Gaussian density at offset d from the centre.
    pub fn density(&self, d: [f64; 2]) -> f64 {
        (-0.5 * self.quad_inv(d)).exp() / (2.0 * PI * self.det().sqrt())
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Peak {
    pub label: String,
    /// (r_i, p_i)
    pub center: [f64; 2],
    pub cov: Covariance,
    /// Phase-space integral of the peak.
    pub weight: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Interference {
    pub label: String,
    pub pair: (usize, usize),
    /// Midpoint of the two peak centres.
    pub center: [f64; 2],
    pub cov: Covariance,
    /// Phase gradient (k_r, k_p) in plain (r, p) coordinates.
    pub wave_vector: [f64; 2],
    /// κ_r, κ_p of the sheared form cos(κ_r(r−r̄) + κ_p(p − p̄ − b(r−r̄))).
    pub kappa: [f64; 2],
    /// Suppression exponent A_ij.
    pub exponent: f64,
    /// 2·weight·e^{−A}: prefactor of density × cos.
    pub amplitude: f64,
}

impl Interference {
    pub fn wavelength(&self) -> f64 {
        2.0 * PI / self.wave_vector[0].hypot(self.wave_vector[1])
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WignerDecomposition {
    pub t: f64,
    pub peaks: Vec<Peak>,
    pub interferences: Vec<Interference>,
}

impl WignerDecomposition {
    pub fn peaks_at(&self, r: f64, p: f64) -> f64 {
        self.peaks.iter().map(|pk| pk.weight * pk.cov.density([r - pk.center[0], p - pk.center[1]])).sum()
    }

    pub fn interference_at(&self, r: f64, p: f64) -> f64 {
        self.interferences
            .iter()
            .map(|it| {
                let d = [r - it.center[0], p - it.center[1]];
                let phase = it.wave_vector[0] * d[0] + it.wave_vector[1] * d[1];
                it.amplitude * it.cov.density(d) * phase.cos()
            })
            .sum()
    }

    pub fn eval(&self, r: f64, p: f64) -> f64 {
        self.peaks_at(r, p) + self.interference_at(r, p)
    }

    /// Closed-form phase-space integral.
    pub fn integral(&self) -> f64 {
        let peaks: f64 = self.peaks.iter().map(|p| p.weight).sum();
        let fringes: f64 =
            self.interferences.iter().map(|it| it.amplitude * (-0.5 * it.cov.quad(it.wave_vector)).exp()).sum();
        peaks + fringes
    }

    pub fn interference(&self, label: &str) -> Option<&Interference> {
        self.interferences.iter().find(|i| i.label == label)
    }
}

fn midpoint(a: [f64; 2], b: [f64; 2]) -> [f64; 2] {
    [0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]
}

/// Interference term from its imaginary mean m, offset c and peak weight.
fn interference_term(
    label: &str,
    pair: (usize, usize),
    peaks: &[Peak],
    cov: Covariance,
    m: [f64; 2],
    offset: f64,
    weight: f64,
) -> Interference {
    let k = cov.inv_apply(m);
    let exponent = offset - 0.5 * (m[0] * k[0] + m[1] * k[1]);
    let b = cov.shear();
    Interference {
        label: label.to_string(),
        pair,
        center: midpoint(peaks[pair.0].center, peaks[pair.1].center),
        cov,
        wave_vector: k,
        kappa: [k[0] + b * k[1], k[1]],
        exponent,
        amplitude: 2.0 * weight * (-exponent).exp(),
    }
}

/// Superposition of two opposite translations of the correlated thermal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoTranslationState {
    pub l0: f64,
}

impl TwoTranslationState {
    /// Normalization N² = 2(1 + e^{−2L²p²/√(1+q²p²)}/√(1+q²p²))⁻¹.
    pub fn n_sq(&self, eq: &EquilibriumState) -> f64 {
        let root = (1.0 + eq.q2 * eq.p2).sqrt();
        2.0 / (1.0 + (-2.0 * self.l0 * self.l0 * eq.p2 / root).exp() / root)
    }

    /// Weight of each peak for unit trace: 1/(2(1 + e^{−2L²p²})).
    pub fn peak_weight(&self, eq: &EquilibriumState) -> f64 {
        0.5 / (1.0 + (-2.0 * self.l0 * self.l0 * eq.p2).exp())
    }
}

/// A = 2L²p²(1 − Ṡ²/(p²q²) − (S̈/p²)²).
pub fn decoherence_exponent_s(eq: &EquilibriumState, s: &[f64; 4], l0: f64) -> f64 {
    let (q2, p2) = (eq.q2, eq.p2);
    2.0 * l0 * l0 * p2 * (1.0 - s[1] * s[1] / (p2 * q2) - (s[2] / p2).powi(2))
}

/// A = 2L²p² − (q²/2)κ_r² − (p²/2)κ_p² with κ_r = 2L d/dt(Ġ + Gα₆) and
/// p²κ_p = q²κ̇_r, differentiating α₆ = (S/q² − Ġ)/G explicitly. Needs G(t) ≠ 0.
pub fn decoherence_exponent_alpha(stack: &BathStack, t: f64, l0: f64) -> Result<f64> {
    let sc = stack.scalars(t)?;
    let (q2, p2) = (stack.eq.q2, stack.eq.p2);
    let [g, dg, d2g, d3g] = sc.g;
    let [s0, s1, s2, _] = sc.s;
    let [a6, ..] = correlation_alphas(stack, &sc)?;
    let (f, fd, fdd) = (s0 / q2 - dg, s1 / q2 - d2g, s2 / q2 - d3g);
    let a6d = (fd * g - f * dg) / (g * g);
    let a6dd = (fdd * g * g - 2.0 * fd * dg * g - f * d2g * g + 2.0 * f * dg * dg) / (g * g * g);
    let kr = 2.0 * l0 * (d2g + dg * a6 + g * a6d);
    let krd = 2.0 * l0 * (d3g + d2g * a6 + 2.0 * dg * a6d + g * a6dd);
    let kp = q2 * krd / p2;
    Ok(2.0 * l0 * l0 * p2 - 0.5 * q2 * kr * kr - 0.5 * p2 * kp * kp)
}

/// Two peaks at ±(LĠ, LG̈) with the equilibrium spreads and one interference
/// term at the origin.
pub fn evolve_two_translation(state: &TwoTranslationState, stack: &BathStack, t: f64) -> Result<WignerDecomposition> {
    if t < 0.0 {
        return Err(QbmError::domain(format!("t must be >= 0, got {t}")));
    }
    let sc = stack.scalars(t)?;
    let eq = &stack.eq;
    let l = state.l0;
    let cov = Covariance::diagonal(eq.q2, eq.p2);
    let w = state.peak_weight(eq);
    let r0 = [l * sc.g[1], l * sc.g[2]];
    let peaks = vec![
        Peak { label: "++".into(), center: r0, cov, weight: w },
        Peak { label: "--".into(), center: [-r0[0], -r0[1]], cov, weight: w },
    ];
    let kappa = [2.0 * l * sc.s[1] / eq.q2, 2.0 * l * sc.s[2] / eq.p2];
    let exponent = decoherence_exponent_s(eq, &sc.s, l);
    let int = Interference {
        label: "int".into(),
        pair: (0, 1),
        center: midpoint(peaks[0].center, peaks[1].center),
        cov,
        wave_vector: kappa,
        kappa,
        exponent,
        amplitude: 2.0 * w * (-exponent).exp(),
    };
    Ok(WignerDecomposition { t, peaks, interferences: vec![int] })
}

/// Superposition of Gaussian packets ⟨x|Ψ±⟩ ∝ exp(−(x∓L)²/2δ² ± iP₀x),
/// prepared on the correlated thermal state.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProjectedCatState {
    pub l0: f64,
    pub p0: f64,
    pub delta: f64,
}

impl ProjectedCatState {
    pub fn new(l0: f64, p0: f64, delta: f64) -> Result<Self> {
        if !(delta > 0.0) {
            return Err(QbmError::Config(format!("packet width delta must be positive, got {delta}")));
        }
        Ok(ProjectedCatState { l0, p0, delta })
    }

    /// Time-independent exponent offsets (c_ad, c_ab, c_ac).
    pub fn offsets(&self, eq: &EquilibriumState) -> [f64; 3] {
        let d2 = self.delta * self.delta;
        let base = self.l0 * self.l0 / d2 + self.p0 * self.p0 * d2;
        let kq = 1.0 / (d2 / (2.0 * eq.q2) + 1.0);
        let kp = 1.0 / (2.0 * eq.p2 * d2 + 1.0);
        [base, base * (kq - kp), base * (2.0 * eq.p2 * d2 * kp + kq)]
    }

    /// N̄, the weight of each of the four peaks.
    pub fn peak_weight(&self, eq: &EquilibriumState) -> f64 {
        let s: f64 = self.offsets(eq).iter().map(|c| (-c).exp()).sum();
        1.0 / (4.0 + 4.0 * s)
    }
}

impl Default for ProjectedCatState {
    fn default() -> Self {
        ProjectedCatState { l0: 5.0, p0: 0.0, delta: 1.0 }
    }
}

/// Four peaks a, b, c = −a, d = −b and six interference terms.
pub fn evolve_projected_cat(state: &ProjectedCatState, stack: &BathStack, t: f64) -> Result<WignerDecomposition> {
    if t < 0.0 {
        return Err(QbmError::domain(format!("t must be >= 0, got {t}")));
    }
    let sc = stack.scalars(t)?;
    let eq = &stack.eq;
    let (q2, p2) = (eq.q2, eq.p2);
    let (l, pm) = (state.l0, state.p0);
    let d2 = state.delta * state.delta;
    let [g, dg, d2g, _] = sc.g;
    let [s0, s1, s2, _] = sc.s;
    let ud = u_derivatives(eq, &sc);
    let dd6 = 1.0 / (2.0 * q2) + 1.0 / d2;
    let dd7 = p2 / 2.0 + 1.0 / (4.0 * d2);
    let (f6, f6d) = (s0 / q2 - dg, s1 / q2 - d2g);
    let (f7, f7d) = (-(s1 + g * p2), -(s2 + dg * p2));
    let cov = Covariance {
        xx: 0.5 * (d2 * dg * dg + g * g / d2 + f6 * f6 / dd6 - f7 * f7 / dd7 + 2.0 * ud.u),
        xp: 0.5 * (d2 * dg * d2g + g * dg / d2 + f6 * f6d / dd6 - f7 * f7d / dd7 + 2.0 * ud.u_t),
        pp: 0.5 * (d2 * d2g * d2g + dg * dg / d2 + f6d * f6d / dd6 - f7d * f7d / dd7 + 2.0 * ud.u_ttp),
    };
    let kq = 1.0 / (1.0 + d2 / (2.0 * q2));
    let rho = 1.0 / (p2 + 1.0 / (2.0 * d2));
    let r0 = [l * dg + pm * g, l * d2g + pm * dg];
    let r1 = [l * kq * f6 + pm * rho * f7, l * kq * f6d + pm * rho * f7d];
    let w = state.peak_weight(eq);
    let a = [r0[0] + r1[0], r0[1] + r1[1]];
    let b = [r0[0] - r1[0], r0[1] - r1[1]];
    let peaks: Vec<Peak> = [("a", a), ("b", b), ("c", [-a[0], -a[1]]), ("d", [-b[0], -b[1]])]
        .into_iter()
        .map(|(label, center)| Peak { label: label.into(), center, cov, weight: w })
        .collect();
    let m0 = [g * l / d2 - dg * pm * d2, dg * l / d2 - d2g * pm * d2];
    let m1 = [-pm * f6 / dd6 + l * f7 / (2.0 * d2 * dd7), -pm * f6d / dd6 + l * f7d / (2.0 * d2 * dd7)];
    let [c_ad, c_ab, c_ac] = state.offsets(eq);
    let plus = [m0[0] + m1[0], m0[1] + m1[1]];
    let minus = [m0[0] - m1[0], m0[1] - m1[1]];
    let spec: [(&str, (usize, usize), [f64; 2], f64); 6] = [
        ("ad", (0, 3), m0, c_ad),
        ("bc", (1, 2), m0, c_ad),
        ("ab", (0, 1), m1, c_ab),
        ("cd", (2, 3), m1, c_ab),
        ("ac", (0, 2), plus, c_ac),
        ("bd", (1, 3), minus, c_ac),
    ];
    let interferences =
        spec.iter().map(|&(label, pair, m, c)| interference_term(label, pair, &peaks, cov, m, c, w)).collect();
    Ok(WignerDecomposition { t, peaks, interferences })
}

/// (purity, von Neumann entropy) of a single-mode Gaussian with covariance `cov`.
pub fn purity_entropy(cov: &Covariance) -> Result<(f64, f64)> {
    let det = cov.det();
    if !(det >= 0.25 * (1.0 - 1e-9)) {
        return Err(QbmError::domain(format!("covariance violates the uncertainty bound: det = {det}")));
    }
    let nu = det.sqrt().max(0.5);
    let xlnx = |x: f64| if x > 0.0 { x * x.ln() } else { 0.0 };
    Ok((0.5 / nu, xlnx(nu + 0.5) - xlnx(nu - 0.5)))
}

/// First t in (0, t_max] where f crosses `level` from below, scanning with
/// `step` and refining by bisection.
pub fn first_crossing(f: impl Fn(f64) -> Result<f64>, level: f64, t_max: f64, step: f64) -> Result<Option<f64>> {
    let g = |t: f64| -> Result<f64> { Ok(f(t)? - level) };
    let mut lo = 0.0;
    let mut glo = g(lo)?;
    while lo < t_max {
        let hi = (lo + step).min(t_max);
        let ghi = g(hi)?;
        if glo < 0.0 && ghi >= 0.0 {
            let (mut x0, mut x1) = (lo, hi);
            while x1 - x0 > 1e-14 * x1 {
                let mid = 0.5 * (x0 + x1);
                if g(mid)? < 0.0 {
                    x0 = mid;
                } else {
                    x1 = mid;
                }
            }
            return Ok(Some(0.5 * (x0 + x1)));
        }
        lo = hi;
        glo = ghi;
    }
    Ok(None)
}

/// Decoherence time of the two-translation state: first t with A(t) = 1.
pub fn decoherence_time(stack: &BathStack, l0: f64, t_max: f64) -> Result<Option<f64>> {
    let a = |t: f64| Ok(decoherence_exponent_s(&stack.eq, &stack.scalars(t)?.s, l0));
    first_crossing(a, 1.0, t_max, 0.05 / stack.model.wc)
}

/// Same for the projected cat, using the principal-fringe exponent A_ad.
pub fn decoherence_time_projected(state: &ProjectedCatState, stack: &BathStack, t_max: f64) -> Result<Option<f64>> {
    let a = |t: f64| principal_exponent(state, stack, t);
    first_crossing(a, 1.0, t_max, 0.05 / stack.model.wc)
}

/// A_ad(t), the exponent of the principal fringes between the two packets.
pub fn principal_exponent(state: &ProjectedCatState, stack: &BathStack, t: f64) -> Result<f64> {
    let d = evolve_projected_cat(state, stack, t)?;
    Ok(d.interference("ad").expect("six interference terms").exponent)
}

/// Uniform rectangular phase-space grid.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GridSpec {
    pub r_min: f64,
    pub r_max: f64,
    pub nr: usize,
    pub p_min: f64,
    pub p_max: f64,
    pub np: usize,
}

impl GridSpec {
    pub fn r_values(&self) -> Vec<f64> {
        linspace(self.r_min, self.r_max, self.nr)
    }

    pub fn p_values(&self) -> Vec<f64> {
        linspace(self.p_min, self.p_max, self.np)
    }

    /// Grid covering every peak and interference centre by `sigmas` standard
    /// deviations, with n points per axis.
    pub fn covering(decomp: &WignerDecomposition, sigmas: f64, n: usize) -> Self {
        let mut r = (f64::INFINITY, f64::NEG_INFINITY);
        let mut p = (f64::INFINITY, f64::NEG_INFINITY);
        let centres = decomp
            .peaks
            .iter()
            .map(|pk| (pk.center, pk.cov))
            .chain(decomp.interferences.iter().map(|it| (it.center, it.cov)));
        for (c, cov) in centres {
            let (sr, sp) = (sigmas * cov.xx.sqrt(), sigmas * cov.pp.sqrt());
            r = (r.0.min(c[0] - sr), r.1.max(c[0] + sr));
            p = (p.0.min(c[1] - sp), p.1.max(c[1] + sp));
        }
        GridSpec { r_min: r.0, r_max: r.1, nr: n, p_min: p.0, p_max: p.1, np: n }
    }
}

fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WignerGrid {
    pub spec: GridSpec,
    /// W at (r_i, p_j), row-major with r as the outer index.
    pub values: Vec<f64>,
    pub warnings: Vec<String>,
}

impl WignerGrid {
    pub fn at(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.spec.np + j]
    }

    /// Trapezoid-rule integral over the grid.
    pub fn integral(&self) -> f64 {
        let (nr, np) = (self.spec.nr, self.spec.np);
        let hr = (self.spec.r_max - self.spec.r_min) / (nr - 1) as f64;
        let hp = (self.spec.p_max - self.spec.p_min) / (np - 1) as f64;
        let mut total = 0.0;
        for i in 0..nr {
            let wi = if i == 0 || i == nr - 1 { 0.5 } else { 1.0 };
            for j in 0..np {
                let wj = if j == 0 || j == np - 1 { 0.5 } else { 1.0 };
                total += wi * wj * self.at(i, j);
            }
        }
        total * hr * hp
    }

    pub fn min(&self) -> f64 {
        self.values.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

/// Evaluates the decomposition on a grid (rows in parallel).
pub fn wigner_grid(decomp: &WignerDecomposition, spec: &GridSpec) -> Result<WignerGrid> {
    if spec.nr < 2 || spec.np < 2 || !(spec.r_max > spec.r_min) || !(spec.p_max > spec.p_min) {
        return Err(QbmError::domain("grid needs at least 2x2 points and increasing bounds"));
    }
    let rs = spec.r_values();
    let ps = spec.p_values();
    let values: Vec<f64> = rs.par_iter().flat_map_iter(|&r| ps.iter().map(move |&p| decomp.eval(r, p))).collect();
    let mut warnings = Vec::new();
    for pk in &decomp.peaks {
        let (sr, sp) = (6.0 * pk.cov.xx.sqrt(), 6.0 * pk.cov.pp.sqrt());
        if pk.center[0] - sr < spec.r_min
            || pk.center[0] + sr > spec.r_max
            || pk.center[1] - sp < spec.p_min
            || pk.center[1] + sp > spec.p_max
        {
            warnings.push(format!("grid does not cover 6 sigma around peak {}", pk.label));
        }
    }
    Ok(WignerGrid { spec: spec.clone(), values, warnings })
}

/// max|W_int| / max|W_peaks| over the grid points.
pub fn fringe_visibility(decomp: &WignerDecomposition, spec: &GridSpec) -> f64 {
    let rs = spec.r_values();
    let ps = spec.p_values();
    let (mut fr, mut pk) = (0.0f64, 0.0f64);
    for &r in &rs {
        for &p in &ps {
            fr = fr.max(decomp.interference_at(r, p).abs());
            pk = pk.max(decomp.peaks_at(r, p).abs());
        }
    }
    fr / pk
}
