//! Equilibrium dispersions q_β², p_β² and the symmetric position
//! autocorrelation S(t) with its first three derivatives.

pub mod expint;

use crate::bath::{BathModel, MatsubaraTable, Temperature};
use crate::error::{QbmError, Result};
use crate::green::GreenSolution;
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Provenance {
    /// Zero-temperature frequency integral.
    Quadrature,
    /// Finite-temperature Matsubara sum.
    Matsubara,
    /// Weak-coupling approximation.
    WeakCoupling,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct EquilibriumState {
    pub q2: f64,
    pub p2: f64,
    pub provenance: Provenance,
}

impl EquilibriumState {
    pub fn uncertainty_product(&self) -> f64 {
        self.q2 * self.p2
    }
}

fn dispersion_sums(model: &BathModel, table: &MatsubaraTable) -> (f64, f64) {
    let w2 = model.omega0 * model.omega0;
    (table.q2(), table.sum_u(|v| w2 + model.chi(v)))
}

/// q_β² = (1/β)Σ u_n and p_β² = (1/β)Σ (ω₀² + χ_n) u_n.
///
/// The result is checked against a table of doubled resolution.
pub fn dispersions(model: &BathModel, table: &MatsubaraTable) -> Result<EquilibriumState> {
    let (q2, p2) = dispersion_sums(model, table);
    let finer = MatsubaraTable::with_resolution(model, 2 * table.resolution());
    let (q2f, p2f) = dispersion_sums(model, &finer);
    let err = ((q2 - q2f) / q2f).abs().max(((p2 - p2f) / p2f).abs());
    if !(err < 1e-8) {
        return Err(QbmError::accuracy("equilibrium dispersions", err));
    }
    let provenance = match model.temperature {
        Temperature::Zero => Provenance::Quadrature,
        Temperature::Beta(_) => Provenance::Matsubara,
    };
    Ok(EquilibriumState { q2, p2, provenance })
}

/// Weak-coupling formulas p² ≈ ω₀/2 + (γ₀/π)ln(w_c/ω₀) and
/// q² ≈ 1/(2ω₀) − (γ₀/(π w_c²))ln(w_c/ω₀), as printed. Zero temperature only.
pub fn weak_coupling(model: &BathModel) -> EquilibriumState {
    let log = (model.wc / model.omega0).ln();
    EquilibriumState {
        q2: 1.0 / (2.0 * model.omega0) - model.gamma0 / (PI * model.wc * model.wc) * log,
        p2: model.omega0 / 2.0 + model.gamma0 / PI * log,
        provenance: Provenance::WeakCoupling,
    }
}

/// Zero-temperature S(0) = −(1/π)Σ c_i ln z_i and −S̈(0) = (1/π)Σ c_i z_i² ln z_i.
pub fn zero_t_limits(sol: &GreenSolution) -> (f64, f64) {
    let (z, c) = (sol.roots(), sol.residues());
    let mut q2 = Complex64::new(0.0, 0.0);
    let mut p2 = Complex64::new(0.0, 0.0);
    for i in 0..3 {
        q2 -= c[i] * z[i].ln();
        p2 += c[i] * z[i] * z[i] * z[i].ln();
    }
    (q2.re / PI, p2.re / PI)
}

/// [S, Ṡ, S̈, S⃛] at zero temperature from the exponential-integral closed form:
/// S = (1/2π)Σ c_i (A_i − B_i), Ṡ = (1/2π)Σ c_i z_i (A_i + B_i), and so on,
/// with A = e^{w}E₁(w), B = e^{−w}Ei(w), w = z_i t.
pub fn autocorrelation_zero_t(sol: &GreenSolution, t: f64) -> Result<[f64; 4]> {
    if t < 0.0 {
        let [s0, s1, s2, s3] = autocorrelation_zero_t(sol, -t)?;
        return Ok([s0, -s1, s2, -s3]);
    }
    if t == 0.0 {
        let (q2, p2) = zero_t_limits(sol);
        return Ok([q2, 0.0, -p2, 0.0]);
    }
    let (z, c) = (sol.roots(), sol.residues());
    let mut out = [0.0; 4];
    for (i, weight) in [(1usize, 2.0), (2usize, 1.0)] {
        let (diff, sum) = expint::scaled_pair(z[i] * t)?;
        let mut zk = c[i];
        for (k, o) in out.iter_mut().enumerate() {
            let v = if k % 2 == 0 { diff } else { sum };
            *o += weight * (zk * v).re;
            zk *= z[i];
        }
    }
    Ok(out.map(|v| v / (2.0 * PI)))
}

/// cot(w) without overflow for large |Im w|.
fn cot(w: Complex64) -> Complex64 {
    if w.im == 0.0 {
        return Complex64::new(1.0 / w.re.tan(), 0.0);
    }
    if w.im < 0.0 {
        return cot(w.conj()).conj();
    }
    let e = (Complex64::new(0.0, 2.0) * w).exp();
    Complex64::new(0.0, 1.0) * (e + 1.0) / (e - 1.0)
}

/// Finite-temperature [S, Ṡ, S̈, S⃛] from the residue series
/// S = ½Σ c_i cot(βz_i/2) e^{−z_i t} − (2γ₀w_c²/β) Σ_{n≥1} ν_n e^{−ν_n t}/(P(ν_n)P(−ν_n)),
/// with the Matsubara remainder replaced by its large-ν integral.
pub fn autocorrelation_matsubara(sol: &GreenSolution, beta: f64, t: f64) -> Result<[f64; 4]> {
    if t < 0.0 {
        let [s0, s1, s2, s3] = autocorrelation_matsubara(sol, beta, -t)?;
        return Ok([s0, -s1, s2, -s3]);
    }
    let m = sol.model();
    let (z, c) = (sol.roots(), sol.residues());
    let mut out = [0.0; 4];
    for (i, weight) in [(1usize, 2.0), (2usize, 1.0)] {
        let arg = z[i] * (beta / 2.0);
        if arg.sin().norm() < 1e-9 * arg.cos().norm().max(1.0) {
            return Err(QbmError::accuracy("Matsubara frequency resonant with a decay rate", arg.sin().norm()));
        }
        let base = c[i] * cot(arg) * (-z[i] * t).exp() * 0.5;
        let mut zk = base;
        for o in out.iter_mut() {
            *o += weight * zk.re;
            zk *= -z[i];
        }
    }
    let dnu = 2.0 * PI / beta;
    let reach = (40.0 / t.max(1e-300)).max(300.0 * m.wc);
    let n_max = ((reach / dnu).ceil() as usize).clamp(64, 200_000);
    let pref = 2.0 * m.gamma0 * m.wc * m.wc / beta;
    let mut sums = [0.0; 4];
    for n in 1..=n_max {
        let nu = dnu * n as f64;
        let e = (-nu * t).exp();
        if e == 0.0 {
            break;
        }
        let nc = Complex64::new(nu, 0.0);
        let denom =
            (crate::green::characteristic_polynomial(m, nc) * crate::green::characteristic_polynomial(m, -nc)).re;
        let mut term = -pref * nu * e / denom;
        for s in sums.iter_mut() {
            *s += term;
            term *= -nu;
        }
    }
    let a = dnu * (n_max as f64 + 0.5);
    let at = a * t;
    if at < 700.0 {
        let tail_pref = m.gamma0 * m.wc * m.wc / PI * (-at).exp();
        for (k, s) in sums.iter_mut().enumerate() {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            let en = expint::expint_n_scaled(5 - k as u32, at)?;
            *s += sign * tail_pref * a.powi(k as i32 - 4) * en;
        }
    }
    for k in 0..4 {
        out[k] += sums[k];
    }
    Ok(out)
}

/// S(t) and its derivatives for the model's temperature.
#[derive(Clone, Debug)]
pub struct Autocorrelation {
    green: GreenSolution,
}

impl Autocorrelation {
    pub fn new(green: &GreenSolution) -> Self {
        Autocorrelation { green: green.clone() }
    }

    pub fn green(&self) -> &GreenSolution {
        &self.green
    }

    /// [S, Ṡ, S̈, S⃛] at t (S and S̈ even, Ṡ and S⃛ odd).
    pub fn eval(&self, t: f64) -> Result<[f64; 4]> {
        match self.green.model().temperature {
            Temperature::Zero => autocorrelation_zero_t(&self.green, t),
            Temperature::Beta(beta) => autocorrelation_matsubara(&self.green, beta, t),
        }
    }

    pub fn s(&self, t: f64) -> Result<f64> {
        Ok(self.eval(t)?[0])
    }
}

/// h(z) of the short-time expansion.
pub fn short_time_h(model: &BathModel, z: f64) -> Result<f64> {
    if z < 0.0 {
        return Err(QbmError::domain(format!("h(z) needs z >= 0, got {z}")));
    }
    if z == 0.0 {
        return Ok(0.0);
    }
    let (diff, _) = expint::scaled_pair(Complex64::new(z, 0.0))?;
    let ce = expint::EULER_GAMMA;
    let inner = diff.re + 2.0 * (ce + z.ln()) - (1.5 - ce) * z * z + z * z * z.ln();
    Ok(model.gamma0 / (2.0 * PI * model.wc * model.wc) * inner)
}

/// S(t) ≈ q² − p²t²/2 + h(w_c t)/2, valid for t ≤ 0.1/ω₀.
pub fn short_time_s(model: &BathModel, eq: &EquilibriumState, t: f64) -> Result<f64> {
    if !(0.0..=0.1 / model.omega0).contains(&t) {
        return Err(QbmError::domain(format!("short-time expansion needs 0 <= t <= {}, got {t}", 0.1 / model.omega0)));
    }
    Ok(eq.q2 - 0.5 * eq.p2 * t * t + 0.5 * short_time_h(model, model.wc * t)?)
}

/// Leading short-time decoherence law A/L₀² ≈ (γ₀/(π p²)) w_c² t² |ln w_c t|.
pub fn short_time_decoherence(model: &BathModel, eq: &EquilibriumState, t: f64) -> f64 {
    let x = model.wc * t;
    if x == 0.0 {
        return 0.0;
    }
    model.gamma0 / (PI * eq.p2) * x * x * x.ln().abs()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cot_matches_direct_form() {
        for w in [Complex64::new(0.7, 0.3), Complex64::new(-1.2, -2.0), Complex64::new(3.0, 0.0)] {
            let direct = w.cos() / w.sin();
            assert!((cot(w) - direct).norm() < 1e-13 * direct.norm());
        }
        assert!((cot(Complex64::new(0.3, 800.0)) - Complex64::new(0.0, -1.0)).norm() < 1e-15);
    }

    #[test]
    fn h_starts_at_zero() {
        let m = BathModel::default();
        assert_eq!(short_time_h(&m, 0.0).unwrap(), 0.0);
        assert!(short_time_h(&m, 1e-3).unwrap().abs() < 1e-12);
    }

    #[test]
    fn short_time_window() {
        let m = BathModel::default();
        let eq = EquilibriumState { q2: 0.5, p2: 0.5, provenance: Provenance::Quadrature };
        assert!(short_time_s(&m, &eq, 0.2).is_err());
        assert!(short_time_s(&m, &eq, 0.05).is_ok());
    }
}
