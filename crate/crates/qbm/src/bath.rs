//! Drude bath: spectral density, kernels, Matsubara sums and the correlational noise.

use crate::equilibrium::expint;
use crate::error::{QbmError, Result};
use crate::quad::NodeSet;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Temperature {
    Zero,
    Beta(f64),
}

/// Whether the initial state carries the system–bath correlations of the
/// measured thermal state or is a plain product state.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Correlations {
    #[default]
    On,
    Off,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BathModel {
    pub omega0: f64,
    pub gamma0: f64,
    pub wc: f64,
    pub temperature: Temperature,
}

impl Default for BathModel {
    /// ω₀ = 1, γ₀ = 0.01, w_c = 100 at zero temperature.
    fn default() -> Self {
        BathModel { omega0: 1.0, gamma0: 0.01, wc: 100.0, temperature: Temperature::Zero }
    }
}

impl BathModel {
    pub fn new(omega0: f64, gamma0: f64, wc: f64, temperature: Temperature) -> Result<Self> {
        let m = BathModel { omega0, gamma0, wc, temperature };
        m.validate()?;
        Ok(m)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.omega0, self.gamma0, self.wc].iter().all(|v| v.is_finite());
        if !finite {
            return Err(QbmError::Config("bath parameters must be finite".into()));
        }
        if self.omega0 <= 0.0 {
            return Err(QbmError::Config(format!("omega0 must be positive, got {}", self.omega0)));
        }
        if self.gamma0 < 0.0 {
            return Err(QbmError::Config(format!("gamma0 must be >= 0, got {}", self.gamma0)));
        }
        if self.wc <= self.omega0 {
            return Err(QbmError::Config(format!("cutoff wc = {} must exceed omega0 = {}", self.wc, self.omega0)));
        }
        if let Temperature::Beta(b) = self.temperature {
            if !(b > 0.0 && b.is_finite()) {
                return Err(QbmError::Config(format!("beta must be positive and finite, got {b}")));
            }
        }
        Ok(())
    }

    pub fn with_temperature(mut self, temperature: Temperature) -> Self {
        self.temperature = temperature;
        self
    }

    pub fn with_gamma0(mut self, gamma0: f64) -> Self {
        self.gamma0 = gamma0;
        self
    }

    pub fn beta(&self) -> Option<f64> {
        match self.temperature {
            Temperature::Zero => None,
            Temperature::Beta(b) => Some(b),
        }
    }

    /// I(w) = γ₀ w w_c²/(w² + w_c²)
    pub fn spectral_density(&self, w: f64) -> Result<f64> {
        if w < 0.0 {
            return Err(QbmError::domain(format!("spectral density needs w >= 0, got {w}")));
        }
        let wc2 = self.wc * self.wc;
        Ok(self.gamma0 * w * wc2 / (w * w + wc2))
    }

    /// η(s) = γ₀ w_c e^{−w_c s}
    pub fn eta(&self, s: f64) -> Result<f64> {
        if s < 0.0 {
            return Err(QbmError::domain(format!("eta needs s >= 0, got {s}")));
        }
        Ok(self.gamma0 * self.wc * (-self.wc * s).exp())
    }

    pub fn matsubara_frequency(&self, n: i64) -> Option<f64> {
        self.beta().map(|b| 2.0 * PI * n as f64 / b)
    }

    /// χ(ν) = γ₀ w_c |ν|/(|ν| + w_c)
    pub fn chi(&self, nu: f64) -> f64 {
        let a = nu.abs();
        self.gamma0 * self.wc * a / (a + self.wc)
    }

    /// u(ν) = 1/(ω₀² + ν² + χ(ν))
    pub fn u(&self, nu: f64) -> f64 {
        1.0 / (self.omega0 * self.omega0 + nu * nu + self.chi(nu))
    }

    /// g(ν, s) = ∫(dw/π) I(w) 2w/(w²+ν²) cos(ws), even in ν and in s.
    pub fn g(&self, nu: f64, s: f64) -> f64 {
        let (a, s, wc) = (nu.abs(), s.abs(), self.wc);
        let h = wc - a;
        let dd = if h.abs() < 1e-5 * wc {
            // divided difference of x e^{−xs} across [a, wc]
            let m = 0.5 * (wc + a);
            let e = (-m * s).exp();
            e * (1.0 - m * s) + e * (3.0 * s * s - s * s * s * m) * h * h / 24.0
        } else {
            (wc * (-wc * s).exp() - a * (-a * s).exp()) / h
        };
        self.gamma0 * wc * wc * dd / (wc + a)
    }

    /// f(ν, s) = ∫(dw/π) I(w) 2ν/(w²+ν²) sin(ws), odd in ν.
    pub fn f(&self, nu: f64, s: f64) -> f64 {
        let (a, wc) = (nu.abs(), self.wc);
        let h = wc - a;
        let dd = if h.abs() < 1e-5 * wc {
            let m = 0.5 * (wc + a);
            let e = (-m * s).exp();
            s * e * (1.0 + s * s * h * h / 24.0)
        } else {
            ((-a * s).exp() - (-wc * s).exp()) / h
        };
        self.gamma0 * wc * wc * nu * dd / (wc + a)
    }

    /// Noise kernel ν(s). Diverges logarithmically at s = 0 for the Drude density.
    pub fn nu(&self, s: f64) -> Result<f64> {
        let s = s.abs();
        if s == 0.0 {
            return Err(QbmError::Divergent { what: "noise kernel nu(0)".into() });
        }
        match self.temperature {
            Temperature::Zero => {
                let a = self.wc * s;
                let (diff, _) = expint::scaled_pair(num_complex::Complex64::new(a, 0.0))?;
                Ok(self.gamma0 * self.wc * self.wc / (2.0 * PI) * diff.re)
            }
            Temperature::Beta(beta) => {
                // run the explicit sum until e^{−ν s} is negligible
                let decay = (40.0 * beta / (2.0 * PI * s)).ceil().min(4.0e6) as usize;
                let n = default_n_max(self, beta).max(decay);
                let v1 = self.nu_matsubara(beta, s, n)?;
                let v2 = self.nu_matsubara(beta, s, 2 * n)?;
                let err = (v1 - v2).abs();
                if err > 1e-8 * v2.abs().max(1e-300) {
                    return Err(QbmError::accuracy(format!("Matsubara noise kernel at s = {s}"), err));
                }
                Ok(v2)
            }
        }
    }

    /// (1/β)[g₀ + 2Σ_{n=1}^{N} g_n] plus the exact integral beyond ν_{N+½}.
    fn nu_matsubara(&self, beta: f64, s: f64, n_max: usize) -> Result<f64> {
        let dnu = 2.0 * PI / beta;
        let mut sum = self.g(0.0, s);
        for n in 1..=n_max {
            sum += 2.0 * self.g(dnu * n as f64, s);
        }
        let a = dnu * (n_max as f64 + 0.5);
        let wc = self.wc;
        let lo = expint::e1_scaled(num_complex::Complex64::new((a - wc) * s, 0.0))?.re;
        let hi = expint::e1_scaled(num_complex::Complex64::new((a + wc) * s, 0.0))?.re;
        let tail = -0.5 * (-wc * s).exp() * (2.0 * wc / (a - wc)).ln_1p() + 0.5 * (-a * s).exp() * (lo + hi);
        Ok(sum / beta + self.gamma0 * wc * wc / PI * tail)
    }
}

/// Matsubara truncation: at least 1000 and well past the cutoff.
pub(crate) fn default_n_max(model: &BathModel, beta: f64) -> usize {
    let past_cutoff = (4.0 * beta * model.wc / (2.0 * PI)).ceil() as usize;
    1000usize.max(past_cutoff)
}

/// Nodes and weights such that Σ_k w_k F(ν_k) ≈ (1/β) Σ_{n∈ℤ} F(ν_n) for even F.
///
/// At finite temperature the first N Matsubara frequencies are explicit and the
/// remainder is an integral over [ν_{N+½}, ∞). At zero temperature the sum is
/// the integral (1/π)∫₀^∞ dν.
#[derive(Clone, Debug)]
pub struct MatsubaraTable {
    nodes: NodeSet,
    n_max: Option<usize>,
    resolution: usize,
    chi: Vec<f64>,
    u: Vec<f64>,
}

const ZERO_T_BREAKS: [f64; 12] = [0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 4.0, 10.0, 30.0, 100.0, 300.0, 1000.0];

impl MatsubaraTable {
    pub fn new(model: &BathModel) -> Self {
        match model.temperature {
            Temperature::Zero => Self::with_resolution(model, 32),
            Temperature::Beta(b) => Self::with_resolution(model, default_n_max(model, b)),
        }
    }

    /// `resolution` is n_max at finite temperature and the Gauss points per
    /// panel at zero temperature.
    pub fn with_resolution(model: &BathModel, resolution: usize) -> Self {
        let (nodes, n_max) = match model.temperature {
            Temperature::Zero => {
                let scale = model.wc / 100.0;
                let breaks: Vec<f64> = ZERO_T_BREAKS
                    .iter()
                    .map(|&b| if b <= 2.0 { b * model.omega0 } else { b * scale.max(model.omega0) })
                    .collect();
                let mut breaks = breaks;
                breaks.sort_by(f64::total_cmp);
                breaks.dedup();
                let mut set = NodeSet::panels(&breaks, resolution);
                set.extend(NodeSet::tail(*breaks.last().unwrap(), resolution));
                (set.scaled(1.0 / PI), None)
            }
            Temperature::Beta(beta) => {
                let dnu = 2.0 * PI / beta;
                let mut set = NodeSet::default();
                set.nodes.push(0.0);
                set.weights.push(1.0 / beta);
                for n in 1..=resolution {
                    set.nodes.push(dnu * n as f64);
                    set.weights.push(2.0 / beta);
                }
                let a = dnu * (resolution as f64 + 0.5);
                set.extend(NodeSet::tail(a, 32).scaled(1.0 / PI));
                (set, Some(resolution))
            }
        };
        let chi = nodes.nodes.iter().map(|&v| model.chi(v)).collect();
        let u = nodes.nodes.iter().map(|&v| model.u(v)).collect();
        MatsubaraTable { nodes, n_max, resolution, chi, u }
    }

    pub fn resolution(&self) -> usize {
        self.resolution
    }

    pub fn n_max(&self) -> Option<usize> {
        self.n_max
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.nodes.weights
    }

    pub fn chi(&self) -> &[f64] {
        &self.chi
    }

    pub fn u(&self) -> &[f64] {
        &self.u
    }

    /// (1/β) Σ_n F(ν_n) for an even F.
    pub fn sum(&self, f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.integrate(f)
    }

    /// (1/β) Σ_n u_n F(ν_n)
    pub fn sum_u(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.nodes.iter().zip(&self.nodes.weights).zip(&self.u).map(|((&v, &w), &u)| w * u * f(v)).sum()
    }

    /// q_β² = (1/β) Σ u_n
    pub fn q2(&self) -> f64 {
        self.sum_u(|_| 1.0)
    }

    /// C₁(s) = (1/(β q²)) Σ u_n g_n(s)
    pub fn c1(&self, model: &BathModel, s: f64) -> f64 {
        self.sum_u(|v| model.g(v, s)) / self.q2()
    }

    /// C₂(s) = (1/β) Σ u_n ν_n f_n(s)
    pub fn c2(&self, model: &BathModel, s: f64) -> f64 {
        self.sum_u(|v| v * model.f(v, s))
    }
}

/// ν_corr(s, u) = −q² C₁(s)C₁(u) + (1/β) Σ u_n [g_n(s)g_n(u) − f_n(s)f_n(u)]
pub fn nu_corr(model: &BathModel, table: &MatsubaraTable, s: f64, u: f64) -> Result<f64> {
    if s < 0.0 || u < 0.0 {
        return Err(QbmError::domain(format!("nu_corr needs s, u >= 0, got ({s}, {u})")));
    }
    let q2 = table.q2();
    let cs = table.sum_u(|v| model.g(v, s));
    let cu = table.sum_u(|v| model.g(v, u));
    let cross = table.sum_u(|v| model.g(v, s) * model.g(v, u) - model.f(v, s) * model.f(v, u));
    Ok(-cs * cu / q2 + cross)
}

/// R(s, u) = ν(s − u) + ν_corr(s, u)
pub fn effective_noise(
    model: &BathModel,
    table: &MatsubaraTable,
    correlations: Correlations,
    s: f64,
    u: f64,
) -> Result<f64> {
    let base = model.nu(s - u)?;
    match correlations {
        Correlations::Off => Ok(base),
        Correlations::On => Ok(base + nu_corr(model, table, s, u)?),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spectral_density_values() {
        let m = BathModel::default();
        assert_eq!(m.spectral_density(0.0).unwrap(), 0.0);
        assert!((m.spectral_density(100.0).unwrap() - 0.5).abs() < 1e-15);
        assert!((m.spectral_density(1.0).unwrap() - 0.01 * 1e4 / 10001.0).abs() < 1e-15);
        assert!(m.spectral_density(-1.0).is_err());
    }

    #[test]
    fn eta_values() {
        let m = BathModel::default();
        assert!((m.eta(0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((m.eta(0.01).unwrap() - (-1f64).exp()).abs() < 1e-15);
        assert!(m.eta(-0.1).is_err());
    }

    #[test]
    fn g_and_f_are_continuous_through_the_cutoff() {
        let m = BathModel::default();
        for s in [0.0, 0.003, 0.05, 1.0] {
            let at = m.g(100.0, s);
            let near = m.g(100.0 * (1.0 + 2e-5), s);
            assert!((at - near).abs() < 1e-4 * at.abs().max(1e-12), "g at s={s}");
            let fa = m.f(100.0, s);
            let fnear = m.f(100.0 * (1.0 - 2e-5), s);
            assert!((fa - fnear).abs() < 1e-4 * fa.abs().max(1e-12), "f at s={s}");
        }
        assert!((m.g(0.0, 0.02) - m.eta(0.02).unwrap()).abs() < 1e-15);
        assert_eq!(m.f(0.0, 0.3), 0.0);
        assert!((m.f(-7.0, 0.1) + m.f(7.0, 0.1)).abs() < 1e-15);
    }

    #[test]
    fn model_validation() {
        assert!(BathModel::new(1.0, 0.01, 0.5, Temperature::Zero).is_err());
        assert!(BathModel::new(0.0, 0.01, 100.0, Temperature::Zero).is_err());
        assert!(BathModel::new(1.0, -0.1, 100.0, Temperature::Zero).is_err());
        assert!(BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(-1.0)).is_err());
        assert!(BathModel::new(1.0, 0.01, 100.0, Temperature::Beta(2.0)).is_ok());
    }
}
