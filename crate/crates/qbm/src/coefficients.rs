//! Master-equation coefficients: U(t,t′) and its derivatives, the diffusion
//! coefficients D₁, D₂, the inhomogeneous terms C̃₁, C̃₂, the propagator
//! coefficients α₀…α₁₂, and the long-time stationary values.

use crate::bath::{BathModel, Correlations, MatsubaraTable};
use crate::equilibrium::{self, Autocorrelation, EquilibriumState};
use crate::error::{QbmError, Result};
use crate::green::{GreenSolution, LocalCoefficients};
use rayon::prelude::*;
use serde::Serialize;
use std::f64::consts::PI;

/// Everything downstream of a bath model: Matsubara table, Green's function,
/// equilibrium dispersions and autocorrelation.
#[derive(Clone, Debug)]
pub struct BathStack {
    pub model: BathModel,
    pub table: MatsubaraTable,
    pub green: GreenSolution,
    pub eq: EquilibriumState,
    pub acf: Autocorrelation,
    pub correlations: Correlations,
}

/// G and S with their first three derivatives at one time.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Scalars {
    pub t: f64,
    pub g: [f64; 4],
    pub s: [f64; 4],
}

impl BathStack {
    pub fn new(model: BathModel) -> Result<Self> {
        model.validate()?;
        let table = MatsubaraTable::new(&model);
        let green = GreenSolution::solve_cubic(&model)?;
        let eq = equilibrium::dispersions(&model, &table)?;
        let acf = Autocorrelation::new(&green);
        Ok(BathStack { model, table, green, eq, acf, correlations: Correlations::On })
    }

    pub fn with_correlations(mut self, correlations: Correlations) -> Self {
        self.correlations = correlations;
        self
    }

    /// G and S derivatives at t. At t = 0, S takes the dispersions of this
    /// stack exactly: (q², 0, −p², 0).
    pub fn scalars(&self, t: f64) -> Result<Scalars> {
        let s = if t == 0.0 { [self.eq.q2, 0.0, -self.eq.p2, 0.0] } else { self.acf.eval(t)? };
        Ok(Scalars { t, g: self.green.derivs(t), s })
    }

    fn require_correlations(&self, what: &str) -> Result<()> {
        match self.correlations {
            Correlations::On => Ok(()),
            Correlations::Off => {
                Err(QbmError::Unsupported(format!("{what} for an uncorrelated initial state has no closed form here")))
            }
        }
    }
}

/// U and its derivatives on the diagonal t′ = t.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct UDerivatives {
    pub u: f64,
    pub u_t: f64,
    /// ∂ₜ′U, equal to ∂ₜU on the diagonal.
    pub u_tp: f64,
    pub u_ttp: f64,
    pub u_ttptp: f64,
    pub u_tt: f64,
}

/// U-derivatives from G, S and the dispersions. All vanish at t = 0.
pub fn u_derivatives(eq: &EquilibriumState, sc: &Scalars) -> UDerivatives {
    if sc.t == 0.0 {
        return UDerivatives { u: 0.0, u_t: 0.0, u_tp: 0.0, u_ttp: 0.0, u_ttptp: 0.0, u_tt: 0.0 };
    }
    let (q2, p2) = (eq.q2, eq.p2);
    let [g, dg, d2g, _] = sc.g;
    let [s0, s1, s2, s3] = sc.s;
    let u = q2 + 2.0 * g * s1 + p2 * g * g - s0 * s0 / q2;
    let u_t = p2 * g * dg + g * s2 + dg * s1 - s1 * s0 / q2;
    let u_ttp = p2 + 2.0 * dg * s2 + p2 * dg * dg - s1 * s1 / q2;
    let u_ttptp = dg * s3 + d2g * s2 + p2 * dg * d2g - s1 * s2 / q2;
    let u_tt = -p2 + d2g * s1 + g * s3 + p2 * g * d2g - s2 * s0 / q2;
    UDerivatives { u, u_t, u_tp: u_t, u_ttp, u_ttptp, u_tt }
}

/// U(t, t′) off the diagonal:
/// S(t−t′) + G(t)Ṡ(t′) + G(t′)Ṡ(t) + p²G(t)G(t′) − S(t)S(t′)/q².
pub fn u_off_diagonal(stack: &BathStack, t: f64, tp: f64) -> Result<f64> {
    stack.require_correlations("U(t,t')")?;
    let (q2, p2) = (stack.eq.q2, stack.eq.p2);
    let s = stack.acf.eval(t)?;
    let sp = stack.acf.eval(tp)?;
    let sd = stack.acf.s(t - tp)?;
    let (g, gp) = (stack.green.g(t), stack.green.g(tp));
    Ok(sd + g * sp[1] + gp * s[1] + p2 * g * gp - s[0] * sp[0] / q2)
}

/// D₁ = [∂²ₜ′ + γ∂ₜ′ + ω²]∂ₜU and D₂ = [∂²ₜ′ + γ∂ₜ′ + ω²]U at t′ = t.
pub fn diffusion(local: &LocalCoefficients, ud: &UDerivatives) -> (f64, f64) {
    let d1 = ud.u_ttptp + local.gamma * ud.u_ttp + local.omega_sq * ud.u_t;
    let d2 = ud.u_tt + local.gamma * ud.u_tp + local.omega_sq * ud.u;
    (d1, d2)
}

/// C̃₁ = [∂² + γ∂ + ω²](Gα₆) and C̃₂ = [∂² + γ∂ + ω²](Gα₇), using
/// Gα₆ = S/q² − Ġ and Gα₇ = −(Ṡ + Gp²).
pub fn inhomogeneous(
    eq: &EquilibriumState,
    sc: &Scalars,
    local: &LocalCoefficients,
    correlations: Correlations,
) -> (f64, f64) {
    if correlations == Correlations::Off {
        return (0.0, 0.0);
    }
    let (q2, p2) = (eq.q2, eq.p2);
    let [g, dg, d2g, d3g] = sc.g;
    let [s0, s1, s2, s3] = sc.s;
    let (w2, gam) = (local.omega_sq, local.gamma);
    let c1 = (s2 + gam * s1 + w2 * s0) / q2 - (d3g + gam * d2g + w2 * dg);
    let c2 = -(s3 + gam * s2 + w2 * s1) - p2 * (d2g + gam * dg + w2 * g);
    (c1 + 0.0, c2 + 0.0)
}

/// α₆…α₉ (zero for an uncorrelated initial state).
pub fn correlation_alphas(stack: &BathStack, sc: &Scalars) -> Result<[f64; 4]> {
    if stack.correlations == Correlations::Off {
        return Ok([0.0; 4]);
    }
    let (q2, p2) = (stack.eq.q2, stack.eq.p2);
    let [g, dg, d2g, _] = sc.g;
    let [s0, s1, s2, _] = sc.s;
    if g == 0.0 {
        return Err(QbmError::domain(format!("alpha coefficients are singular where G = 0 (t = {})", sc.t)));
    }
    let w = g * d2g - dg * dg;
    Ok([(s0 / q2 - dg) / g, -(s1 + g * p2) / g, (g * s1 - dg * s0) / (q2 * g) - w / g, dg * s1 / g - s2])
}

/// α₀…α₁₂ at t > 0.
pub fn alpha_vector(stack: &BathStack, t: f64) -> Result<[f64; 13]> {
    if t <= 0.0 {
        return Err(QbmError::domain("alpha coefficients need t > 0 (G(0) = 0)"));
    }
    stack.require_correlations("alpha_10..alpha_12")?;
    let sc = stack.scalars(t)?;
    let (q2, p2) = (stack.eq.q2, stack.eq.p2);
    let [g, dg, d2g, _] = sc.g;
    let [a6, a7, a8, a9] = correlation_alphas(stack, &sc)?;
    let ud = u_derivatives(&stack.eq, &sc);
    Ok([
        1.0 / (2.0 * PI * g.abs() * (2.0 * PI * q2).sqrt()),
        1.0 / (2.0 * q2),
        p2 / 2.0,
        dg / g,
        -1.0 / g,
        -(dg * dg / g - d2g),
        a6,
        a7,
        a8,
        a9,
        ud.u / (2.0 * g * g),
        ud.u_t / g - dg * ud.u / (g * g),
        0.5 * (dg * dg * ud.u / (g * g) - 2.0 * dg * ud.u_t / g + ud.u_ttp),
    ])
}

/// Relative violation of α₀² = α₄²α₁/(4π³).
pub fn trace_identity_residual(alpha: &[f64; 13]) -> f64 {
    let rhs = alpha[4] * alpha[4] * alpha[1] / (4.0 * PI.powi(3));
    (alpha[0] * alpha[0] - rhs).abs() / rhs
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientSample {
    pub t: f64,
    pub omega_sq: f64,
    pub gamma: f64,
    pub d1: f64,
    pub d2: f64,
    pub c1_tilde: f64,
    pub c2_tilde: f64,
    /// α₀…α₁₂; absent at t = 0 where G vanishes.
    pub alpha: Option<[f64; 13]>,
    pub singular: bool,
}

impl CoefficientSample {
    pub fn compute(stack: &BathStack, t: f64) -> Result<Self> {
        if t < 0.0 {
            return Err(QbmError::domain(format!("coefficients need t >= 0, got {t}")));
        }
        stack.require_correlations("D1, D2")?;
        let sc = stack.scalars(t)?;
        let local = stack.green.local_coefficients(t);
        let ud = u_derivatives(&stack.eq, &sc);
        let (d1, d2) = diffusion(&local, &ud);
        let (c1, c2) = inhomogeneous(&stack.eq, &sc, &local, stack.correlations);
        let alpha = if t > 0.0 && sc.g[0] != 0.0 { Some(alpha_vector(stack, t)?) } else { None };
        Ok(CoefficientSample {
            t,
            omega_sq: local.omega_sq,
            gamma: local.gamma,
            d1,
            d2,
            c1_tilde: c1,
            c2_tilde: c2,
            alpha,
            singular: local.singular,
        })
    }
}

/// Coefficients on a time grid, evaluated in parallel, returned in grid order.
pub fn sample_grid(stack: &BathStack, grid: &[f64]) -> Result<Vec<CoefficientSample>> {
    grid.par_iter().map(|&t| CoefficientSample::compute(stack, t)).collect()
}

/// Stationary Gaussian state reached at long times.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct StationaryState {
    pub t: f64,
    pub d1: f64,
    pub d2: f64,
    pub sigma_p2: f64,
    pub sigma_x2: f64,
}

impl StationaryState {
    /// Evaluated once the slowest decay e^{−Re z₂ t} has fallen below 1e-9.
    pub fn from_stack(stack: &BathStack) -> Result<Self> {
        let slow = stack.green.roots()[1].re;
        Self::at(stack, 21.0 / slow)
    }

    pub fn at(stack: &BathStack, t: f64) -> Result<Self> {
        let s = CoefficientSample::compute(stack, t)?;
        let m = &stack.model;
        if m.gamma0 <= 0.0 {
            return Err(QbmError::domain("stationary state needs gamma0 > 0"));
        }
        let sigma_p2 = s.d1 / m.gamma0;
        let sigma_x2 = (sigma_p2 + s.d2) / (m.omega0 * m.omega0);
        Ok(StationaryState { t, d1: s.d1, d2: s.d2, sigma_p2, sigma_x2 })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn u_vanishes_at_origin() {
        let stack = BathStack::new(BathModel::default()).unwrap();
        let sc = stack.scalars(0.0).unwrap();
        let ud = u_derivatives(&stack.eq, &sc);
        assert!(ud.u.abs() < 1e-8 && ud.u_t.abs() < 1e-8);
        let s = CoefficientSample::compute(&stack, 0.0).unwrap();
        assert!(s.d1.abs() < 1e-8 && s.d2.abs() < 1e-8, "{s:?}");
        assert!((s.omega_sq - 2.0).abs() < 1e-8 && s.gamma.abs() < 1e-8);
        assert!(s.alpha.is_none());
    }

    #[test]
    fn uncorrelated_state_has_no_inhomogeneous_terms() {
        let stack = BathStack::new(BathModel::default()).unwrap().with_correlations(Correlations::Off);
        let sc = stack.scalars(0.3).unwrap();
        let local = stack.green.local_coefficients(0.3);
        assert_eq!(inhomogeneous(&stack.eq, &sc, &local, stack.correlations), (0.0, 0.0));
        assert_eq!(correlation_alphas(&stack, &sc).unwrap(), [0.0; 4]);
        assert!(matches!(alpha_vector(&stack, 0.3), Err(QbmError::Unsupported(_))));
    }
}
