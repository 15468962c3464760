//! Green's function G(t) of the damped Drude oscillator and the local
//! coefficients ω²(t), γ(t) derived from it.

use crate::bath::BathModel;
use crate::error::{QbmError, Result};
use nalgebra::Matrix3;
use num_complex::Complex64;
use ode_solvers::{Dopri5, OutputType, System, Vector2};
use serde::Serialize;

/// Closed-form G(t) = Σ_i c_i e^{−z_i t}.
///
/// The z_i are decay rates (Re z_i > 0): the roots of P(−z) with
/// P(z) = (z² + ω₀²)(z + w_c) + γ₀ w_c z. Index 0 and 1 are the conjugate
/// pair with Im z₁ > 0 at index 1; index 2 is the real root.
#[derive(Clone, Debug)]
pub struct GreenSolution {
    model: BathModel,
    z: [Complex64; 3],
    c: [Complex64; 3],
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct LocalCoefficients {
    pub t: f64,
    pub omega_sq: f64,
    pub gamma: f64,
    pub wronskian: f64,
    /// |W| fell below 1e-12 of the scale of its constituent terms.
    pub singular: bool,
}

impl LocalCoefficients {
    pub fn checked(self) -> Result<Self> {
        if self.singular {
            Err(QbmError::Singular { t: self.t })
        } else {
            Ok(self)
        }
    }
}

fn p_of(model: &BathModel, r: Complex64) -> Complex64 {
    let w2 = model.omega0 * model.omega0;
    (r * r + w2) * (r + model.wc) + r * (model.gamma0 * model.wc)
}

fn dp_of(model: &BathModel, r: Complex64) -> Complex64 {
    let w2 = model.omega0 * model.omega0;
    r * r * 3.0 + r * (2.0 * model.wc) + (w2 + model.gamma0 * model.wc)
}

/// P(z) = (z² + ω₀²)(z + w_c) + γ₀w_c z.
pub fn characteristic_polynomial(model: &BathModel, z: Complex64) -> Complex64 {
    p_of(model, z)
}

impl GreenSolution {
    /// Roots from the companion matrix, polished by Newton's method.
    pub fn solve_cubic(model: &BathModel) -> Result<Self> {
        model.validate()?;
        let (a2, a1, a0) =
            (model.wc, model.omega0 * model.omega0 + model.gamma0 * model.wc, model.omega0 * model.omega0 * model.wc);
        let companion = Matrix3::new(0.0, 0.0, -a0, 1.0, 0.0, -a1, 0.0, 1.0, -a2);
        let eig = companion.complex_eigenvalues();
        let mut roots: Vec<Complex64> = eig.iter().map(|e| Complex64::new(e.re, e.im)).collect();
        for r in roots.iter_mut() {
            for _ in 0..50 {
                let step = p_of(model, *r) / dp_of(model, *r);
                *r -= step;
                if step.norm() <= 1e-16 * r.norm() {
                    break;
                }
            }
        }
        let scale = roots.iter().map(|r| r.norm()).fold(0.0, f64::max);
        let complex_tol = 1e-10 * scale;
        let n_complex = roots.iter().filter(|r| r.im.abs() > complex_tol).count();
        if n_complex != 2 {
            return Err(QbmError::UnsupportedRegime(
                "overdamped or critical parameters: P(z) has three real roots; \
                 only the underdamped regime is supported"
                    .into(),
            ));
        }
        roots.sort_by(|a, b| b.im.abs().total_cmp(&a.im.abs()));
        let pair = roots[0];
        let upper = -Complex64::new(pair.re, -pair.im.abs());
        let real = Complex64::new(-roots[2].re, 0.0);
        let z = [upper.conj(), upper, real];
        if z.iter().any(|zi| zi.re < -1e-12 * scale || (zi.re <= 0.0 && model.gamma0 > 0.0)) {
            return Err(QbmError::UnsupportedRegime("unstable root with Re z <= 0".into()));
        }
        let c = z.map(|zi| (model.wc - zi) / dp_of(model, -zi));
        let sol = GreenSolution { model: *model, z, c };
        let bc = sol.g(0.0).abs() + (sol.dg(0.0) - 1.0).abs();
        if bc > 1e-10 {
            return Err(QbmError::accuracy("G(0) = 0, G'(0) = 1 reconstruction", bc));
        }
        Ok(sol)
    }

    pub fn model(&self) -> &BathModel {
        &self.model
    }

    /// Decay rates z₁ = conj(z₂), z₂ (Im > 0), z₃ (real).
    pub fn roots(&self) -> [Complex64; 3] {
        self.z
    }

    /// Residues c_i of G = Σ c_i e^{−z_i t}.
    pub fn residues(&self) -> [Complex64; 3] {
        self.c
    }

    /// |P(−z_i)| for each root.
    pub fn residuals(&self) -> [f64; 3] {
        self.z.map(|zi| p_of(&self.model, -zi).norm())
    }

    /// g₂ in G = Im(g₂ e^{−z₂t}) + g₃ e^{−z₃t}.
    pub fn g2(&self) -> Complex64 {
        Complex64::new(0.0, 2.0) * self.c[1]
    }

    pub fn g3(&self) -> f64 {
        self.c[2].re
    }

    /// k-th derivative of G at t. The initial values G(0) = G̈(0) = 0,
    /// Ġ(0) = 1 and G⃛(0) = −(ω₀² + γ₀w_c) are returned exactly.
    pub fn deriv(&self, k: u32, t: f64) -> f64 {
        if t == 0.0 && k <= 3 {
            let m = &self.model;
            return [0.0, 1.0, 0.0, -(m.omega0 * m.omega0 + m.gamma0 * m.wc)][k as usize];
        }
        let term = |i: usize| self.c[i] * (-self.z[i]).powu(k) * (-self.z[i] * t).exp();
        2.0 * term(1).re + term(2).re
    }

    pub fn g(&self, t: f64) -> f64 {
        self.deriv(0, t)
    }

    pub fn dg(&self, t: f64) -> f64 {
        self.deriv(1, t)
    }

    pub fn d2g(&self, t: f64) -> f64 {
        self.deriv(2, t)
    }

    pub fn d3g(&self, t: f64) -> f64 {
        self.deriv(3, t)
    }

    /// [G, Ġ, G̈, G⃛] at t.
    pub fn derivs(&self, t: f64) -> [f64; 4] {
        [0, 1, 2, 3].map(|k| self.deriv(k, t))
    }

    /// Σ_i |c_i| |z_i|^k e^{−Re z_i t}, a magnitude envelope for G^{(k)}.
    fn envelope(&self, k: i32, t: f64) -> f64 {
        (0..3).map(|i| self.c[i].norm() * self.z[i].norm().powi(k) * (-self.z[i].re * t).exp()).sum()
    }

    pub fn wronskian(&self, t: f64) -> f64 {
        let [g, dg, d2g, _] = self.derivs(t);
        g * d2g - dg * dg
    }

    /// ω²(t) = (ĠG⃛ − G̈²)/W and γ(t) = −Ẇ/W.
    pub fn local_coefficients(&self, t: f64) -> LocalCoefficients {
        let [g, dg, d2g, d3g] = self.derivs(t);
        let w = g * d2g - dg * dg;
        let wdot = g * d3g - dg * d2g;
        let scale = self.envelope(0, t) * self.envelope(2, t) + self.envelope(1, t).powi(2);
        LocalCoefficients {
            t,
            omega_sq: (dg * d3g - d2g * d2g) / w,
            // + 0.0 maps −0 to 0 at t = 0.
            gamma: -wdot / w + 0.0,
            wronskian: w,
            singular: !(w.abs() > 1e-12 * scale),
        }
    }

    /// Solution of the nonlocal equation with f(0) = f0, ḟ(0) = df0.
    pub fn nonlocal_solution(&self, f0: f64, df0: f64, t: f64) -> f64 {
        f0 * self.dg(t) + df0 * self.g(t)
    }

    /// Constants with f = a₁G + a₂Ġ given (f, ḟ) at time t.
    pub fn cauchy_constants(&self, t: f64, f: f64, df: f64) -> Result<(f64, f64)> {
        let [g, dg, d2g, _] = self.derivs(t);
        let w = g * d2g - dg * dg;
        if w == 0.0 {
            return Err(QbmError::Singular { t });
        }
        Ok(((d2g * f - dg * df) / w, (g * df - dg * f) / w))
    }
}

struct LocalEquation<'a> {
    sol: &'a GreenSolution,
}

impl System<f64, Vector2<f64>> for LocalEquation<'_> {
    fn system(&self, t: f64, y: &Vector2<f64>, dy: &mut Vector2<f64>) {
        let lc = self.sol.local_coefficients(t);
        dy[0] = y[1];
        dy[1] = -lc.gamma * y[1] - lc.omega_sq * y[0];
    }
}

/// Integrates the local equation f̈ + γ(t)ḟ + ω²(t)f = 0 from t = 0 and returns
/// f on `t_grid` (non-decreasing, starting at or after 0).
pub fn localize_check(sol: &GreenSolution, f0: f64, df0: f64, t_grid: &[f64]) -> Result<Vec<f64>> {
    if t_grid.windows(2).any(|w| w[1] < w[0]) || t_grid.first().is_some_and(|&t| t < 0.0) {
        return Err(QbmError::domain("time grid must be non-decreasing and start at t >= 0"));
    }
    let mut out = Vec::with_capacity(t_grid.len());
    let mut t = 0.0;
    let mut y = Vector2::new(f0, df0);
    for &target in t_grid {
        if target > t {
            let lc = sol.local_coefficients(target);
            lc.checked()?;
            // Sparse output: the dense interpolant is unreliable when one output
            // interval spans many steps.
            let mut stepper = Dopri5::from_param(
                LocalEquation { sol },
                t,
                target,
                target - t,
                y,
                1e-8,
                1e-10,
                0.9,
                0.04,
                0.2,
                10.0,
                target - t,
                0.0,
                100_000,
                1000,
                OutputType::Sparse,
            );
            stepper.integrate().map_err(|e| QbmError::Integration(format!("{e:?}")))?;
            y = *stepper.y_out().last().ok_or_else(|| QbmError::Integration("no output from stepper".into()))?;
            t = target;
        }
        out.push(y[0]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bath::Temperature;

    #[test]
    fn default_roots() {
        let sol = GreenSolution::solve_cubic(&BathModel::default()).unwrap();
        let [z1, z2, z3] = sol.roots();
        assert_eq!(z1, z2.conj());
        assert!((z3.re - 99.98999990).abs() < 1e-6, "{z3}");
        assert!((z2.re - 0.005).abs() < 1e-6 && (z2.im - 1.0000375).abs() < 1e-6, "{z2}");
        assert!((z1 + z2 + z3 - 100.0).norm() < 1e-10);
        assert!(sol.residuals().iter().all(|&r| r < 1e-10));
    }

    #[test]
    fn no_coupling_gives_free_oscillator() {
        let m = BathModel::new(1.3, 0.0, 50.0, Temperature::Zero).unwrap();
        let sol = GreenSolution::solve_cubic(&m).unwrap();
        let [_, z2, z3] = sol.roots();
        assert!((z2 - Complex64::new(0.0, 1.3)).norm() < 1e-12);
        assert!((z3.re - 50.0).abs() < 1e-12);
        for t in [0.0, 0.7, 3.1, 12.0] {
            assert!((sol.g(t) - (1.3 * t).sin() / 1.3).abs() < 1e-12);
            let lc = sol.local_coefficients(t + 0.1);
            assert!((lc.omega_sq - 1.69).abs() < 1e-8 && lc.gamma.abs() < 1e-8);
        }
    }

    #[test]
    fn overdamped_rejected() {
        let m = BathModel::new(1.0, 2.0, 10.0, Temperature::Zero).unwrap();
        assert!(matches!(GreenSolution::solve_cubic(&m), Err(QbmError::UnsupportedRegime(_))));
    }

    #[test]
    fn boundary_values_of_local_coefficients() {
        let sol = GreenSolution::solve_cubic(&BathModel::default()).unwrap();
        let lc = sol.local_coefficients(0.0);
        assert!((lc.omega_sq - 2.0).abs() < 1e-8);
        assert!(lc.gamma.abs() < 1e-8);
        assert!((lc.wronskian + 1.0).abs() < 1e-12);
    }

    #[test]
    fn cauchy_constants_recover_data() {
        let sol = GreenSolution::solve_cubic(&BathModel::default()).unwrap();
        let (f0, df0) = (0.4, -1.2);
        let t = 2.3;
        let f = sol.nonlocal_solution(f0, df0, t);
        let df = f0 * sol.d2g(t) + df0 * sol.dg(t);
        let (a1, a2) = sol.cauchy_constants(t, f, df).unwrap();
        assert!((a1 - df0).abs() < 1e-10 && (a2 - f0).abs() < 1e-10);
    }
}
