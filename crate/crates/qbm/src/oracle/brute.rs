//! Brute-force U(t, t') and α₆, α₇ from the ν-representation of the noise.
//!
//! ν(s) and ν_corr are written as ν-integrals (or Matsubara sums) of
//! exponentials in s, so every time double integral against G is done in
//! closed form; only the final ν integral is numerical.

use super::quadrature::{adaptive_breaks, adaptive_tail};
use crate::bath::{BathModel, Temperature};
use crate::green::GreenSolution;
use num_complex::Complex64;
use std::f64::consts::PI;

/// (e^x − 1)/x
fn phi(x: Complex64) -> Complex64 {
    if x.norm() < 1e-2 {
        Complex64::new(1.0, 0.0) + x * (0.5 + x * (1.0 / 6.0 + x * (1.0 / 24.0 + x * (1.0 / 120.0 + x / 720.0))))
    } else {
        (x.exp() - 1.0) / x
    }
}

/// ∫_0^T e^{−x(T−s)} e^{−y s} ds
fn e_int(x: Complex64, y: Complex64, t: f64) -> Complex64 {
    let d = x - y;
    if d.re >= 0.0 {
        (-y * t).exp() * t * phi(-d * t)
    } else {
        (-x * t).exp() * t * phi(d * t)
    }
}

/// ∫_0^T e^{−x s} ds
fn big_phi(x: Complex64, t: f64) -> Complex64 {
    t * phi(-x * t)
}

/// ∫_0^T∫_0^T e^{−z(T−s) − w(T−u) − a|s−u|} ds du
fn k_diag(z: Complex64, w: Complex64, a: Complex64, t: f64) -> Complex64 {
    (big_phi(w + z, t) - e_int(z + w, z + a, t)) / (z + a) + (big_phi(w + z, t) - e_int(z + w, w + a, t)) / (w + a)
}

/// Same with upper limits t (for s) and tp (for u), t ≥ tp.
fn k_off(z: Complex64, w: Complex64, a: Complex64, t: f64, tp: f64) -> Complex64 {
    let dt = t - tp;
    e_int(z, a, dt) * big_phi(w + a, tp) + (-z * dt).exp() * k_diag(z, w, a, tp)
}

const KEYS: [(usize, usize); 5] = [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0)];

/// Per-ν contributions at one time.
struct Sample {
    u: f64,
    xg: [f64; 3],
    xf: [f64; 3],
    j: [f64; 5],
}

pub struct BruteForce {
    model: BathModel,
    z: [Complex64; 3],
    c: [Complex64; 3],
    tol: f64,
}

/// Brute-force values of U and its derivative combinations at one time.
#[derive(Clone, Copy, Debug)]
pub struct BruteU {
    pub q2: f64,
    /// U, ∂ₜU, ∂ₜ∂ₜ′U, ∂ₜ∂ₜ′²U, ∂ₜ²U on the diagonal
    pub u: [f64; 5],
    pub alpha6: f64,
    pub alpha7: f64,
}

impl BruteForce {
    pub fn new(green: &GreenSolution) -> Self {
        BruteForce { model: *green.model(), z: green.roots(), c: green.residues(), tol: 1e-11 }
    }

    fn coefs(&self, k: usize) -> [Complex64; 3] {
        let mut out = self.c;
        for (o, z) in out.iter_mut().zip(self.z) {
            *o *= (-z).powu(k as u32);
        }
        out
    }

    /// g(ν, s) = a1 e^{−w_c s} + a2 e^{−ν s};  f(ν, s) = b (e^{−ν s} − e^{−w_c s})
    fn kernel_split(&self, nu: f64) -> (f64, f64, f64) {
        let (g0, wc) = (self.model.gamma0, self.model.wc);
        let den = wc * wc - nu * nu;
        (g0 * wc.powi(3) / den, -g0 * wc * wc * nu / den, g0 * wc * wc * nu / den)
    }

    fn sample(&self, nu: f64, t: f64) -> Sample {
        let m = &self.model;
        // step off the removable singularity of the split at ν = w_c
        let nu = if (nu - m.wc).abs() < 1e-7 * m.wc { m.wc * (1.0 + 1e-7) } else { nu };
        let (a1, a2, b) = self.kernel_split(nu);
        let wc = Complex64::new(m.wc, 0.0);
        let nc = Complex64::new(nu, 0.0);
        let u = 1.0 / (m.omega0 * m.omega0 + nu * nu + m.gamma0 * m.wc * nu / (nu + m.wc));
        let mut xg = [0.0; 3];
        let mut xf = [0.0; 3];
        for k in 0..3 {
            let ck = self.coefs(k);
            let mut g = Complex64::new(0.0, 0.0);
            let mut f = Complex64::new(0.0, 0.0);
            for (ci, &zi) in ck.iter().zip(&self.z) {
                let (ew, en) = (e_int(zi, wc, t), e_int(zi, nc, t));
                g += ci * (a1 * ew + a2 * en);
                f += ci * b * (en - ew);
            }
            if k == 2 {
                g += a1 * (-m.wc * t).exp() + a2 * (-nu * t).exp();
                f += b * ((-nu * t).exp() - (-m.wc * t).exp());
            }
            xg[k] = g.re;
            xf[k] = f.re;
        }
        let mut j = [0.0; 5];
        for (idx, &(jj, kk)) in KEYS.iter().enumerate() {
            let (cj, ck) = (self.coefs(jj), self.coefs(kk));
            let mut val = Complex64::new(0.0, 0.0);
            for (ci, &zi) in cj.iter().zip(&self.z) {
                for (cl, &zl) in ck.iter().zip(&self.z) {
                    val += ci * cl * (a1 * k_diag(zi, zl, wc, t) + a2 * k_diag(zi, zl, nc, t));
                }
            }
            // the t-derivative of a G' factor hits the upper limit: Ġ(0) = 1
            for (p, q) in [(jj, kk), (kk, jj)] {
                if q == 2 && p != 2 {
                    for (ci, &zi) in self.coefs(p).iter().zip(&self.z) {
                        val += ci * (a1 * big_phi(zi + wc, t) + a2 * big_phi(zi + nc, t));
                    }
                }
            }
            j[idx] = val.re;
        }
        Sample { u, xg, xf, j }
    }

    /// ∑ over the bath measure: ∫dν/π at T = 0, the Matsubara sum otherwise.
    fn measure<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        let wc = self.model.wc;
        let (abs, rel) = (self.tol * 1e-3, self.tol);
        match self.model.temperature {
            Temperature::Zero => {
                let breaks = [0.0, 0.01 * wc, 0.1 * wc, wc, 10.0 * wc, 100.0 * wc, 1000.0 * wc];
                (adaptive_breaks(&f, &breaks, abs, rel) + adaptive_tail(&f, 1000.0 * wc, abs, rel)) / PI
            }
            Temperature::Beta(beta) => {
                let step = 2.0 * PI / beta;
                let n = ((100.0 * wc / step).ceil() as usize).clamp(200, 40000);
                let mut sum = f(0.0) / beta;
                for k in 1..=n {
                    sum += 2.0 * f(step * k as f64) / beta;
                }
                sum + adaptive_tail(&f, step * (n as f64 + 0.5), abs, rel) / PI
            }
        }
    }

    pub fn at(&self, t: f64) -> BruteU {
        let q2 = self.measure(|nu| self.sample(nu, t).u);
        let y: Vec<f64> = (0..3)
            .map(|k| {
                self.measure(|nu| {
                    let s = self.sample(nu, t);
                    s.u * s.xg[k]
                }) / q2
            })
            .collect();
        let mut u = [0.0; 5];
        for (idx, &(jj, kk)) in KEYS.iter().enumerate() {
            let i = self.measure(|nu| {
                let s = self.sample(nu, t);
                s.j[idx] + s.u * (s.xg[jj] * s.xg[kk] - s.xf[jj] * s.xf[kk])
            });
            u[idx] = i - q2 * y[jj] * y[kk];
        }
        let g = self.c.iter().zip(&self.z).map(|(c, z)| c * (-z * t).exp()).sum::<Complex64>().re;
        let yf = self.measure(|nu| {
            let s = self.sample(nu, t);
            s.u * nu * s.xf[0]
        });
        BruteU { q2, u, alpha6: y[0] / g, alpha7: -yf / g }
    }

    /// Off-diagonal U(t, t') for t ≥ t'.
    pub fn off_diagonal(&self, t: f64, tp: f64) -> f64 {
        let (t, tp) = if t >= tp { (t, tp) } else { (tp, t) };
        let wc = Complex64::new(self.model.wc, 0.0);
        let q2 = self.measure(|nu| self.sample(nu, t).u);
        let ya = self.measure(|nu| {
            let s = self.sample(nu, t);
            s.u * s.xg[0]
        }) / q2;
        let yb = self.measure(|nu| {
            let s = self.sample(nu, tp);
            s.u * s.xg[0]
        }) / q2;
        let i = self.measure(|nu| {
            let (sa, sb) = (self.sample(nu, t), self.sample(nu, tp));
            let nu = if (nu - self.model.wc).abs() < 1e-7 * self.model.wc { self.model.wc * (1.0 + 1e-7) } else { nu };
            let (a1, a2, _) = self.kernel_split(nu);
            let nc = Complex64::new(nu, 0.0);
            let mut val = Complex64::new(0.0, 0.0);
            for (ci, &zi) in self.c.iter().zip(&self.z) {
                for (cl, &zl) in self.c.iter().zip(&self.z) {
                    val += ci * cl * (a1 * k_off(zi, zl, wc, t, tp) + a2 * k_off(zi, zl, nc, t, tp));
                }
            }
            val.re + sa.u * (sa.xg[0] * sb.xg[0] - sa.xf[0] * sb.xf[0])
        });
        i - q2 * ya * yb
    }
}
