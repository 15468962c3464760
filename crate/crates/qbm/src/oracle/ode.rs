//! Time-stepping oracles: the memory equation for G, the local equation with
//! the computed ω²(t), γ(t), and the Gaussian moment flow.

use crate::bath::BathModel;
use crate::coefficients::{diffusion, u_derivatives, BathStack};
use crate::error::Result;
use crate::green::GreenSolution;
use nalgebra::{Matrix3, Vector3};

/// G̈ + ω₀²G + ∫_0^t η(t−s)Ġ(s)ds = 0, G(0) = 0, Ġ(0) = 1, with the
/// exponential memory carried by M(t) = ∫_0^t η(t−s)Ġ(s)ds:
/// Ṁ = γ₀w_c Ġ − w_c M. Crank–Nicolson at step h; returns G on every
/// `stride`-th step.
fn crank_nicolson(model: &BathModel, t_end: f64, h: f64, stride: usize) -> Vec<f64> {
    let (w2, gw, wc) = (model.omega0 * model.omega0, model.gamma0 * model.wc, model.wc);
    let a = Matrix3::new(0.0, 1.0, 0.0, -w2, 0.0, -1.0, 0.0, gw, -wc);
    let id = Matrix3::identity();
    let lhs = (id - a * (0.5 * h)).try_inverse().expect("CN matrix invertible");
    let step = lhs * (id + a * (0.5 * h));
    let n = (t_end / h).round() as usize;
    let mut y = Vector3::new(0.0, 1.0, 0.0);
    let mut out = vec![0.0];
    for k in 1..=n {
        y = step * y;
        if k % stride == 0 {
            out.push(y[0]);
        }
    }
    out
}

/// Richardson-extrapolated G on a grid of spacing `out_dt` over [0, t_end].
pub fn volterra_green(model: &BathModel, t_end: f64, h: f64, out_dt: f64) -> Vec<(f64, f64)> {
    let stride = (out_dt / h).round() as usize;
    let coarse = crank_nicolson(model, t_end, h, stride);
    let fine = crank_nicolson(model, t_end, 0.5 * h, 2 * stride);
    coarse
        .iter()
        .zip(&fine)
        .enumerate()
        .map(|(k, (c, f))| (k as f64 * stride as f64 * h, (4.0 * f - c) / 3.0))
        .collect()
}

fn rk4<const N: usize>(y: [f64; N], t: f64, h: f64, f: &impl Fn(f64, &[f64; N]) -> [f64; N]) -> [f64; N] {
    let add = |y: &[f64; N], k: &[f64; N], s: f64| {
        let mut o = *y;
        for i in 0..N {
            o[i] += s * k[i];
        }
        o
    };
    let k1 = f(t, &y);
    let k2 = f(t + 0.5 * h, &add(&y, &k1, 0.5 * h));
    let k3 = f(t + 0.5 * h, &add(&y, &k2, 0.5 * h));
    let k4 = f(t + h, &add(&y, &k3, h));
    let mut o = y;
    for i in 0..N {
        o[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    o
}

/// Fixed-step RK4 from t0 to t1.
pub fn integrate_rk4<const N: usize>(
    y0: [f64; N],
    t0: f64,
    t1: f64,
    h: f64,
    f: &impl Fn(f64, &[f64; N]) -> [f64; N],
) -> [f64; N] {
    let n = ((t1 - t0) / h).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n as f64;
    (0..n).fold(y0, |y, k| rk4(y, t0 + k as f64 * h, h, f))
}

/// Solves f̈ + γ(t)ḟ + ω²(t)f = 0 by RK4 and returns max |f − (f0 Ġ + df0 G)|
/// over [0, t_end].
pub fn localization_error(green: &GreenSolution, f0: f64, df0: f64, t_end: f64, h: f64) -> f64 {
    let rhs = |t: f64, y: &[f64; 2]| {
        let lc = green.local_coefficients(t);
        [y[1], -lc.omega_sq * y[0] - lc.gamma * y[1]]
    };
    let n = (t_end / h).round() as usize;
    let mut y = [f0, df0];
    let mut worst: f64 = 0.0;
    for k in 0..n {
        let t = k as f64 * h;
        y = rk4(y, t, h, &rhs);
        let exact = f0 * green.dg(t + h) + df0 * green.g(t + h);
        worst = worst.max((y[0] - exact).abs());
    }
    worst
}

/// Centre and covariance of one Gaussian peak.
#[derive(Clone, Copy, Debug)]
pub struct Moments {
    pub r: f64,
    pub p: f64,
    pub xx: f64,
    pub xp: f64,
    pub pp: f64,
}

/// Moment flow of the homogeneous master equation from t0 to t1:
/// ṙ = p, ṗ = −ω²r − γp,
/// σ̇xx = 2σxp, σ̇xp = σpp − ω²σxx − γσxp + D₂, σ̇pp = −2ω²σxp − 2γσpp + 2D₁.
pub fn moment_flow(stack: &BathStack, start: Moments, t0: f64, t1: f64, h: f64) -> Result<Moments> {
    // validate the whole range up front so the RHS can unwrap
    stack.scalars(t0)?;
    stack.scalars(t1)?;
    let rhs = |t: f64, y: &[f64; 5]| {
        let lc = stack.green.local_coefficients(t);
        let sc = stack.scalars(t).expect("validated range");
        let (d1, d2) = diffusion(&lc, &u_derivatives(&stack.eq, &sc));
        let (w2, g) = (lc.omega_sq, lc.gamma);
        [
            y[1],
            -w2 * y[0] - g * y[1],
            2.0 * y[3],
            y[4] - w2 * y[2] - g * y[3] + d2,
            -2.0 * w2 * y[3] - 2.0 * g * y[4] + 2.0 * d1,
        ]
    };
    let n = ((t1 - t0) / h).ceil().max(1.0) as usize;
    let h = (t1 - t0) / n as f64;
    let mut y = [start.r, start.p, start.xx, start.xp, start.pp];
    for k in 0..n {
        y = rk4(y, t0 + k as f64 * h, h, &rhs);
    }
    Ok(Moments { r: y[0], p: y[1], xx: y[2], xp: y[3], pp: y[4] })
}
