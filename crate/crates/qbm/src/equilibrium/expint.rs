//! Exponential integrals E₁(z), Ei(x) and E_n(x).
//!
//! E₁ uses the power series for |z| ≤ 4, Lentz's continued fraction for
//! |arg z| < 3π/4 beyond that, and the series or the asymptotic expansion in
//! the sector next to the branch cut. Scaled variants return e^{z}E₁(z) and
//! e^{−x}Ei(x) so that large arguments neither overflow nor underflow.

use crate::error::{QbmError, Result};
use num_complex::Complex64;
use std::f64::consts::PI;

pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

const EPS: f64 = 1e-16;
const SERIES_RADIUS: f64 = 4.0;
const ASYMPTOTIC_RADIUS: f64 = 40.0;
const MAX_ITER: usize = 10_000;

fn check_e1_argument(z: Complex64) -> Result<()> {
    if z.norm() == 0.0 {
        return Err(QbmError::domain("E1(0) is infinite"));
    }
    if z.im == 0.0 && z.re < 0.0 {
        return Err(QbmError::BranchCut(z));
    }
    if !z.re.is_finite() || !z.im.is_finite() {
        return Err(QbmError::domain(format!("non-finite argument {z}")));
    }
    Ok(())
}

/// Σ_{k≥1} x^k/(k·k!)
fn ein_sum(x: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = Complex64::new(0.0, 0.0);
    for k in 1..MAX_ITER {
        let kf = k as f64;
        term *= x / kf;
        let contrib = term / kf;
        sum += contrib;
        if contrib.norm() <= EPS * sum.norm() {
            break;
        }
    }
    sum
}

fn e1_series(z: Complex64) -> Complex64 {
    -EULER_GAMMA - z.ln() - ein_sum(-z)
}

/// e^{z}E₁(z) by the modified Lentz algorithm.
fn e1_scaled_cf(z: Complex64) -> Result<Complex64> {
    let tiny = 1e-300;
    let mut b = z + 1.0;
    let mut c = Complex64::new(1.0 / tiny, 0.0);
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..MAX_ITER {
        let an = -((i * i) as f64);
        b += 2.0;
        d = 1.0 / (d * an + b);
        c = b + an / c;
        let del = c * d;
        h *= del;
        if (del - 1.0).norm() < EPS {
            return Ok(h);
        }
    }
    Err(QbmError::accuracy(format!("E1 continued fraction at z = {z}"), (b * d).norm()))
}

/// e^{z}E₁(z) ~ (1/z) Σ (−1)^k k!/z^k, truncated at the smallest term.
fn e1_scaled_asymptotic(z: Complex64) -> Complex64 {
    let mut term = Complex64::new(1.0, 0.0);
    let mut sum = term;
    let mut last = f64::INFINITY;
    for k in 1..MAX_ITER {
        let next = -term * (k as f64) / z;
        let size = next.norm();
        if size >= last || size < EPS * sum.norm() {
            break;
        }
        term = next;
        sum += term;
        last = size;
    }
    sum / z
}

/// e^{z}E₁(z) on the principal branch.
pub fn e1_scaled(z: Complex64) -> Result<Complex64> {
    check_e1_argument(z)?;
    let r = z.norm();
    if r <= SERIES_RADIUS {
        return Ok(z.exp() * e1_series(z));
    }
    if z.arg().abs() < 0.75 * PI {
        return e1_scaled_cf(z);
    }
    if r <= ASYMPTOTIC_RADIUS {
        Ok(z.exp() * e1_series(z))
    } else {
        Ok(e1_scaled_asymptotic(z))
    }
}

/// Principal-branch E₁(z) for z off the non-positive real axis.
pub fn e1(z: Complex64) -> Result<Complex64> {
    check_e1_argument(z)?;
    let r = z.norm();
    if r <= SERIES_RADIUS || (z.arg().abs() >= 0.75 * PI && r <= ASYMPTOTIC_RADIUS) {
        return Ok(e1_series(z));
    }
    Ok(e1_scaled(z)? * (-z).exp())
}

/// Real E₁(x) for x > 0.
pub fn e1_real(x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Err(QbmError::domain(format!("E1 needs x > 0, got {x}")));
    }
    Ok(e1(Complex64::new(x, 0.0))?.re)
}

/// e^{−x}Ei(x) for real x ≠ 0, with Ei the principal value.
pub fn ei_scaled(x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(QbmError::domain(format!("Ei undefined at x = {x}")));
    }
    if x < 0.0 {
        return Ok(-e1_scaled(Complex64::new(-x, 0.0))?.re);
    }
    if x <= ASYMPTOTIC_RADIUS {
        let s = ein_sum(Complex64::new(x, 0.0)).re;
        return Ok((-x).exp() * (EULER_GAMMA + x.ln() + s));
    }
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..MAX_ITER {
        let next = term * k as f64 / x;
        if next >= term || next < EPS * sum {
            break;
        }
        term = next;
        sum += term;
    }
    Ok(sum / x)
}

/// Principal-value Ei(x) for real x ≠ 0.
pub fn ei(x: f64) -> Result<f64> {
    if x < 0.0 {
        return Ok(-e1_real(-x)?);
    }
    if x > 0.0 && x <= ASYMPTOTIC_RADIUS {
        return Ok(EULER_GAMMA + x.ln() + ein_sum(Complex64::new(x, 0.0)).re);
    }
    Ok(ei_scaled(x)? * x.exp())
}

/// e^{−w}Ei(w) for complex w, with Ei(w) = −E₁(−w) + iπ·sgn(Im w).
/// On the real axis this is the principal value.
pub fn ei_scaled_complex(w: Complex64) -> Result<Complex64> {
    if w.im == 0.0 {
        return Ok(Complex64::new(ei_scaled(w.re)?, 0.0));
    }
    let jump = Complex64::new(0.0, PI * w.im.signum()) * (-w).exp();
    Ok(-e1_scaled(-w)? + jump)
}

/// (A − B, A + B) with A = e^{w}E₁(w) and B = e^{−w}Ei(w).
///
/// For small |w| both combinations come from one series, which avoids the
/// cancellation in A + B ~ O(w ln w).
pub fn scaled_pair(w: Complex64) -> Result<(Complex64, Complex64)> {
    if w.norm() <= 1.0 {
        check_e1_argument(w)?;
        let l = EULER_GAMMA + w.ln();
        let sp = ein_sum(w);
        let sm = ein_sum(-w);
        let ep = w.exp();
        let em = (-w).exp();
        let diff = -l * 2.0 * w.cosh() - ep * sm - em * sp;
        let sum = -l * 2.0 * w.sinh() - ep * sm + em * sp;
        return Ok((diff, sum));
    }
    let a = e1_scaled(w)?;
    let b = ei_scaled_complex(w)?;
    Ok((a - b, a + b))
}

/// e^{x}E_n(x) for real x > 0 and n ≥ 1 (x = 0 allowed for n ≥ 2).
pub fn expint_n_scaled(n: u32, x: f64) -> Result<f64> {
    if x < 0.0 || (x == 0.0 && n < 2) {
        return Err(QbmError::domain(format!("E_{n}({x}) undefined")));
    }
    if n == 0 {
        return Ok(1.0 / x);
    }
    if x == 0.0 {
        return Ok(1.0 / (n as f64 - 1.0));
    }
    let nm1 = n as f64 - 1.0;
    if x > 1.0 {
        let tiny = 1e-300;
        let mut b = x + n as f64;
        let mut c = 1.0 / tiny;
        let mut d = 1.0 / b;
        let mut h = d;
        for i in 1..MAX_ITER {
            let fi = i as f64;
            let a = -fi * (nm1 + fi);
            b += 2.0;
            d = 1.0 / (a * d + b);
            c = b + a / c;
            let del = c * d;
            h *= del;
            if (del - 1.0).abs() < EPS {
                return Ok(h);
            }
        }
        return Err(QbmError::accuracy(format!("E_{n}({x}) continued fraction"), f64::NAN));
    }
    let mut ans = if n > 1 { 1.0 / nm1 } else { -x.ln() - EULER_GAMMA };
    let mut fact = 1.0;
    for i in 1..MAX_ITER {
        let fi = i as f64;
        fact *= -x / fi;
        let del = if fi != nm1 {
            -fact / (fi - nm1)
        } else {
            let psi = -EULER_GAMMA + (1..=(n - 1)).map(|k| 1.0 / k as f64).sum::<f64>();
            fact * (-x.ln() + psi)
        };
        ans += del;
        if del.abs() < ans.abs() * EPS {
            break;
        }
    }
    Ok(ans * x.exp())
}

/// Real E_n(x).
pub fn expint_n(n: u32, x: f64) -> Result<f64> {
    Ok(expint_n_scaled(n, x)? * (-x).exp())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm()
    }

    #[test]
    fn e1_reference_values() {
        let cases = [
            (c(1.0, 0.0), c(0.21938393439552027368, 0.0)),
            (c(0.5, 0.0), c(0.55977359477616081175, 0.0)),
            (c(3.9, 0.0), c(0.0042671452812185717213, 0.0)),
            (c(4.1, 0.0), c(0.0033488806360697113434, 0.0)),
            (c(10.0, 0.0), c(4.1569689296853242774e-6, 0.0)),
            (c(45.0, 0.0), c(6.2256908094623836431e-22, 0.0)),
            (c(0.0, 1.0), c(-0.33740392290096813466, -0.62471325642771360429)),
            (c(-3.0, 0.5), c(-9.3836035093309434316, 0.12921297008462977011)),
            (c(-10.0, 1e-3), c(-2492.2279850509861926, -0.93894637513747458387)),
            (c(2.0, -20.0), c(-0.0056275015167040098721, 0.0035938961914526080146)),
            (c(-30.0, 5.0), c(-42238508757.318035579, -361103191095.04105737)),
            (c(-50.0, 60.0), c(56112904634189937401.0, 36475419495617562013.0)),
        ];
        for (z, want) in cases {
            let got = e1(z).unwrap();
            assert!(rel(got, want) < 1e-12, "E1({z}) = {got}, want {want}");
        }
    }

    #[test]
    fn ei_reference_values() {
        let cases = [
            (1.0, 1.8951178163559367555),
            (0.3, -0.30266853926582593442),
            (-2.0, -0.048900510708061119567),
            (20.0, 25615652.66405658882),
            (39.9, 5479032048901893.5262),
            (40.1, 6657825191607100.0358),
            (80.0, 7.0146000049047999696e+32),
        ];
        for (x, want) in cases {
            let got = ei(x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "Ei({x}) = {got}, want {want}");
        }
    }

    #[test]
    fn en_reference_values() {
        let cases = [
            (2, 0.5, 0.32664386232455301773),
            (2, 3.0, 0.010641925085272830742),
            (2, 60.0, 1.4130536860897960783e-28),
            (3, 0.5, 0.22160436427517845737),
            (4, 3.0, 0.0076650428999319222829),
            (5, 60.0, 1.3487080085310868804e-28),
        ];
        for (n, x, want) in cases {
            let got = expint_n(n, x).unwrap();
            assert!(((got - want) / want).abs() < 1e-12, "E_{n}({x}) = {got}");
        }
    }

    #[test]
    fn branch_cut_is_an_error() {
        assert!(matches!(e1(c(-2.0, 0.0)), Err(QbmError::BranchCut(_))));
        assert!(e1(c(0.0, 0.0)).is_err());
        assert!(ei(0.0).is_err());
    }

    #[test]
    fn pair_series_matches_direct_evaluation() {
        for w in [c(0.9, 0.1), c(0.3, 0.95), c(0.05, -0.7), c(0.99, 0.0)] {
            let (d, s) = scaled_pair(w).unwrap();
            let a = e1_scaled(w).unwrap();
            let b = ei_scaled_complex(w).unwrap();
            assert!((d - (a - b)).norm() < 1e-13, "{w}");
            assert!((s - (a + b)).norm() < 1e-13, "{w}");
        }
    }
}
