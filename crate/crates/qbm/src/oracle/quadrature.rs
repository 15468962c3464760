//! Adaptive Gauss–Kronrod (7/15) and oscillatory Fourier integrals with
//! Wynn-epsilon extrapolation. Deliberately separate from the main path's
//! fixed Gauss–Legendre panels.

use std::f64::consts::PI;

const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

/// One G7K15 panel: (Kronrod estimate, |Kronrod − Gauss|).
fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c);
    let mut k = fc * WGK[7];
    let mut g = fc * WG[3];
    for j in 0..7 {
        let x = h * XGK[j];
        let s = f(c - x) + f(c + x);
        k += WGK[j] * s;
        if j % 2 == 1 {
            g += WG[j / 2] * s;
        }
    }
    (k * h, ((k - g) * h).abs())
}

/// Globally adaptive G7K15 on [a, b]. Returns (value, error estimate).
pub fn adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, abs_tol: f64, rel_tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let mut panels = vec![{
        let (v, e) = gk15(f, a, b);
        (a, b, v, e)
    }];
    for _ in 0..4000 {
        let total: f64 = panels.iter().map(|p| p.2).sum();
        let err: f64 = panels.iter().map(|p| p.3).sum();
        if err <= abs_tol.max(rel_tol * total.abs()) {
            break;
        }
        let (i, _) = panels.iter().enumerate().max_by(|x, y| x.1 .3.total_cmp(&y.1 .3)).expect("non-empty");
        let (lo, hi, _, _) = panels.swap_remove(i);
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let (v1, e1) = gk15(f, lo, mid);
        let (v2, e2) = gk15(f, mid, hi);
        panels.push((lo, mid, v1, e1));
        panels.push((mid, hi, v2, e2));
    }
    (panels.iter().map(|p| p.2).sum(), panels.iter().map(|p| p.3).sum())
}

/// Sum of adaptive integrals over consecutive breakpoints.
pub fn adaptive_breaks<F: Fn(f64) -> f64>(f: &F, breaks: &[f64], abs_tol: f64, rel_tol: f64) -> f64 {
    breaks.windows(2).map(|w| adaptive(f, w[0], w[1], abs_tol, rel_tol).0).sum()
}

/// ∫_a^∞ f via x = a/y, y ∈ (0, 1].
pub fn adaptive_tail<F: Fn(f64) -> f64>(f: &F, a: f64, abs_tol: f64, rel_tol: f64) -> f64 {
    let g = |y: f64| if y <= 0.0 { 0.0 } else { f(a / y) * a / (y * y) };
    adaptive_breaks(&g, &[0.0, 1e-4, 1e-2, 0.1, 1.0], abs_tol, rel_tol)
}

/// Wynn epsilon extrapolation of a sequence of partial sums.
pub fn wynn_epsilon(s: &[f64]) -> f64 {
    let n = s.len();
    if n < 3 {
        return *s.last().unwrap_or(&0.0);
    }
    let mut prev = vec![0.0; n + 1];
    let mut cur: Vec<f64> = s.to_vec();
    let mut best = s[n - 1];
    let mut k = 0;
    while cur.len() > 1 {
        let next: Vec<f64> = (0..cur.len() - 1)
            .map(|j| {
                let d = cur[j + 1] - cur[j];
                let p = if k == 0 { 0.0 } else { prev[j + 1] };
                if d == 0.0 {
                    f64::INFINITY
                } else {
                    p + 1.0 / d
                }
            })
            .collect();
        if next.iter().any(|x| !x.is_finite()) {
            break;
        }
        prev = cur;
        cur = next;
        k += 1;
        if k % 2 == 0 {
            best = *cur.last().unwrap();
        }
    }
    best
}

/// ∫_0^∞ f(w) cos(wt) dw (or sin when `sine`), with f smooth and decaying.
/// Breakpoints cover the non-oscillatory scales; beyond `w_split` the
/// integral is summed over half periods and extrapolated.
pub fn fourier<F: Fn(f64) -> f64>(f: &F, t: f64, sine: bool, breaks: &[f64], tol: f64) -> f64 {
    let trig = |w: f64| if sine { (w * t).sin() } else { (w * t).cos() };
    let g = |w: f64| f(w) * trig(w);
    let last = *breaks.last().expect("breaks");
    if t == 0.0 {
        let head = adaptive_breaks(&g, breaks, tol * 1e-3, tol);
        return head + adaptive_tail(&f, last, tol * 1e-3, tol);
    }
    // keep each adaptive panel within ~20 periods
    let chunk = 40.0 * PI / t;
    let mut fine = vec![breaks[0]];
    for w in breaks.windows(2) {
        let n = ((w[1] - w[0]) / chunk).ceil().max(1.0) as usize;
        fine.extend((1..=n).map(|k| w[0] + (w[1] - w[0]) * k as f64 / n as f64));
    }
    let head = adaptive_breaks(&g, &fine, tol * 1e-3, tol);
    let half = PI / t;
    // align the first tail endpoint to a zero of the trig factor
    let offset = if sine { 0.0 } else { 0.5 * half };
    let first = ((last - offset) / half).ceil() * half + offset;
    let mut partial = vec![head + adaptive(&g, last, first, tol * 1e-3, tol).0];
    let mut acc = partial[0];
    let mut a = first;
    for _ in 0..60 {
        let b = a + half;
        acc += adaptive(&g, a, b, tol * 1e-4, tol * 1e-2).0;
        partial.push(acc);
        a = b;
    }
    wynn_epsilon(&partial)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gauss_kronrod_integrates_smooth_functions() {
        let (v, _) = adaptive(&|x: f64| x.sin(), 0.0, PI, 1e-14, 1e-14);
        assert!((v - 2.0).abs() < 1e-13);
        let (v, _) = adaptive(&|x: f64| 1.0 / x.sqrt(), 0.0, 1.0, 1e-12, 1e-12);
        assert!((v - 2.0).abs() < 1e-8);
        assert!((adaptive_tail(&|x: f64| (-x).exp(), 1.0, 1e-14, 1e-12) - (-1f64).exp()).abs() < 1e-11);
    }

    #[test]
    fn fourier_of_lorentzian() {
        // ∫ cos(wt)/(1+w²) = π e^{−t}/2
        let f = |w: f64| 1.0 / (1.0 + w * w);
        for t in [0.3, 1.0, 4.0] {
            let v = fourier(&f, t, false, &[0.0, 1.0, 10.0], 1e-12);
            assert!((v - 0.5 * PI * (-t).exp()).abs() < 1e-9, "{t} {v}");
        }
        // ∫ sin(wt)/w = π/2
        let v = fourier(&|w: f64| 1.0 / w, 2.0, true, &[0.0, 5.0], 1e-12);
        assert!((v - 0.5 * PI).abs() < 1e-8, "{v}");
    }
}
