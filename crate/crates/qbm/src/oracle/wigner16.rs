//! Projected-cat Wigner function from the full 16-term Gaussian
//! characteristic-function algebra, with no peak/fringe bookkeeping.

use crate::coefficients::{u_derivatives, BathStack};
use crate::error::Result;
use num_complex::Complex64 as C;
use std::f64::consts::PI;

/// Affine form c0 + c1·k + c2·l in the characteristic variables.
#[derive(Clone, Copy)]
struct Aff([C; 3]);

/// Quadratic form c0 + c1·(k,l) + (k,l)ᵀ c2 (k,l).
#[derive(Clone, Copy)]
struct Quad {
    c0: C,
    c1: [C; 2],
    c2: [[C; 2]; 2],
}

fn re(x: f64) -> C {
    C::new(x, 0.0)
}

impl Aff {
    fn new(c0: C, ck: f64, cl: f64) -> Self {
        Aff([c0, re(ck), re(cl)])
    }
    fn add(self, o: Aff) -> Aff {
        Aff([self.0[0] + o.0[0], self.0[1] + o.0[1], self.0[2] + o.0[2]])
    }
    fn scale(self, s: C) -> Aff {
        Aff([self.0[0] * s, self.0[1] * s, self.0[2] * s])
    }
    fn mul(self, o: Aff) -> Quad {
        let (a, b) = (self.0, o.0);
        let cross = (a[1] * b[2] + a[2] * b[1]) * 0.5;
        Quad {
            c0: a[0] * b[0],
            c1: [a[0] * b[1] + a[1] * b[0], a[0] * b[2] + a[2] * b[0]],
            c2: [[a[1] * b[1], cross], [cross, a[2] * b[2]]],
        }
    }
}

impl Quad {
    fn zero() -> Self {
        Quad { c0: re(0.0), c1: [re(0.0); 2], c2: [[re(0.0); 2]; 2] }
    }
    fn constant(c: C) -> Self {
        Quad { c0: c, ..Quad::zero() }
    }
    fn scale(self, s: C) -> Self {
        Quad {
            c0: self.c0 * s,
            c1: [self.c1[0] * s, self.c1[1] * s],
            c2: [[self.c2[0][0] * s, self.c2[0][1] * s], [self.c2[1][0] * s, self.c2[1][1] * s]],
        }
    }
    fn add(self, o: Quad) -> Self {
        Quad {
            c0: self.c0 + o.c0,
            c1: [self.c1[0] + o.c1[0], self.c1[1] + o.c1[1]],
            c2: [
                [self.c2[0][0] + o.c2[0][0], self.c2[0][1] + o.c2[0][1]],
                [self.c2[1][0] + o.c2[1][0], self.c2[1][1] + o.c2[1][1]],
            ],
        }
    }
}

fn sum(qs: &[Quad]) -> Quad {
    qs.iter().fold(Quad::zero(), |a, &q| a.add(q))
}

/// One Gaussian term of W: weight·N(μ, Σ) with complex mean μ.
#[derive(Clone, Copy, Debug)]
pub struct GaussTerm {
    pub signs: [i8; 4],
    pub log_weight: C,
    pub mean: [C; 2],
    pub cov: [[f64; 2]; 2],
}

impl GaussTerm {
    pub fn eval(&self, r: f64, p: f64) -> f64 {
        let s = self.cov;
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        let inv = [[s[1][1] / det, -s[0][1] / det], [-s[1][0] / det, s[0][0] / det]];
        let d = [re(r) - self.mean[0], re(p) - self.mean[1]];
        let q = d[0] * d[0] * inv[0][0] + d[0] * d[1] * (inv[0][1] + inv[1][0]) + d[1] * d[1] * inv[1][1];
        ((self.log_weight - q * 0.5).exp() / (2.0 * PI * det.sqrt())).re
    }

    /// Imaginary part of the mean mapped through Σ⁻¹: the fringe wave vector.
    pub fn wave_vector(&self) -> [f64; 2] {
        let s = self.cov;
        let det = s[0][0] * s[1][1] - s[0][1] * s[1][0];
        let m = [self.mean[0].im, self.mean[1].im];
        [(s[1][1] * m[0] - s[0][1] * m[1]) / det, (s[0][0] * m[1] - s[1][0] * m[0]) / det]
    }

    /// Suppression exponent relative to a peak term of weight `peak_log_weight`.
    pub fn exponent(&self, peak_log_weight: f64) -> f64 {
        let k = self.wave_vector();
        let m = [self.mean[0].im, self.mean[1].im];
        -(self.log_weight.re + 0.5 * (m[0] * k[0] + m[1] * k[1])) + peak_log_weight
    }
}

/// All 16 normalized terms of the projected-cat Wigner function at t.
pub fn terms(stack: &BathStack, l: f64, p0: f64, delta: f64, t: f64) -> Result<Vec<GaussTerm>> {
    let sc = stack.scalars(t)?;
    let (q2, p2) = (stack.eq.q2, stack.eq.p2);
    let [g, gd, gdd, _] = sc.g;
    let [s0, s1, s2, _] = sc.s;
    let ud = u_derivatives(&stack.eq, &sc);
    let i = C::new(0.0, 1.0);
    let d2 = delta * delta;
    let a = Aff::new(re(0.0), gd, gdd);
    let b = Aff::new(re(0.0), g, gd);
    let mq = Aff::new(re(0.0), (s0 - gd * q2) / q2, (s1 - gdd * q2) / q2);
    let mp = Aff::new(re(0.0), (-s1 - g * p2) / p2, (-s2 - gd * p2) / p2);
    let qu = Quad { c2: [[re(ud.u), re(ud.u_t)], [re(ud.u_t), re(ud.u_ttp)]], ..Quad::zero() };
    let v = qu.add(mp.mul(mp).scale(re(-p2)));
    let n2 = 1.0 / (PI * d2).sqrt();
    let diag = 1.0 / d2 + 1.0 / (4.0 * q2) + p2;
    let off = 1.0 / (4.0 * q2) - p2;
    let det_m = diag * diag - off * off;
    let mi = [[diag / det_m, -off / det_m], [-off / det_m, diag / det_m]];
    let log_const = -l * l / d2 + (n2 / (2.0 * PI * q2).sqrt()).ln() + (2.0 * PI / det_m.sqrt()).ln();
    let mut raw = Vec::with_capacity(16);
    for sa in [1.0, -1.0] {
        for sb in [1.0, -1.0] {
            let j = Aff::new(re(sa * l / d2 + sb * l / d2) + i * ((sb - sa) * p0), 0.0, 0.0)
                .add(b.scale(re(-1.0 / d2)))
                .add(a.scale(i));
            let bm = b.add(Aff::new(re(-sb * l), 0.0, 0.0));
            let lin = Quad { c1: [i * (sb * p0 * g), i * (sb * p0 * gd)], ..Quad::zero() };
            let x = sum(&[
                j.mul(j).scale(re(d2 / 4.0)),
                bm.mul(bm).scale(re(-1.0 / (2.0 * d2))),
                a.mul(b).scale(i * 0.5),
                Quad::constant(re(-l * l / (2.0 * d2))),
                lin,
            ]);
            for sg in [1.0, -1.0] {
                for sd in [1.0, -1.0] {
                    let half_mq = mq.scale(i * 0.5);
                    let j1 = Aff::new(re(sg * l / d2) - i * (sg * p0), 0.0, 0.0).add(half_mq).add(mp.scale(re(-p2)));
                    let j2 = Aff::new(re(sd * l / d2) + i * (sd * p0), 0.0, 0.0).add(half_mq).add(mp.scale(re(p2)));
                    let y = sum(&[
                        j1.mul(j1).scale(re(mi[0][0] / 2.0)),
                        j1.mul(j2).scale(re(mi[0][1])),
                        j2.mul(j2).scale(re(mi[1][1] / 2.0)),
                        Quad::constant(re(log_const)),
                        mp.mul(mp).scale(re(-p2 / 2.0)),
                        v.scale(re(-0.5)),
                    ]);
                    raw.push(([sa as i8, sb as i8, sg as i8, sd as i8], x.add(y)));
                }
            }
        }
    }
    let z: C = raw.iter().map(|(_, q)| q.c0.exp()).sum();
    let log_z = z.ln();
    Ok(raw
        .into_iter()
        .map(|(signs, q)| {
            let s01 = -(q.c2[0][1].re + q.c2[1][0].re);
            GaussTerm {
                signs,
                log_weight: q.c0 - log_z,
                mean: [-i * q.c1[0], -i * q.c1[1]],
                cov: [[-2.0 * q.c2[0][0].re, s01], [s01, -2.0 * q.c2[1][1].re]],
            }
        })
        .collect())
}

/// Sign patterns (sa, sb, sg, sd) of the four peaks and one member of each
/// interference pair.
pub const PEAK_SIGNS: [(&str, [i8; 4]); 4] =
    [("a", [1, 1, 1, 1]), ("b", [1, 1, -1, -1]), ("c", [-1, -1, -1, -1]), ("d", [-1, -1, 1, 1])];
pub const PAIR_SIGNS: [(&str, [i8; 4]); 6] = [
    ("ad", [1, -1, 1, 1]),
    ("bc", [1, -1, -1, -1]),
    ("ab", [1, 1, 1, -1]),
    ("cd", [-1, -1, 1, -1]),
    ("ac", [1, -1, 1, -1]),
    ("bd", [1, -1, -1, 1]),
];

pub fn find(terms: &[GaussTerm], signs: [i8; 4]) -> &GaussTerm {
    terms.iter().find(|t| t.signs == signs).expect("all 16 sign patterns present")
}

pub fn wigner(terms: &[GaussTerm], r: f64, p: f64) -> f64 {
    terms.iter().map(|t| t.eval(r, p)).sum()
}
