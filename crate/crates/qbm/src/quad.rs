//! Gauss–Legendre node sets for the main computational path.

use gauss_quad::GaussLegendre;
use std::num::NonZeroUsize;

/// Quadrature nodes and weights over some (possibly infinite) domain.
#[derive(Clone, Debug, Default)]
pub struct NodeSet {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

fn reference_rule(n: usize) -> Vec<(f64, f64)> {
    let n = NonZeroUsize::new(n.max(1)).unwrap();
    let mut pairs: Vec<(f64, f64)> = GaussLegendre::new(n).into_iter().collect();
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    pairs
}

impl NodeSet {
    /// Composite rule with `n` points on each panel `[breaks[i], breaks[i+1]]`.
    pub fn panels(breaks: &[f64], n: usize) -> Self {
        let rule = reference_rule(n);
        let mut out = NodeSet::default();
        for w in breaks.windows(2) {
            let (a, b) = (w[0], w[1]);
            let half = 0.5 * (b - a);
            let mid = 0.5 * (b + a);
            for &(x, wt) in &rule {
                out.nodes.push(mid + half * x);
                out.weights.push(half * wt);
            }
        }
        out
    }

    /// Rule for `[a, ∞)` through the substitution ν = a/x, x ∈ (0, 1].
    /// Exact for integrands behaving like polynomials in 1/ν beyond ν⁻².
    pub fn tail(a: f64, n: usize) -> Self {
        assert!(a > 0.0, "tail start must be positive");
        let inner = NodeSet::panels(&[0.0, 0.0625, 0.25, 0.5, 1.0], n);
        let mut out = NodeSet::default();
        for (&x, &w) in inner.nodes.iter().zip(&inner.weights) {
            out.nodes.push(a / x);
            out.weights.push(w * a / (x * x));
        }
        out
    }

    pub fn extend(&mut self, other: NodeSet) {
        self.nodes.extend(other.nodes);
        self.weights.extend(other.weights);
    }

    pub fn scaled(mut self, c: f64) -> Self {
        self.weights.iter_mut().for_each(|w| *w *= c);
        self
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Integral of `f` over `[a, b]` on `panels` equal panels of `n` points each.
pub fn integrate(f: impl FnMut(f64) -> f64, a: f64, b: f64, panels: usize, n: usize) -> f64 {
    let breaks: Vec<f64> = (0..=panels).map(|i| a + (b - a) * i as f64 / panels as f64).collect();
    NodeSet::panels(&breaks, n).integrate(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_exactness() {
        let v = integrate(|x| x.powi(9) - 3.0 * x * x, -1.0, 2.0, 1, 5);
        let exact = (2f64.powi(10) - 1.0) / 10.0 - (8.0 + 1.0);
        assert!((v - exact).abs() < 1e-12);
    }

    #[test]
    fn tail_rule() {
        let t = NodeSet::tail(3.0, 16);
        assert!((t.integrate(|x| 1.0 / (x * x)) - 1.0 / 3.0).abs() < 1e-14);
        let e = t.integrate(|x| (-x).exp());
        assert!((e - (-3f64).exp()).abs() < 1e-12);
    }
}
