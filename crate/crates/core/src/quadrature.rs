//! Quadrature rules: Gauss–Legendre panels and periodic rules on `[0, 2π)`.

use std::f64::consts::{PI, TAU};

/// Nodes and weights of the `n`-point Gauss–Legendre rule on `[-1, 1]`.
///
/// Newton iteration on the three-term recurrence, started from the
/// Chebyshev-like guess `cos(π(i - 1/4)/(n + 1/2))`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 1.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        dp = if d != 0.0 { d } else { dp };
        let w = 2.0 / ((1.0 - z * z) * dp * dp);
        nodes[i] = -z;
        nodes[n - 1 - i] = z;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}

/// A one-dimensional rule stored as `(node, weight)` pairs.
#[derive(Debug, Clone, Default)]
pub struct Rule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl Rule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&x, &w)| w * f(x))
            .sum()
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Composite Gauss–Legendre over the given panel endpoints.
    pub fn composite_gauss(edges: &[f64], order: usize) -> Self {
        let (gx, gw) = gauss_legendre(order);
        let mut rule = Rule::default();
        for pair in edges.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            if b <= a {
                continue;
            }
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for (x, w) in gx.iter().zip(&gw) {
                rule.nodes.push(mid + half * x);
                rule.weights.push(half * w);
            }
        }
        rule
    }

    /// Composite Gauss–Legendre on `[a, b]` with panels of width at most `max_width`.
    pub fn gauss_panels(a: f64, b: f64, max_width: f64, order: usize) -> Self {
        let panels = (((b - a) / max_width).ceil() as usize).max(1);
        let edges: Vec<f64> = (0..=panels)
            .map(|i| a + (b - a) * i as f64 / panels as f64)
            .collect();
        Self::composite_gauss(&edges, order)
    }

    /// Rule for `∫_a^b f(ρ) dρ` after the substitution `ρ = e^s`, so the
    /// weights include the Jacobian `ρ`. Suited to integrands with a power
    /// singularity at the origin.
    pub fn log_panels(a: f64, b: f64, max_log_width: f64, order: usize) -> Self {
        assert!(a > 0.0 && b > a);
        let s = Self::gauss_panels(a.ln(), b.ln(), max_log_width, order);
        let nodes: Vec<f64> = s.nodes.iter().map(|t| t.exp()).collect();
        let weights = s.weights.iter().zip(&nodes).map(|(w, r)| w * r).collect();
        Rule { nodes, weights }
    }
}

/// Periodic trapezoid rule with `n` equispaced nodes starting at `offset·2π/n`.
pub fn periodic_trapezoid(n: usize, offset: f64) -> Rule {
    let h = TAU / n as f64;
    Rule {
        nodes: (0..n).map(|i| (i as f64 + offset) * h).collect(),
        weights: vec![h; n],
    }
}

/// Rule on one period `[0, 2π)`.
///
/// Without breakpoints this is the `n`-point trapezoid rule, spectrally
/// accurate for smooth periodic integrands. With breakpoints (angles in
/// `[0, 2π)` where the integrand may jump) each arc between consecutive
/// breakpoints gets composite Gauss–Legendre panels of roughly `2π/n` width.
pub fn periodic_rule(n: usize, breaks: &[f64]) -> Rule {
    if breaks.is_empty() {
        return periodic_trapezoid(n, 0.0);
    }
    let mut b: Vec<f64> = breaks.iter().map(|t| t.rem_euclid(TAU)).collect();
    b.sort_by(f64::total_cmp);
    b.dedup_by(|x, y| (*x - *y).abs() < 1e-14);
    let order = 8;
    let width = (TAU * order as f64 / n as f64).max(1e-3);
    let mut rule = Rule::default();
    for i in 0..b.len() {
        let a0 = b[i];
        let a1 = if i + 1 < b.len() {
            b[i + 1]
        } else {
            b[0] + TAU
        };
        let r = Rule::gauss_panels(a0, a1, width, order);
        rule.nodes.extend(r.nodes.iter().map(|t| t.rem_euclid(TAU)));
        rule.weights.extend(r.weights);
    }
    rule
}
