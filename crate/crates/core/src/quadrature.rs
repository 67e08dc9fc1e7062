//! Gauss-Legendre quadrature.

use std::f64::consts::PI;

/// Nodes and weights of the `order`-point Gauss-Legendre rule on `[−1, 1]`.
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    /// Builds the rule by Newton iteration on `P_order` from Chebyshev-like
    /// initial guesses. Panics if `order == 0`.
    pub fn new(order: usize) -> Self {
        assert!(order > 0, "Gauss-Legendre order must be positive");
        let n = order;
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            let (_, d) = legendre_with_derivative(n, x);
            if d != 0.0 {
                dp = d;
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        if n % 2 == 1 {
            nodes[n / 2] = 0.0;
        }
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// `∫_a^b f(t) dt`.
    pub fn integrate<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let sum: f64 = self
            .nodes
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| w * f(mid + half * x))
            .sum();
        half * sum
    }

    /// `∫_a^b f(t) dt` split into sub-intervals at the given breakpoints.
    /// Breakpoints outside `(a, b)` are ignored, near-duplicates merged.
    pub fn integrate_split<F: Fn(f64) -> f64>(
        &self,
        a: f64,
        b: f64,
        breakpoints: &[f64],
        f: F,
    ) -> f64 {
        let tol = 1e-12 * (b - a).abs().max(1.0);
        let mut cuts: Vec<f64> = breakpoints
            .iter()
            .copied()
            .filter(|&t| t > a + tol && t < b - tol)
            .collect();
        cuts.sort_by(f64::total_cmp);
        let mut edges = vec![a];
        for t in cuts {
            if t - edges.last().unwrap() > tol {
                edges.push(t);
            }
        }
        edges.push(b);
        edges
            .windows(2)
            .map(|w| self.integrate(w[0], w[1], &f))
            .sum()
    }

    /// `∫_a^b f(t) dt` after the substitution `t = mid + half·sin θ`.
    ///
    /// Integrands that behave like `(b−t)^{α}(t−a)^{α}` with half-integer `α`
    /// become smooth in `θ`, which restores spectral convergence.
    pub fn integrate_sine_mapped<F: Fn(f64) -> f64>(&self, a: f64, b: f64, f: F) -> f64 {
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        self.integrate(-0.5 * PI, 0.5 * PI, |theta| {
            half * theta.cos() * f(mid + half * theta.sin())
        })
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    if n == 0 {
        return (1.0, 0.0);
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}
