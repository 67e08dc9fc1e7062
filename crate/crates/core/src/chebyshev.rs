//! Chebyshev series on `[−1, 1]` with an affine map to a `t`-interval.

use serde::{Deserialize, Serialize};

/// Affine map between `t ∈ [lo, hi]` and `s ∈ [−1, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AffineMap {
    pub lo: f64,
    pub hi: f64,
}

impl AffineMap {
    pub fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn to_s(&self, t: f64) -> f64 {
        (2.0 * t - self.lo - self.hi) / (self.hi - self.lo)
    }

    pub fn to_t(&self, s: f64) -> f64 {
        0.5 * (self.lo + self.hi) + 0.5 * (self.hi - self.lo) * s
    }

    /// `dt/ds`.
    pub fn half_width(&self) -> f64 {
        0.5 * (self.hi - self.lo)
    }
}

/// Values `T_0(s) … T_degree(s)`.
pub fn basis(s: f64, degree: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(degree + 1);
    out.push(1.0);
    if degree >= 1 {
        out.push(s);
    }
    for k in 2..=degree {
        let next = 2.0 * s * out[k - 1] - out[k - 2];
        out.push(next);
    }
    out
}

/// Clenshaw evaluation of `Σ c_k T_k(s)`.
pub fn eval(coefficients: &[f64], s: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coefficients.iter().skip(1).rev() {
        let b0 = 2.0 * s * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    match coefficients.first() {
        Some(&c0) => s * b1 - b2 + c0,
        None => 0.0,
    }
}

/// Coefficients of `d/ds Σ c_k T_k(s)`.
pub fn derivative(coefficients: &[f64]) -> Vec<f64> {
    let n = coefficients.len();
    if n <= 1 {
        return vec![0.0];
    }
    let mut d = vec![0.0; n + 1];
    for k in (1..n).rev() {
        d[k - 1] = d[k + 1] + 2.0 * k as f64 * coefficients[k];
    }
    d[0] *= 0.5;
    d.truncate(n - 1);
    d
}

/// Monomial coefficients (ascending powers of `s`) of a Chebyshev series.
pub fn to_monomial(coefficients: &[f64]) -> Vec<f64> {
    let n = coefficients.len();
    let mut out = vec![0.0; n.max(1)];
    // Rows of T_k in the monomial basis.
    let mut prev = vec![0.0; n.max(1)];
    let mut cur = vec![0.0; n.max(1)];
    for (k, &c) in coefficients.iter().enumerate() {
        let tk = match k {
            0 => {
                cur[0] = 1.0;
                cur.clone()
            }
            1 => {
                prev = cur.clone();
                cur = vec![0.0; n];
                cur[1] = 1.0;
                cur.clone()
            }
            _ => {
                let mut next = vec![0.0; n];
                for j in 0..n - 1 {
                    next[j + 1] += 2.0 * cur[j];
                }
                for j in 0..n {
                    next[j] -= prev[j];
                }
                prev = std::mem::replace(&mut cur, next);
                cur.clone()
            }
        };
        for j in 0..n {
            out[j] += c * tk[j];
        }
    }
    out
}
