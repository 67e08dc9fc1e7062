//! Independent oracles shared by the integration tests. Nothing here calls
//! into the section or moment engines.
#![allow(dead_code)]

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use tomoslice::bodies::{seeded_rng, Direction, Ellipsoid};
use tomoslice::linalg::orthonormal_complement;

/// `Γ(x)` for positive integers and half-integers.
pub fn gamma_half(x: f64) -> f64 {
    let twice = (2.0 * x).round() as i64;
    assert!((twice as f64 - 2.0 * x).abs() < 1e-12 && twice > 0);
    if twice % 2 == 0 {
        (1..twice / 2).map(|k| k as f64).product()
    } else {
        let mut g = PI.sqrt();
        let mut y = 0.5;
        while y < x - 1e-12 {
            g *= y;
            y += 1.0;
        }
        g
    }
}

/// `π^{d/2} / Γ(d/2 + 1)`.
pub fn ball_volume(d: usize) -> f64 {
    PI.powf(d as f64 / 2.0) / gamma_half(d as f64 / 2.0 + 1.0)
}

/// `∫_{−1}^{1} (1 − s²)^a s^{2j} ds = B(j + 1/2, a + 1)`.
pub fn beta_moment(a: f64, j: usize) -> f64 {
    gamma_half(j as f64 + 0.5) * gamma_half(a + 1.0) / gamma_half(j as f64 + a + 1.5)
}

/// Closed-form `M_k(ξ)` of an ellipsoid for `k ≤ 2`, from
/// `A = C (h̄² − (t − c·ξ)²)^{(n−1)/2}` with `C = ω_{n−1} det(M)^{−1/2} h̄^{−n}`.
pub fn ellipsoid_moment(e: &Ellipsoid, xi: &Direction, k: usize) -> f64 {
    let n = e.dim();
    let minv = e.shape().clone().try_inverse().unwrap();
    let hbar = xi.as_vector().dot(&(&minv * xi.as_vector())).sqrt();
    let c = e.center().dot(xi.as_vector());
    let det = e.shape().determinant();
    let a = (n as f64 - 1.0) / 2.0;
    let scale = ball_volume(n - 1) / det.sqrt();
    let i0 = beta_moment(a, 0);
    let i1 = beta_moment(a, 1);
    match k {
        0 => scale * i0,
        1 => scale * c * i0,
        2 => scale * (hbar * hbar * i1 + c * c * i0),
        _ => unimplemented!("oracle covers k <= 2"),
    }
}

/// Larger root `s` of `(p + sξ − c)ᵀ M (p + sξ − c) = 1`.
fn boundary_height(e: &Ellipsoid, p: &DVector<f64>, xi: &DVector<f64>) -> f64 {
    let m = e.shape();
    let d = p - e.center();
    let a = xi.dot(&(m * xi));
    let b = xi.dot(&(m * &d));
    let c = d.dot(&(m * &d)) - 1.0;
    (-b + (b * b - a * c).sqrt()) / a
}

/// Predicted `c` in `A(ξ, t₀ − δ) ≈ c δ^{(n−1)/2}` from principal
/// curvatures measured by central finite differences of the boundary graph
/// over the tangent plane: `c = ω_{n−1} 2^{(n−1)/2} / sqrt(κ₁⋯κ_{n−1})`.
pub fn curvature_constant(e: &Ellipsoid, xi: &Direction) -> f64 {
    let n = e.dim();
    let x = xi.as_vector();
    // tangency point: maximize x·ξ over the boundary parametrized by the
    // Cholesky factor, refined by the boundary graph itself
    let a = e.maximizer(xi);
    let u = orthonormal_complement(x);
    let width = 2.0 * x.dot(&(e.shape().clone().try_inverse().unwrap() * x)).sqrt();
    let h = 1e-3 * width;
    let psi = |y: &DVector<f64>| boundary_height(e, &(&a + &u * y), x);
    let d = n - 1;
    let mut hess = DMatrix::zeros(d, d);
    let f0 = psi(&DVector::zeros(d));
    for i in 0..d {
        let mut ei = DVector::zeros(d);
        ei[i] = h;
        hess[(i, i)] = (psi(&ei) - 2.0 * f0 + psi(&-&ei)) / (h * h);
        for j in 0..i {
            let mut ej = DVector::zeros(d);
            ej[j] = h;
            let v = (psi(&(&ei + &ej)) - psi(&(&ei - &ej)) - psi(&(&ej - &ei)) + psi(&(-&ei - &ej)))
                / (4.0 * h * h);
            hess[(i, j)] = v;
            hess[(j, i)] = v;
        }
    }
    let kappa_product = (-hess).determinant();
    ball_volume(d) * 2f64.powf(d as f64 / 2.0) / kappa_product.sqrt()
}

/// Brute-force `max x·ξ` over boundary points `c + L^{−T} w`, `|w| = 1`.
pub fn sampled_support(e: &Ellipsoid, xi: &Direction, samples: usize, seed: u64) -> f64 {
    use rand_distr_shim::normal_vec;
    let n = e.dim();
    let chol = e.shape().clone().cholesky().unwrap();
    let lt_inv = chol.l().transpose().try_inverse().unwrap();
    let mut rng = seeded_rng(seed);
    (0..samples)
        .map(|_| {
            let w = normal_vec(n, &mut rng).normalize();
            (e.center() + &lt_inv * w).dot(xi.as_vector())
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

mod rand_distr_shim {
    use nalgebra::DVector;
    use rand::Rng;

    /// Box-Muller normals.
    pub fn normal_vec<R: Rng>(n: usize, rng: &mut R) -> DVector<f64> {
        DVector::from_fn(n, |_, _| {
            let u1: f64 = rng.random_range(f64::EPSILON..1.0);
            let u2: f64 = rng.random::<f64>();
            (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
        })
    }
}
