//! Small dense linear-algebra helpers shared by the fitting routines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Relative threshold on `|R_ii| / max|R_jj|` below which a column is
/// treated as linearly dependent.
const RANK_TOL: f64 = 1e-12;

/// Solution of a dense least-squares problem.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    pub coefficients: DVector<f64>,
    pub fitted: DVector<f64>,
    /// `‖A x − b‖₂`.
    pub residual_norm: f64,
}

/// Solves `min ‖A x − b‖₂` by Householder QR.
pub fn lstsq(a: &DMatrix<f64>, b: &DVector<f64>) -> Result<LeastSquares> {
    let (rows, cols) = a.shape();
    if rows < cols || cols == 0 {
        return Err(Error::RankDeficient { rows, cols });
    }
    let qr = a.clone().qr();
    let r = qr.r();
    let scale = (0..cols).map(|i| r[(i, i)].abs()).fold(0.0, f64::max);
    if scale == 0.0 || (0..cols).any(|i| r[(i, i)].abs() <= RANK_TOL * scale) {
        return Err(Error::RankDeficient { rows, cols });
    }
    let qtb = qr.q().transpose() * b;
    let coefficients = r
        .solve_upper_triangular(&qtb)
        .ok_or(Error::RankDeficient { rows, cols })?;
    let fitted = a * &coefficients;
    let residual_norm = (&fitted - b).norm();
    Ok(LeastSquares {
        coefficients,
        fitted,
        residual_norm,
    })
}

/// `‖x‖₂ / max(‖y‖₂, 1e−300)`.
pub fn relative(num: f64, den: f64) -> f64 {
    num / den.max(1e-300)
}

/// Lower Cholesky factor of a symmetric matrix, `None` unless positive definite.
pub fn cholesky(m: &DMatrix<f64>) -> Option<DMatrix<f64>> {
    m.clone().cholesky().map(|c| c.l())
}

/// Orthonormal basis of the complement of the unit vector `xi`, as the
/// columns of an `n × (n−1)` matrix.
pub fn orthonormal_complement(xi: &DVector<f64>) -> DMatrix<f64> {
    let n = xi.len();
    // Householder reflection mapping e_k to ±xi, with k the largest component.
    let k = xi.iamax();
    let sign = if xi[k] >= 0.0 { 1.0 } else { -1.0 };
    let mut v = xi.clone() * sign;
    v[k] += 1.0;
    let vv = v.norm_squared();
    let h = DMatrix::<f64>::identity(n, n) - (&v * v.transpose()) * (2.0 / vv);
    let mut basis = DMatrix::<f64>::zeros(n, n - 1);
    let mut col = 0;
    for j in 0..n {
        if j == k {
            continue;
        }
        basis.set_column(col, &h.column(j));
        col += 1;
    }
    basis
}

/// Volume of the unit ball in `R^d`.
pub fn unit_ball_volume(d: usize) -> f64 {
    // ω_0 = 1, ω_1 = 2, ω_d = 2π/d · ω_{d−2}
    let mut even = 1.0;
    let mut odd = 2.0;
    let mut k = 0;
    while k + 2 <= d {
        k += 2;
        even *= 2.0 * std::f64::consts::PI / k as f64;
    }
    let mut k = 1;
    while k + 2 <= d {
        k += 2;
        odd *= 2.0 * std::f64::consts::PI / k as f64;
    }
    if d.is_multiple_of(2) {
        even
    } else {
        odd
    }
}
