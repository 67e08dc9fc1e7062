//! Ellipsoid detection from support data.
//!
//! The odd part of the support function `h(ξ) − h(−ξ)` is fitted by a linear
//! form `e·ξ`; the centered support `H(ξ) = h(ξ) − ½ e·ξ` is then squared and
//! fitted by a quadratic form `ξᵀSξ`. Both fits are exact precisely for
//! ellipsoids, which are then `{x : (x − e/2)ᵀ S⁻¹ (x − e/2) ≤ 1}`.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{
    chord_interval, random_direction, sample_directions, seeded_rng, support, Body, Direction,
    Ellipsoid,
};
use crate::error::{invalid, Error, Result};
use crate::linalg::{lstsq, relative};
use crate::sections::{section_volume, section_volume_ellipsoid};

/// Default tolerances for exact support evaluations.
pub const DEFAULT_TOL_LINEAR: f64 = 1e-8;
pub const DEFAULT_TOL_QUADRATIC: f64 = 1e-8;
/// Loosened tolerance for support data derived from Monte Carlo profiles.
pub const MC_TOL: f64 = 1e-4;
pub const DEFAULT_DIRECTIONS: usize = 200;

fn supports(body: &Body, directions: &[Direction]) -> Result<Vec<(f64, f64)>> {
    directions
        .par_iter()
        .map(|xi| {
            let plus = support(body, xi)?.finite()?;
            let minus = support(body, &xi.neg())?.finite()?;
            Ok((plus, minus))
        })
        .collect()
}

/// Least-squares `e` in `h(ξ) − h(−ξ) = e·ξ`, with the relative residual.
pub fn estimate_e(body: &Body, num_directions: usize, seed: u64) -> Result<(DVector<f64>, f64)> {
    let n = body.dim();
    if num_directions < 2 * n {
        return Err(invalid(
            "num_directions",
            format!("need at least {} directions", 2 * n),
        ));
    }
    let directions = sample_directions(n, num_directions, seed);
    let h = supports(body, &directions)?;
    let a = DMatrix::from_fn(directions.len(), n, |i, j| directions[i][j]);
    let b = DVector::from_iterator(h.len(), h.iter().map(|(p, m)| p - m));
    let sol = lstsq(&a, &b)?;
    Ok((sol.coefficients, relative(sol.residual_norm, b.norm())))
}

fn pair_index(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (i..n).map(move |j| (i, j))).collect()
}

/// Least-squares symmetric `S` in `(h(ξ) − ½ e·ξ)² = ξᵀSξ`, with the
/// relative residual.
pub fn quadratic_fit(
    body: &Body,
    e: &DVector<f64>,
    num_directions: usize,
    seed: u64,
) -> Result<(DMatrix<f64>, f64)> {
    let n = body.dim();
    body.check_dim(e.len())?;
    let pairs = pair_index(n);
    if num_directions < 2 * pairs.len() {
        return Err(invalid(
            "num_directions",
            format!("need at least {} directions", 2 * pairs.len()),
        ));
    }
    let directions = sample_directions(n, num_directions, seed);
    let h = supports(body, &directions)?;
    let a = DMatrix::from_fn(directions.len(), pairs.len(), |r, c| {
        let (i, j) = pairs[c];
        let w = if i == j { 1.0 } else { 2.0 };
        w * directions[r][i] * directions[r][j]
    });
    let b = DVector::from_iterator(
        h.len(),
        directions.iter().zip(&h).map(|(xi, (plus, _))| {
            let centered = plus - 0.5 * xi.dot(e);
            centered * centered
        }),
    );
    let sol = lstsq(&a, &b)?;
    let mut s = DMatrix::zeros(n, n);
    for (c, &(i, j)) in pairs.iter().enumerate() {
        s[(i, j)] = sol.coefficients[c];
        s[(j, i)] = sol.coefficients[c];
    }
    Ok((s, relative(sol.residual_norm, b.norm())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EllipsoidReport {
    pub n: usize,
    pub verdict: Verdict,
    pub e: Vec<f64>,
    /// Row-major `S`.
    pub s: Vec<Vec<f64>>,
    pub linear_residual: f64,
    pub quadratic_residual: f64,
    pub s_positive_definite: bool,
    pub recovered_center: Vec<f64>,
    /// Row-major shape matrix `M = S⁻¹`, present when `S` is invertible.
    pub recovered_shape: Option<Vec<Vec<f64>>>,
    /// Largest relative deviation between the input support and the support
    /// of the recovered ellipsoid over the sampled directions.
    pub support_reproduction_error: Option<f64>,
    pub tol_linear: f64,
    pub tol_quadratic: f64,
    pub num_directions: usize,
    pub seed: u64,
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    m.row_iter().map(|r| r.iter().copied().collect()).collect()
}

fn from_rows(rows: &[Vec<f64>]) -> DMatrix<f64> {
    let n = rows.len();
    DMatrix::from_fn(n, n, |i, j| rows[i][j])
}

impl EllipsoidReport {
    pub fn s_matrix(&self) -> DMatrix<f64> {
        from_rows(&self.s)
    }

    pub fn center(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.recovered_center)
    }

    pub fn shape(&self) -> Option<DMatrix<f64>> {
        self.recovered_shape.as_deref().map(from_rows)
    }

    /// The recovered ellipsoid, when the verdict is accept.
    pub fn ellipsoid(&self) -> Option<Ellipsoid> {
        if self.verdict != Verdict::Accept {
            return None;
        }
        Ellipsoid::new(self.center(), self.shape()?).ok()
    }
}

/// Runs [`estimate_e`] and [`quadratic_fit`] and accepts iff both residuals
/// are below tolerance and `S` is positive definite.
pub fn is_ellipsoid(
    body: &Body,
    tol_linear: f64,
    tol_quadratic: f64,
    num_directions: usize,
    seed: u64,
) -> Result<EllipsoidReport> {
    if !(tol_linear > 0.0) || !(tol_quadratic > 0.0) {
        return Err(invalid("tol", "tolerances must be positive"));
    }
    let n = body.dim();
    let (e, linear_residual) = estimate_e(body, num_directions, seed)?;
    let (s, quadratic_residual) = quadratic_fit(body, &e, num_directions, seed)?;
    let s_positive_definite = s.clone().cholesky().is_some();
    let center = &e * 0.5;
    let shape = s.clone().try_inverse().map(|m| (&m + m.transpose()) * 0.5);

    let accept = linear_residual < tol_linear && quadratic_residual < tol_quadratic && s_positive_definite;
    let support_reproduction_error = match (&shape, s_positive_definite) {
        (Some(shape), true) => {
            let fitted = Ellipsoid::new(center.clone(), shape.clone())?;
            let directions = sample_directions(n, num_directions, seed);
            let h = supports(body, &directions)?;
            Some(
                directions
                    .iter()
                    .zip(&h)
                    .map(|(xi, (plus, minus))| {
                        (fitted.support(xi) - plus).abs() / (plus + minus)
                    })
                    .fold(0.0, f64::max),
            )
        }
        _ => None,
    };

    Ok(EllipsoidReport {
        n,
        verdict: if accept { Verdict::Accept } else { Verdict::Reject },
        e: e.as_slice().to_vec(),
        s: rows(&s),
        linear_residual,
        quadratic_residual,
        s_positive_definite,
        recovered_center: center.as_slice().to_vec(),
        recovered_shape: shape.as_ref().map(rows),
        support_reproduction_error,
        tol_linear,
        tol_quadratic,
        num_directions,
        seed,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConsistencyReport {
    pub num_probes: usize,
    pub seed: u64,
    /// `max |A_K − A_E| / A_K` over the probes.
    pub max_error: f64,
    /// Per-probe `C(ξ)·(width/2)^n` from the input body.
    pub normalized_constants: Vec<f64>,
    /// `(max − min)/mean` of the normalized constants.
    pub constant_spread: f64,
}

/// Tolerance on the direction spread of the normalized section constant.
pub const CONSTANT_SPREAD_TOL: f64 = 1e-8;

/// Compares the closed-form section function of the recovered ellipsoid with
/// the input body's exact section engine at random `(ξ, t)` probes.
pub fn section_consistency_check(
    body: &Body,
    report: &EllipsoidReport,
    num_probes: usize,
    seed: u64,
) -> Result<ConsistencyReport> {
    let recovered = report.ellipsoid().ok_or_else(|| {
        invalid("report", "section consistency needs an accepted report")
    })?;
    if num_probes == 0 {
        return Err(invalid("num_probes", "must be positive"));
    }
    let n = body.dim();
    if recovered.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: recovered.dim(),
        });
    }
    let mut rng = seeded_rng(seed);
    let probes: Vec<(Direction, f64)> = (0..num_probes)
        .map(|_| {
            let xi = random_direction(n, &mut rng);
            let u: f64 = rng.random_range(0.05..0.95);
            (xi, u)
        })
        .collect();
    let rows = probes
        .par_iter()
        .map(|(xi, u)| {
            let (lo, hi) = chord_interval(body, xi)?;
            let t = lo + u * (hi - lo);
            let actual = section_volume(body, xi, t)?;
            let predicted = section_volume_ellipsoid(&recovered, xi, t);
            let err = (actual - predicted).abs() / actual;
            let c = actual / ((hi - t) * (t - lo)).powf((n - 1) as f64 / 2.0);
            Ok((err, c * (0.5 * (hi - lo)).powi(n as i32)))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_error = rows.iter().map(|r| r.0).fold(0.0, f64::max);
    let constants: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let mean = constants.iter().sum::<f64>() / constants.len() as f64;
    let spread = (constants.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        - constants.iter().copied().fold(f64::INFINITY, f64::min))
        / mean;
    Ok(ConsistencyReport {
        num_probes,
        seed,
        max_error,
        normalized_constants: constants,
        constant_spread: spread,
    })
}
