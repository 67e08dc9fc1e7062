//! Power moments `M_k(ξ) = ∫ A_K(ξ, t) t^k dt` and the Radon range test:
//! each `M_k` must extend from the sphere to a homogeneous polynomial of
//! degree `k` in `ξ`.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{chord_interval, sample_directions, Body, Direction, Ellipsoid};
use crate::error::{invalid, Error, Result};
use crate::linalg::{lstsq, relative};
use crate::quadrature::GaussLegendre;
use crate::sections::{breakpoints, section_volume};

pub const DEFAULT_QUAD_ORDER: usize = 64;

/// Moment order above which the range test is not offered.
pub const MAX_MOMENT_ORDER: usize = 4;

/// `M_k(ξ)` by Gauss-Legendre quadrature over the chord interval.
///
/// Strictly convex bodies are integrated after a sine substitution that
/// absorbs the `(t₀ − t)^{(n−1)/2}` endpoint behaviour; polytopes are split
/// at the vertex heights where `A_K` changes polynomial piece.
pub fn moment(body: &Body, xi: &Direction, k: usize, quad_order: usize) -> Result<f64> {
    if quad_order == 0 {
        return Err(invalid("quad_order", "must be positive"));
    }
    if !body.is_bounded() {
        return Err(Error::InfiniteSupport);
    }
    let (lo, hi) = chord_interval(body, xi)?;
    let rule = GaussLegendre::new(quad_order);
    let integrand = |t: f64| section_volume(body, xi, t).unwrap_or(0.0) * t.powi(k as i32);
    Ok(match body {
        Body::Polytope(_) => rule.integrate_split(lo, hi, &breakpoints(body, xi), integrand),
        _ => rule.integrate_sine_mapped(lo, hi, integrand),
    })
}

/// `∫_lo^hi f(t) t^k dt` for an arbitrary section function, split at
/// `breakpoints`.
pub fn moment_of<F: Fn(f64) -> f64>(
    f: F,
    lo: f64,
    hi: f64,
    k: usize,
    quad_order: usize,
    breakpoints: &[f64],
) -> f64 {
    GaussLegendre::new(quad_order).integrate_split(lo, hi, breakpoints, |t| {
        f(t) * t.powi(k as i32)
    })
}

/// Exponent vectors of the monomials of exact degree `k` in `n` variables,
/// in graded-lexicographic order (`x₁^k` first).
pub fn monomials(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(n: usize, k: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n - 1 {
            prefix.push(k);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=k).rev() {
            prefix.push(e);
            rec(n, k - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, k, &mut Vec::with_capacity(n), &mut out);
    out
}

fn monomial_value(xi: &[f64], exps: &[usize]) -> f64 {
    xi.iter().zip(exps).map(|(x, &e)| x.powi(e as i32)).product()
}

/// Least-squares homogeneous fit of sampled values.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HomogeneousFit {
    pub exponents: Vec<Vec<usize>>,
    pub coefficients: Vec<f64>,
    /// `‖fit − values‖₂`.
    pub residual_norm: f64,
    /// `‖fit − values‖₂ / max(‖values‖₂, 1e−300)`.
    pub relative_residual: f64,
}

pub fn fit_homogeneous(directions: &[Direction], values: &[f64], k: usize) -> Result<HomogeneousFit> {
    let n = directions
        .first()
        .map(Direction::dim)
        .ok_or_else(|| invalid("directions", "no directions"))?;
    let exponents = monomials(n, k);
    let a = DMatrix::from_fn(directions.len(), exponents.len(), |i, j| {
        monomial_value(directions[i].as_slice(), &exponents[j])
    });
    let b = DVector::from_column_slice(values);
    let sol = lstsq(&a, &b)?;
    Ok(HomogeneousFit {
        exponents,
        coefficients: sol.coefficients.as_slice().to_vec(),
        residual_norm: sol.residual_norm,
        relative_residual: relative(sol.residual_norm, b.norm()),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    pub k: usize,
    pub n: usize,
    pub seed: u64,
    pub quad_order: usize,
    pub directions: Vec<Direction>,
    pub moments: Vec<f64>,
    pub exponents: Vec<Vec<usize>>,
    pub fit_coefficients: Vec<f64>,
    pub residual_norm: f64,
    pub relative_residual: f64,
}

impl MomentReport {
    /// Columns `xi1 … xin, M`.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        let header: Vec<String> = (1..=self.n).map(|i| format!("xi{i}")).collect();
        let _ = writeln!(out, "{},M", header.join(","));
        for (xi, m) in self.directions.iter().zip(&self.moments) {
            let cols: Vec<String> = xi.as_slice().iter().map(|v| format!("{v:?}")).collect();
            let _ = writeln!(out, "{},{m:?}", cols.join(","));
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// Samples `M_k` on a direction set and fits a homogeneous degree-`k`
/// polynomial. For every convex body the residual sits at quadrature level.
pub fn range_test(
    body: &Body,
    k: usize,
    num_directions: usize,
    seed: u64,
    quad_order: usize,
) -> Result<MomentReport> {
    if k > MAX_MOMENT_ORDER {
        return Err(invalid("k", format!("moment order must be <= {MAX_MOMENT_ORDER}")));
    }
    let n = body.dim();
    let needed = 2 * monomials(n, k).len();
    if num_directions < needed {
        return Err(invalid(
            "num_directions",
            format!("need at least {needed} directions for k = {k}"),
        ));
    }
    let directions = sample_directions(n, num_directions, seed);
    let moments = directions
        .par_iter()
        .map(|xi| moment(body, xi, k, quad_order))
        .collect::<Result<Vec<f64>>>()?;
    let fit = fit_homogeneous(&directions, &moments, k)?;
    Ok(MomentReport {
        k,
        n,
        seed,
        quad_order,
        directions,
        moments,
        exponents: fit.exponents,
        fit_coefficients: fit.coefficients,
        residual_norm: fit.residual_norm,
        relative_residual: fit.relative_residual,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CenteredMomentReport {
    pub directions: Vec<Direction>,
    pub m0: Vec<f64>,
    pub m1: Vec<f64>,
    /// `M₀(ξ)·(c·ξ)`.
    pub predicted_m1: Vec<f64>,
    /// `max |M₁ − M₀ c·ξ| / (M₀ (|c·ξ| + h̄(ξ)))`.
    pub max_relative_error: f64,
    pub passed: bool,
}

pub const CENTERED_MOMENT_TOL: f64 = 1e-8;

/// Checks `M₁(ξ) = M₀ · (c·ξ)`: the first moment only sees the midpoint
/// `(h(ξ) − h(−ξ))/2` of the chord interval.
pub fn centered_moment_identity_check(
    e: &Ellipsoid,
    num_directions: usize,
    seed: u64,
) -> Result<CenteredMomentReport> {
    let body = Body::Ellipsoid(e.clone());
    let directions = sample_directions(e.dim(), num_directions, seed);
    let rows = directions
        .par_iter()
        .map(|xi| {
            let m0 = moment(&body, xi, 0, DEFAULT_QUAD_ORDER)?;
            let m1 = moment(&body, xi, 1, DEFAULT_QUAD_ORDER)?;
            let shift = e.center().dot(xi.as_vector());
            let scale = m0 * (shift.abs() + e.centered_support_vec(xi.as_vector()));
            Ok((m0, m1, m0 * shift, (m1 - m0 * shift).abs() / scale))
        })
        .collect::<Result<Vec<_>>>()?;
    let max_relative_error = rows.iter().map(|r| r.3).fold(0.0, f64::max);
    Ok(CenteredMomentReport {
        directions,
        m0: rows.iter().map(|r| r.0).collect(),
        m1: rows.iter().map(|r| r.1).collect(),
        predicted_m1: rows.iter().map(|r| r.2).collect(),
        max_relative_error,
        passed: max_relative_error < CENTERED_MOMENT_TOL,
    })
}
