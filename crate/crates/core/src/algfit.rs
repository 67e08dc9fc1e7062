//! Detection of the algebraic relation `q(ξ) A^m(ξ, t) + p(ξ, t) = 0` along a
//! single direction.
//!
//! For fixed `ξ` only the ratio `p/q` is observable, so the fitted object is
//! a polynomial in `t` approximating `A^m` in a Chebyshev basis on the
//! rescaled profile window. The degree bound `deg p ≤ m(n−1)`, the root
//! structure `p ∝ (h(ξ) − t)^{m(n−1)/2} (h(−ξ) + t)^{m(n−1)/2}` and the
//! boundary exponent `(n−1)/2` are checked on top of the fit.

use std::fmt::Write as _;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::bodies::{chord_interval, support, Body, Direction};
use crate::chebyshev::{self, AffineMap};
use crate::error::{invalid, Error, Result};
use crate::linalg::{lstsq, relative};
use crate::sections::{section_volume, SectionProfile};

/// Residual below which a fit counts as an exact polynomial relation.
pub const DEFAULT_ACCEPT_TOL: f64 = 1e-6;
/// Residual above which a fit counts as a clear misfit.
pub const DEFAULT_REJECT_TOL: f64 = 1e-3;
/// Grid margin (fraction of the chord width) used for fitting profiles.
pub const DEFAULT_FIT_MARGIN: f64 = 0.02;
/// Coefficients below this fraction of the largest one are treated as zero
/// when reading off the effective degree.
pub const EFFECTIVE_DEGREE_TOL: f64 = 1e-9;
/// `root_structure` verdict threshold on the relative mismatch.
pub const ROOT_MISMATCH_TOL: f64 = 1e-8;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraicFitReport {
    pub xi: Direction,
    pub n: usize,
    pub m: usize,
    pub degree: usize,
    /// Chebyshev coefficients of the fitted polynomial in `s ∈ [−1, 1]`.
    pub coefficients: Vec<f64>,
    pub map: AffineMap,
    pub grid: Vec<f64>,
    pub relative_residual: f64,
    pub degree_bound_ok: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub root_report: Option<RootReport>,
}

impl AlgebraicFitReport {
    /// Value of the fitted polynomial at `t`.
    pub fn eval(&self, t: f64) -> f64 {
        chebyshev::eval(&self.coefficients, self.map.to_s(t))
    }

    pub fn degree_bound(&self) -> usize {
        self.m * (self.n - 1)
    }
}

/// Least-squares fit of `A^m` by `T₀ … T_degree` on the profile window.
pub fn fit_power_polynomial(
    profile: &SectionProfile,
    m: usize,
    degree: usize,
) -> Result<AlgebraicFitReport> {
    if m == 0 {
        return Err(invalid("m", "power must be at least 1"));
    }
    if profile.len() < 2 * (degree + 1) {
        return Err(invalid(
            "degree",
            format!(
                "degree {degree} needs at least {} samples, profile has {}",
                2 * (degree + 1),
                profile.len()
            ),
        ));
    }
    if profile.values.iter().all(|&v| v == 0.0) {
        return Err(Error::ZeroProfile);
    }
    let map = AffineMap::new(profile.grid[0], *profile.grid.last().unwrap());
    let samples = DVector::from_iterator(
        profile.len(),
        profile.values.iter().map(|a| a.powi(m as i32)),
    );
    let design = DMatrix::from_fn(profile.len(), degree + 1, |i, j| {
        chebyshev::basis(map.to_s(profile.grid[i]), degree)[j]
    });
    let sol = lstsq(&design, &samples)?;
    let n = profile.n;
    Ok(AlgebraicFitReport {
        xi: profile.xi.clone(),
        n,
        m,
        degree,
        coefficients: sol.coefficients.as_slice().to_vec(),
        map,
        grid: profile.grid.clone(),
        relative_residual: relative(sol.residual_norm, samples.norm()),
        degree_bound_ok: degree <= m * (n - 1),
        root_report: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub m: usize,
    pub degree: usize,
    pub relative_residual: f64,
}

/// Outcome of the minimal-power search.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MinPowerReport {
    pub tol: f64,
    pub m_max: usize,
    /// The first `m` whose fit at degree `m(n−1)` meets `tol`.
    pub accepted: Option<AlgebraicFitReport>,
    pub attempts: Vec<SweepRow>,
}

impl MinPowerReport {
    pub fn best_residual(&self) -> f64 {
        self.attempts
            .iter()
            .map(|r| r.relative_residual)
            .fold(f64::INFINITY, f64::min)
    }
}

/// Tries `m = 1 … m_max` at the bound degree `D = m(n−1)` and returns the
/// first fit with residual below `tol`.
pub fn detect_min_m(profile: &SectionProfile, m_max: usize, tol: f64) -> Result<MinPowerReport> {
    if m_max == 0 {
        return Err(invalid("m_max", "must be at least 1"));
    }
    if !(tol > 0.0) {
        return Err(invalid("tol", "must be positive"));
    }
    let mut attempts = Vec::with_capacity(m_max);
    for m in 1..=m_max {
        let fit = fit_power_polynomial(profile, m, m * (profile.n - 1))?;
        attempts.push(SweepRow {
            m,
            degree: fit.degree,
            relative_residual: fit.relative_residual,
        });
        if fit.relative_residual < tol {
            return Ok(MinPowerReport {
                tol,
                m_max,
                accepted: Some(fit),
                attempts,
            });
        }
    }
    Ok(MinPowerReport {
        tol,
        m_max,
        accepted: None,
        attempts,
    })
}

/// Residual grid over `1 ≤ m ≤ m_max`, `0 ≤ D ≤ d_max`.
pub fn sweep(profile: &SectionProfile, m_max: usize, d_max: usize) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::new();
    for m in 1..=m_max {
        for degree in 0..=d_max {
            let fit = fit_power_polynomial(profile, m, degree)?;
            rows.push(SweepRow {
                m,
                degree,
                relative_residual: fit.relative_residual,
            });
        }
    }
    Ok(rows)
}

/// CSV with columns `m,D,residual`.
pub fn sweep_csv(rows: &[SweepRow]) -> String {
    let mut out = String::from("m,D,residual\n");
    for r in rows {
        let _ = writeln!(out, "{},{},{:?}", r.m, r.degree, r.relative_residual);
    }
    out
}

/// Largest Chebyshev index whose coefficient exceeds
/// [`EFFECTIVE_DEGREE_TOL`] times the largest coefficient.
pub fn effective_degree(report: &AlgebraicFitReport) -> usize {
    effective_len(&report.coefficients).saturating_sub(1)
}

fn effective_len(coefficients: &[f64]) -> usize {
    let top = coefficients.iter().fold(0.0f64, |m, c| m.max(c.abs()));
    coefficients
        .iter()
        .rposition(|c| c.abs() > EFFECTIVE_DEGREE_TOL * top)
        .map_or(0, |i| i + 1)
}

/// `effective_degree ≤ m(n−1)`.
pub fn degree_bound_check(report: &AlgebraicFitReport, n: usize) -> bool {
    effective_degree(report) <= report.m * (n - 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RootVerdict {
    Conforms,
    Mismatch,
    StructurallyInfeasible,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RootReport {
    pub verdict: RootVerdict,
    /// Multiplicity `m(n−1)/2` expected at each end of the chord.
    pub multiplicity: f64,
    pub h_plus: f64,
    pub h_minus: f64,
    /// Best scalar `C` in `p ≈ C (h₊ − t)^μ (h₋ + t)^μ`.
    pub c: f64,
    pub mismatch: f64,
    /// Extreme real roots of `p^{(μ−1)}`, which carry the `μ`-fold roots.
    pub root_upper: Option<f64>,
    pub root_lower: Option<f64>,
    /// Root offsets from `h₊` and `−h₋` in units of the chord width.
    pub root_error_upper: Option<f64>,
    pub root_error_lower: Option<f64>,
}

impl RootReport {
    /// The coefficient `C(ξ)` of `A = C (h₊ − t)^{(n−1)/2} (h₋ + t)^{(n−1)/2}`.
    pub fn section_constant(&self, m: usize) -> f64 {
        self.c.abs().powf(1.0 / m as f64)
    }

    /// `C(ξ) · (width/2)^n`, the constant left after rescaling the chord to
    /// `[−1, 1]`; it is direction independent when the moment conditions hold.
    pub fn normalized_constant(&self, m: usize, n: usize) -> f64 {
        let half = 0.5 * (self.h_plus + self.h_minus);
        self.section_constant(m) * half.powi(n as i32)
    }
}

/// Fits the single scalar `C` in `p = C (h₊ − t)^μ (h₋ + t)^μ`, `μ = m(n−1)/2`,
/// and locates the `μ`-fold roots of the fitted polynomial.
pub fn root_structure(report: &AlgebraicFitReport, h_plus: f64, h_minus: f64) -> Result<RootReport> {
    let total = report.m * (report.n - 1);
    if total % 2 == 1 {
        return Ok(RootReport {
            verdict: RootVerdict::StructurallyInfeasible,
            multiplicity: total as f64 / 2.0,
            h_plus,
            h_minus,
            c: f64::NAN,
            mismatch: f64::NAN,
            root_upper: None,
            root_lower: None,
            root_error_upper: None,
            root_error_lower: None,
        });
    }
    let mu = total / 2;
    let p: Vec<f64> = report.grid.iter().map(|&t| report.eval(t)).collect();
    let g: Vec<f64> = report
        .grid
        .iter()
        .map(|&t| ((h_plus - t) * (h_minus + t)).powi(mu as i32))
        .collect();
    let pg: f64 = p.iter().zip(&g).map(|(a, b)| a * b).sum();
    let gg: f64 = g.iter().map(|b| b * b).sum();
    let c = pg / gg.max(1e-300);
    let diff: f64 = p
        .iter()
        .zip(&g)
        .map(|(a, b)| (a - c * b).powi(2))
        .sum::<f64>()
        .sqrt();
    let pnorm: f64 = p.iter().map(|a| a * a).sum::<f64>().sqrt();
    let mismatch = relative(diff, pnorm);

    let width = h_plus + h_minus;
    let (root_lower, root_upper) = match extreme_roots(report, mu) {
        Some((lo, hi)) => (Some(lo), Some(hi)),
        None => (None, None),
    };
    Ok(RootReport {
        verdict: if mismatch < ROOT_MISMATCH_TOL {
            RootVerdict::Conforms
        } else {
            RootVerdict::Mismatch
        },
        multiplicity: mu as f64,
        h_plus,
        h_minus,
        c,
        mismatch,
        root_upper,
        root_lower,
        root_error_upper: root_upper.map(|r| (r - h_plus).abs() / width),
        root_error_lower: root_lower.map(|r| (r + h_minus).abs() / width),
    })
}

/// Smallest and largest real roots (in `t`) of the `(μ−1)`-th derivative of
/// the fitted polynomial. A `μ`-fold root of `p` is a simple root there, so
/// these are well conditioned; by Gauss-Lucas they are the roots of `p`
/// bounding all others.
fn extreme_roots(report: &AlgebraicFitReport, mu: usize) -> Option<(f64, f64)> {
    let mut series = report.coefficients[..effective_len(&report.coefficients)].to_vec();
    for _ in 1..mu {
        series = chebyshev::derivative(&series);
    }
    let len = effective_len(&series);
    series.truncate(len);
    if len < 2 {
        return None;
    }
    let mono = chebyshev::to_monomial(&series);
    let deg = mono.len() - 1;
    let lead = mono[deg];
    let mut companion = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        companion[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        companion[(i, deg - 1)] = -mono[i] / lead;
    }
    let eig = companion.complex_eigenvalues();
    let real: Vec<f64> = eig
        .iter()
        .filter(|z| z.im.abs() <= 1e-6 * (1.0 + z.re.abs()))
        .map(|z| polish(&series, z.re))
        .collect();
    if real.is_empty() {
        return None;
    }
    let lo = real.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = real.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    Some((report.map.to_t(lo), report.map.to_t(hi)))
}

fn polish(series: &[f64], mut s: f64) -> f64 {
    let d = chebyshev::derivative(series);
    for _ in 0..8 {
        let f = chebyshev::eval(series, s);
        let df = chebyshev::eval(&d, s);
        if df == 0.0 {
            break;
        }
        let step = f / df;
        s -= step;
        if step.abs() < 1e-16 * (1.0 + s.abs()) {
            break;
        }
    }
    s
}

/// Power-law fit `A(ξ, t₀ − δ) ≈ c δ^κ` near the supporting hyperplane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticReport {
    pub xi: Direction,
    pub t0: f64,
    pub estimated_exponent: f64,
    pub estimated_constant: f64,
    /// `(n − 1)/2`.
    pub predicted_exponent: f64,
    /// `(δ_min, δ_max)` in units of `length_scale`.
    pub regression_window: (f64, f64),
    /// Chord width, or 1 when the chord is unbounded.
    pub length_scale: f64,
    pub num_points: usize,
}

pub const MIN_ASYMPTOTIC_POINTS: usize = 12;

/// Log-log regression of `A(ξ, t₀ − δ)` against `δ` at log-spaced depths.
pub fn exponent_estimate(
    body: &Body,
    xi: &Direction,
    window: (f64, f64),
    num_points: usize,
) -> Result<AsymptoticReport> {
    if !body.is_strictly_convex() {
        return Err(Error::Unsupported(
            "boundary asymptotics need a strictly convex body".into(),
        ));
    }
    let (dmin, dmax) = window;
    if !(dmin > 0.0 && dmin < dmax && dmax <= 0.1) {
        return Err(invalid(
            "window",
            "need 0 < delta_min < delta_max <= 0.1 (chord-width units)",
        ));
    }
    if num_points < MIN_ASYMPTOTIC_POINTS {
        return Err(invalid(
            "num_points",
            format!("need at least {MIN_ASYMPTOTIC_POINTS} points"),
        ));
    }
    let t0 = support(body, xi)?.finite()?;
    let length_scale = match chord_interval(body, xi) {
        Ok((lo, hi)) => hi - lo,
        Err(Error::InfiniteSupport) => 1.0,
        Err(e) => return Err(e),
    };
    let (lmin, lmax) = (dmin.ln(), dmax.ln());
    let mut xs = Vec::with_capacity(num_points);
    let mut ys = Vec::with_capacity(num_points);
    for i in 0..num_points {
        let frac = i as f64 / (num_points - 1) as f64;
        let depth = (lmin + frac * (lmax - lmin)).exp() * length_scale;
        let a = section_volume(body, xi, t0 - depth)?;
        if !(a >= 1e-300) {
            return Err(Error::Underflow { depth });
        }
        xs.push(depth.ln());
        ys.push(a.ln());
    }
    let (slope, intercept) = ols(&xs, &ys);
    Ok(AsymptoticReport {
        xi: xi.clone(),
        t0,
        estimated_exponent: slope,
        estimated_constant: intercept.exp(),
        predicted_exponent: (body.dim() - 1) as f64 / 2.0,
        regression_window: window,
        length_scale,
        num_points,
    })
}

fn ols(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    let slope = sxy / sxx;
    (slope, my - slope * mx)
}
