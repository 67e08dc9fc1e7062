//! Section volume function `A_K(ξ, t) = Vol_{n−1}(K ∩ {x·ξ = t})`.
//!
//! Exact engines exist for every body type: a closed form for ellipsoids, an
//! edge-crossing slicer for polytopes in dimensions 2 and 3, and an in-plane
//! affine reduction for quadric domains. [`section_volume_mc`] is an
//! independent Monte Carlo slab estimator used to validate them.

mod mc;
mod profile;

pub use mc::{section_volume_mc, McEstimate, DEFAULT_HALFWIDTH_FRACTION};
pub use profile::{chebyshev_grid, profile, profile_window, SectionMethod, SectionProfile};

use nalgebra::DVector;

use crate::bodies::{chord_interval, polygon_area, Body, Direction, Ellipsoid, Polytope, QuadricDomain, QuadricKind};
use crate::error::{Error, Result};
use crate::linalg::{orthonormal_complement, unit_ball_volume};

/// `ω_{n−1} det(M)^{−1/2} h̄^{−n} (h̄² − (t − c·ξ)²)^{(n−1)/2}` inside the
/// chord interval, `0` outside.
pub fn section_volume_ellipsoid(e: &Ellipsoid, xi: &Direction, t: f64) -> f64 {
    let n = e.dim();
    let h = e.centered_support_vec(xi.as_vector());
    let u = t - e.center().dot(xi.as_vector());
    let gap = h * h - u * u;
    if gap <= 0.0 {
        return 0.0;
    }
    let exponent = (n - 1) as f64 / 2.0;
    unit_ball_volume(n - 1) / e.det_shape().sqrt() * h.powi(-(n as i32)) * gap.powf(exponent)
}

/// Exact polytope slice: segment length for `n = 2`, polygon area for `n = 3`.
///
/// At `t` equal to a support value whose face is parallel to the plane, the
/// result is the measure of that face.
pub fn section_volume_polytope(p: &Polytope, xi: &Direction, t: f64) -> f64 {
    let verts = p.vertices();
    let dist: Vec<f64> = verts.iter().map(|v| xi.dot(v) - t).collect();
    let mut points: Vec<DVector<f64>> = Vec::new();
    for (i, vi) in verts.iter().enumerate() {
        if dist[i] == 0.0 {
            points.push(vi.clone());
        }
        for (j, vj) in verts.iter().enumerate().skip(i + 1) {
            if (dist[i] < 0.0 && dist[j] > 0.0) || (dist[i] > 0.0 && dist[j] < 0.0) {
                let lambda = dist[i] / (dist[i] - dist[j]);
                points.push(vi + (vj - vi) * lambda);
            }
        }
    }
    if points.len() < 2 {
        return 0.0;
    }
    let basis = orthonormal_complement(xi.as_vector());
    let planar: Vec<DVector<f64>> = points.iter().map(|x| basis.transpose() * x).collect();
    match p.dim() {
        2 => {
            let lo = planar.iter().map(|z| z[0]).fold(f64::INFINITY, f64::min);
            let hi = planar.iter().map(|z| z[0]).fold(f64::NEG_INFINITY, f64::max);
            hi - lo
        }
        _ => polygon_area(&planar),
    }
}

/// Exact slice of a quadric domain, reduced in the hyperplane to a centered
/// ellipsoid. Fails with [`Error::UnboundedSlice`] when `ξ` lies outside the
/// cone of bounded slices.
pub fn section_volume_quadric(q: &QuadricDomain, xi: &Direction, t: f64) -> Result<f64> {
    let n = q.dim();
    if xi.dim() != n {
        return Err(Error::DimensionMismatch {
            expected: n,
            got: xi.dim(),
        });
    }
    if !q.slice_bounded(xi) {
        return Err(Error::UnboundedSlice);
    }
    let (qm, b, c0) = q.quadratic_form();
    let x = xi.as_vector();
    let tau = t - q.offset().dot(x);
    let basis = orthonormal_complement(x);
    let a = basis.transpose() * &qm * &basis;
    let a = (&a + a.transpose()) * 0.5;
    let g = (basis.transpose() * (&qm * x)) * (2.0 * tau) + basis.transpose() * &b;
    let kappa = tau * tau * x.dot(&(&qm * x)) + tau * b.dot(x) + c0;
    let chol = a.clone().cholesky().ok_or(Error::UnboundedSlice)?;
    let a_inv_g = chol.solve(&g);
    let r = 0.25 * g.dot(&a_inv_g) - kappa;
    if r <= 0.0 {
        return Ok(0.0);
    }
    if let QuadricKind::HyperboloidSheet { .. } = q.kind() {
        let center = x * tau - &basis * (a_inv_g * 0.5);
        if center[n - 1] < 0.0 {
            return Ok(0.0);
        }
    }
    let det: f64 = chol.l().diagonal().iter().map(|d| d * d).product();
    Ok(unit_ball_volume(n - 1) * r.powf((n - 1) as f64 / 2.0) / det.sqrt())
}

/// Dispatches to the exact engine for the body type.
pub fn section_volume(body: &Body, xi: &Direction, t: f64) -> Result<f64> {
    body.check_dim(xi.dim())?;
    match body {
        Body::Ellipsoid(e) => Ok(section_volume_ellipsoid(e, xi, t)),
        Body::Polytope(p) => Ok(section_volume_polytope(p, xi, t)),
        Body::Quadric(q) => section_volume_quadric(q, xi, t),
    }
}

/// Values of `t` where the slice combinatorics change (polytope vertices).
pub fn breakpoints(body: &Body, xi: &Direction) -> Vec<f64> {
    match body {
        Body::Polytope(p) => {
            let mut ts: Vec<f64> = p.vertices().iter().map(|v| xi.dot(v)).collect();
            ts.sort_by(f64::total_cmp);
            ts.dedup();
            ts
        }
        _ => Vec::new(),
    }
}

/// Chord width `h_K(ξ) + h_K(−ξ)`.
pub fn chord_width(body: &Body, xi: &Direction) -> Result<f64> {
    let (lo, hi) = chord_interval(body, xi)?;
    Ok(hi - lo)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn ellipsoid_examples() {
        let ball = Ellipsoid::unit_ball(3);
        let xi = Direction::from_slice(&[0.2, -0.5, 0.7]).unwrap();
        assert!((section_volume_ellipsoid(&ball, &xi, 0.0) - PI).abs() < 1e-14);
        let disk = Ellipsoid::unit_ball(2);
        let xi2 = Direction::from_slice(&[1.0, 2.0]).unwrap();
        assert!((section_volume_ellipsoid(&disk, &xi2, 0.6) - 1.6).abs() < 1e-14);
        let e = Ellipsoid::from_axes(DVector::zeros(3), &[2.0, 1.0, 1.0], None).unwrap();
        let got = section_volume_ellipsoid(&e, &Direction::axis(3, 0), 1.0);
        assert!((got - 0.75 * PI).abs() < 1e-14);
        assert_eq!(section_volume_ellipsoid(&e, &Direction::axis(3, 0), 2.5), 0.0);
    }

    #[test]
    fn polytope_examples() {
        let cube = Polytope::cube(3, 1.0).unwrap();
        assert!((section_volume_polytope(&cube, &Direction::axis(3, 2), 0.0) - 4.0).abs() < 1e-14);
        let square = Polytope::cube(2, 1.0).unwrap();
        assert!((section_volume_polytope(&square, &Direction::axis(2, 0), 0.5) - 2.0).abs() < 1e-14);
        let diag = Direction::from_slice(&[1.0, 1.0, 1.0]).unwrap();
        let hex = section_volume_polytope(&cube, &diag, 0.0);
        assert!((hex - 3.0 * 3f64.sqrt()).abs() < 1e-13, "{hex}");
        assert_eq!(section_volume_polytope(&cube, &diag, 1.8), 0.0);
        // facet parallel to the plane
        assert!((section_volume_polytope(&cube, &Direction::axis(3, 2), 1.0) - 4.0).abs() < 1e-14);
    }

    #[test]
    fn quadric_examples() {
        let para = QuadricDomain::paraboloid(vec![1.0, 1.0]).unwrap();
        let e3 = Direction::axis(3, 2);
        assert!((section_volume_quadric(&para, &e3, 4.0).unwrap() - 4.0 * PI).abs() < 1e-13);
        assert_eq!(section_volume_quadric(&para, &e3, -1.0).unwrap(), 0.0);
        let flat = Direction::axis(3, 0);
        assert_eq!(section_volume_quadric(&para, &flat, 1.0), Err(Error::UnboundedSlice));

        // hyperboloid, axis direction: x₃ = t cuts a disk of radius² t²/c² − 1
        let hyp = QuadricDomain::hyperboloid(vec![1.0, 1.0], 1.0).unwrap();
        let got = section_volume_quadric(&hyp, &e3, 2.0).unwrap();
        assert!((got - 3.0 * PI).abs() < 1e-13);
        assert_eq!(section_volume_quadric(&hyp, &e3, -2.0).unwrap(), 0.0);
        assert_eq!(section_volume_quadric(&hyp, &e3.neg(), 2.0).unwrap(), 0.0);
        assert!((section_volume_quadric(&hyp, &e3.neg(), -2.0).unwrap() - 3.0 * PI).abs() < 1e-13);
    }

    #[test]
    fn tilted_paraboloid_matches_projection_formula() {
        // Projecting the slice onto the x₁x₂ plane gives a disk; dividing by
        // cos α restores the in-plane area.
        let para = QuadricDomain::paraboloid(vec![1.0, 1.0]).unwrap();
        let alpha: f64 = 0.2;
        let (s, c) = alpha.sin_cos();
        let xi = Direction::from_slice(&[s, 0.0, c]).unwrap();
        let r2 = 1.0 / c + s * s / (4.0 * c * c);
        let expected = PI * r2 / c;
        let got = section_volume_quadric(&para, &xi, 1.0).unwrap();
        assert!((got - expected).abs() < 1e-13, "{got} vs {expected}");
    }
}
