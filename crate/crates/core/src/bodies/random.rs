//! Seeded random bodies for experiments and property tests.

use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::StandardNormal;

use super::{Ellipsoid, Polytope};

/// Haar-distributed rotation (determinant `+1`).
pub fn random_rotation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DMatrix<f64> {
    let g = DMatrix::from_fn(n, n, |_, _| rng.sample::<f64, _>(StandardNormal));
    let qr = g.qr();
    let mut q = qr.q();
    let r = qr.r();
    for j in 0..n {
        if r[(j, j)] < 0.0 {
            let col = -q.column(j);
            q.set_column(j, &col);
        }
    }
    if q.determinant() < 0.0 {
        let col = -q.column(0);
        q.set_column(0, &col);
    }
    q
}

/// Rotated, translated ellipsoid with semi-axes in `[0.5, 2]` and center
/// in `[−1, 1]^n`.
pub fn random_ellipsoid<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Ellipsoid {
    let axes: Vec<f64> = (0..n).map(|_| rng.random_range(0.5..2.0)).collect();
    let center = DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0));
    let rot = random_rotation(n, rng);
    Ellipsoid::from_axes(center, &axes, Some(&rot)).expect("random ellipsoid is valid")
}

/// Simplex with vertices drawn from `[−1, 1]^n`, redrawn until well shaped.
pub fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Polytope {
    loop {
        let verts: Vec<DVector<f64>> = (0..=n)
            .map(|_| DVector::from_fn(n, |_, _| rng.random_range(-1.0..1.0)))
            .collect();
        let m = DMatrix::from_fn(n, n, |i, j| verts[i + 1][j] - verts[0][j]);
        if m.determinant().abs() < 0.05 {
            continue;
        }
        if let Ok(p) = Polytope::new(verts) {
            return p;
        }
    }
}
