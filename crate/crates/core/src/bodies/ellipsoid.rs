use nalgebra::{DMatrix, DVector};

use super::Direction;
use crate::error::{Error, Result};
use crate::linalg::unit_ball_volume;

/// `{x : (x − c)ᵀ M (x − c) ≤ 1}` with `M` symmetric positive definite.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    center: DVector<f64>,
    shape: DMatrix<f64>,
    inverse: DMatrix<f64>,
    det: f64,
}

impl Ellipsoid {
    pub fn new(center: DVector<f64>, shape: DMatrix<f64>) -> Result<Self> {
        let n = center.len();
        if n < 2 {
            return Err(Error::InvalidBody("ellipsoid dimension must be >= 2".into()));
        }
        if shape.shape() != (n, n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: shape.nrows(),
            });
        }
        if center.iter().chain(shape.iter()).any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("non-finite ellipsoid parameter".into()));
        }
        let scale = shape.amax().max(1e-300);
        if (&shape - shape.transpose()).amax() > 1e-12 * scale.max(1.0) {
            return Err(Error::InvalidBody("shape matrix is not symmetric".into()));
        }
        let chol = shape
            .clone()
            .cholesky()
            .ok_or_else(|| Error::InvalidBody("shape matrix is not positive definite".into()))?;
        let det = chol.l().diagonal().iter().map(|d| d * d).product();
        let mut inverse = chol.inverse();
        // symmetrize to keep ξᵀM⁻¹ξ exactly even in ξ
        inverse = (&inverse + inverse.transpose()) * 0.5;
        Ok(Self {
            center,
            shape,
            inverse,
            det,
        })
    }

    /// Semi-axes `axes` along the columns of `rotation` (identity if `None`).
    pub fn from_axes(
        center: DVector<f64>,
        axes: &[f64],
        rotation: Option<&DMatrix<f64>>,
    ) -> Result<Self> {
        let n = center.len();
        if axes.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: axes.len(),
            });
        }
        if axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidBody("semi-axes must be positive".into()));
        }
        let diag = DMatrix::from_diagonal(&DVector::from_iterator(
            n,
            axes.iter().map(|a| 1.0 / (a * a)),
        ));
        let shape = match rotation {
            Some(r) => {
                let m = r * diag * r.transpose();
                (&m + m.transpose()) * 0.5
            }
            None => diag,
        };
        Self::new(center, shape)
    }

    pub fn ball(center: DVector<f64>, radius: f64) -> Result<Self> {
        let n = center.len();
        Self::from_axes(center, &vec![radius; n], None)
    }

    pub fn unit_ball(n: usize) -> Self {
        Self::ball(DVector::zeros(n), 1.0).expect("unit ball is valid")
    }

    pub fn dim(&self) -> usize {
        self.center.len()
    }

    pub fn center(&self) -> &DVector<f64> {
        &self.center
    }

    pub fn shape(&self) -> &DMatrix<f64> {
        &self.shape
    }

    /// `M⁻¹`, the quadratic form of the squared centered support.
    pub fn inverse_shape(&self) -> &DMatrix<f64> {
        &self.inverse
    }

    pub fn det_shape(&self) -> f64 {
        self.det
    }

    /// `sqrt(ξᵀ M⁻¹ ξ)` for any (not necessarily unit) `ξ`.
    pub fn centered_support_vec(&self, xi: &DVector<f64>) -> f64 {
        xi.dot(&(&self.inverse * xi)).max(0.0).sqrt()
    }

    pub fn support_vec(&self, xi: &DVector<f64>) -> f64 {
        self.center.dot(xi) + self.centered_support_vec(xi)
    }

    pub fn support(&self, xi: &Direction) -> f64 {
        self.support_vec(xi.as_vector())
    }

    /// The boundary point where `x·ξ` is maximal.
    pub fn maximizer(&self, xi: &Direction) -> DVector<f64> {
        let w = &self.inverse * xi.as_vector();
        let h = self.centered_support_vec(xi.as_vector());
        &self.center + w / h
    }

    /// `(x − c)ᵀ M (x − c)`.
    pub fn form(&self, x: &DVector<f64>) -> f64 {
        let d = x - &self.center;
        d.dot(&(&self.shape * &d))
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.form(x) <= 1.0
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) / self.det.sqrt()
    }

    /// Axis-aligned bounding box `c ± sqrt(diag M⁻¹)`.
    pub fn bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        let r = self.inverse.diagonal().map(|v| v.max(0.0).sqrt());
        (&self.center - &r, &self.center + &r)
    }

    pub fn translated(&self, v: &DVector<f64>) -> Self {
        Self {
            center: &self.center + v,
            ..self.clone()
        }
    }

    /// Image under the orthogonal map `R`.
    pub fn rotated(&self, r: &DMatrix<f64>) -> Result<Self> {
        let shape = r * &self.shape * r.transpose();
        Self::new(r * &self.center, (&shape + shape.transpose()) * 0.5)
    }

    /// Image under `x ↦ λx`.
    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidBody("scale must be positive".into()));
        }
        Self::new(&self.center * lambda, &self.shape / (lambda * lambda))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_shapes() {
        let c = DVector::zeros(2);
        let nonsym = DMatrix::from_row_slice(2, 2, &[1.0, 0.5, 0.0, 1.0]);
        assert!(Ellipsoid::new(c.clone(), nonsym).is_err());
        let indefinite = DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        assert!(Ellipsoid::new(c.clone(), indefinite).is_err());
        assert!(Ellipsoid::new(c, DMatrix::identity(3, 3)).is_err());
    }

    #[test]
    fn axis_aligned_support() {
        let e = Ellipsoid::from_axes(DVector::zeros(3), &[2.0, 1.0, 1.0], None).unwrap();
        assert!((e.support(&Direction::axis(3, 0)) - 2.0).abs() < 1e-15);
        assert!((e.volume() - 4.0 * std::f64::consts::PI * 2.0 / 3.0).abs() < 1e-13);
    }

    #[test]
    fn maximizer_on_boundary() {
        let e = Ellipsoid::from_axes(DVector::from_vec(vec![0.2, -0.1]), &[3.0, 0.5], None).unwrap();
        let xi = Direction::from_slice(&[0.3, 0.9]).unwrap();
        let x = e.maximizer(&xi);
        assert!((e.form(&x) - 1.0).abs() < 1e-12);
        assert!((xi.dot(&x) - e.support(&xi)).abs() < 1e-12);
    }
}
