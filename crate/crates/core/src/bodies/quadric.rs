use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Direction, SupportValue};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum QuadricKind {
    /// `x_n ≥ Σ x_j² / a_j²`
    Paraboloid,
    /// Upper sheet of `x_n²/c² − Σ x_j²/a_j² = 1`, convex side.
    HyperboloidSheet { c: f64 },
}

/// Unbounded convex domain bounded by an elliptic paraboloid or by one
/// sheet of a two-sheet elliptic hyperboloid, with apex frame at `offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadricDomain {
    kind: QuadricKind,
    axes: Vec<f64>,
    offset: DVector<f64>,
}

impl QuadricDomain {
    /// `axes` holds the `n − 1` transverse semi-axes `a_j`.
    pub fn new(kind: QuadricKind, axes: Vec<f64>, offset: Option<DVector<f64>>) -> Result<Self> {
        let n = axes.len() + 1;
        if n < 2 {
            return Err(Error::InvalidBody("quadric needs at least one axis".into()));
        }
        if axes.iter().any(|a| !(*a > 0.0) || !a.is_finite()) {
            return Err(Error::InvalidBody("quadric axes must be positive".into()));
        }
        if let QuadricKind::HyperboloidSheet { c } = kind {
            if !(c > 0.0) || !c.is_finite() {
                return Err(Error::InvalidBody("hyperboloid c must be positive".into()));
            }
        }
        let offset = offset.unwrap_or_else(|| DVector::zeros(n));
        if offset.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: offset.len(),
            });
        }
        Ok(Self { kind, axes, offset })
    }

    pub fn paraboloid(axes: Vec<f64>) -> Result<Self> {
        Self::new(QuadricKind::Paraboloid, axes, None)
    }

    pub fn hyperboloid(axes: Vec<f64>, c: f64) -> Result<Self> {
        Self::new(QuadricKind::HyperboloidSheet { c }, axes, None)
    }

    pub fn dim(&self) -> usize {
        self.axes.len() + 1
    }

    pub fn kind(&self) -> QuadricKind {
        self.kind
    }

    pub fn axes(&self) -> &[f64] {
        &self.axes
    }

    pub fn offset(&self) -> &DVector<f64> {
        &self.offset
    }

    /// `(Q, b, c₀)` with the domain `{y : yᵀQy + b·y + c₀ ≤ 0}` in apex
    /// coordinates `y = x − offset` (for the hyperboloid, intersected with
    /// `y_n > 0`).
    pub fn quadratic_form(&self) -> (DMatrix<f64>, DVector<f64>, f64) {
        let n = self.dim();
        let mut q = DMatrix::zeros(n, n);
        for (j, a) in self.axes.iter().enumerate() {
            q[(j, j)] = 1.0 / (a * a);
        }
        let mut b = DVector::zeros(n);
        match self.kind {
            QuadricKind::Paraboloid => {
                b[n - 1] = -1.0;
                (q, b, 0.0)
            }
            QuadricKind::HyperboloidSheet { c } => {
                q[(n - 1, n - 1)] = -1.0 / (c * c);
                (q, b, 1.0)
            }
        }
    }

    pub fn contains(&self, x: &DVector<f64>) -> bool {
        let n = self.dim();
        let y = x - &self.offset;
        let transverse: f64 = self
            .axes
            .iter()
            .enumerate()
            .map(|(j, a)| y[j] * y[j] / (a * a))
            .sum();
        match self.kind {
            QuadricKind::Paraboloid => transverse <= y[n - 1],
            QuadricKind::HyperboloidSheet { c } => {
                y[n - 1] >= 0.0 && y[n - 1] * y[n - 1] / (c * c) - transverse >= 1.0
            }
        }
    }

    pub fn support_vec(&self, xi: &DVector<f64>) -> SupportValue {
        let n = self.dim();
        let xn = xi[n - 1];
        if xn >= 0.0 {
            return SupportValue::Infinite;
        }
        let w2: f64 = self
            .axes
            .iter()
            .enumerate()
            .map(|(j, a)| a * a * xi[j] * xi[j])
            .sum();
        let local = match self.kind {
            QuadricKind::Paraboloid => -w2 / (4.0 * xn),
            QuadricKind::HyperboloidSheet { c } => {
                let gap = c * c * xn * xn - w2;
                if gap < 0.0 {
                    return SupportValue::Infinite;
                }
                -gap.sqrt()
            }
        };
        SupportValue::Finite(self.offset.dot(xi) + local)
    }

    pub fn support(&self, xi: &Direction) -> SupportValue {
        self.support_vec(xi.as_vector())
    }

    /// Whether every hyperplane with normal `ξ` cuts a bounded slice.
    pub fn slice_bounded(&self, xi: &Direction) -> bool {
        let n = self.dim();
        let xn = xi[n - 1];
        match self.kind {
            QuadricKind::Paraboloid => xn != 0.0,
            QuadricKind::HyperboloidSheet { c } => {
                let w2: f64 = self
                    .axes
                    .iter()
                    .enumerate()
                    .map(|(j, a)| a * a * xi[j] * xi[j])
                    .sum();
                w2 < c * c * xn * xn
            }
        }
    }

    pub fn translated(&self, v: &DVector<f64>) -> Self {
        Self {
            offset: &self.offset + v,
            ..self.clone()
        }
    }
}
