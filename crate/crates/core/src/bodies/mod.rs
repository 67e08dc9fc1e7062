//! Exact representations of convex bodies.
//!
//! Every body answers support, membership and chord-interval queries. Bodies
//! are immutable after construction.

mod direction;
mod ellipsoid;
mod polytope;
mod quadric;
pub mod random;
mod spec;

pub use direction::{fibonacci_sphere, random_direction, sample_directions, seeded_rng, Direction};
pub use ellipsoid::Ellipsoid;
pub use polytope::{Facet, Polytope};
pub(crate) use polytope::polygon_area;
pub use quadric::{QuadricDomain, QuadricKind};
pub use spec::BodySpec;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Value of a support function, which is `+∞` outside the dual cone of an
/// unbounded body.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SupportValue {
    Finite(f64),
    Infinite,
}

impl SupportValue {
    pub fn finite(self) -> Result<f64> {
        match self {
            SupportValue::Finite(v) => Ok(v),
            SupportValue::Infinite => Err(Error::InfiniteSupport),
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, SupportValue::Finite(_))
    }
}

/// Any of the supported convex bodies.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BodySpec", into = "BodySpec")]
pub enum Body {
    Ellipsoid(Ellipsoid),
    Polytope(Polytope),
    Quadric(QuadricDomain),
}

impl From<Ellipsoid> for Body {
    fn from(e: Ellipsoid) -> Self {
        Body::Ellipsoid(e)
    }
}

impl From<Polytope> for Body {
    fn from(p: Polytope) -> Self {
        Body::Polytope(p)
    }
}

impl From<QuadricDomain> for Body {
    fn from(q: QuadricDomain) -> Self {
        Body::Quadric(q)
    }
}

impl Body {
    pub fn dim(&self) -> usize {
        match self {
            Body::Ellipsoid(e) => e.dim(),
            Body::Polytope(p) => p.dim(),
            Body::Quadric(q) => q.dim(),
        }
    }

    pub fn is_bounded(&self) -> bool {
        !matches!(self, Body::Quadric(_))
    }

    /// Smooth with positive curvature everywhere on the boundary.
    pub fn is_strictly_convex(&self) -> bool {
        !matches!(self, Body::Polytope(_))
    }

    /// Support function extended positively homogeneously to all of `R^n`.
    pub fn support_vec(&self, xi: &DVector<f64>) -> Result<SupportValue> {
        self.check_dim(xi.len())?;
        Ok(match self {
            Body::Ellipsoid(e) => SupportValue::Finite(e.support_vec(xi)),
            Body::Polytope(p) => SupportValue::Finite(p.support_vec(xi)),
            Body::Quadric(q) => q.support_vec(xi),
        })
    }

    /// Closed-body membership, evaluated on the defining inequality.
    pub fn contains(&self, x: &DVector<f64>) -> Result<bool> {
        self.check_dim(x.len())?;
        Ok(match self {
            Body::Ellipsoid(e) => e.contains(x),
            Body::Polytope(p) => p.contains(x),
            Body::Quadric(q) => q.contains(x),
        })
    }

    /// Axis-aligned bounding box, `None` for unbounded bodies.
    pub fn bounding_box(&self) -> Option<(DVector<f64>, DVector<f64>)> {
        match self {
            Body::Ellipsoid(e) => Some(e.bounding_box()),
            Body::Polytope(p) => Some(p.bounding_box()),
            Body::Quadric(_) => None,
        }
    }

    /// Volume, `None` for unbounded bodies.
    pub fn volume(&self) -> Option<f64> {
        match self {
            Body::Ellipsoid(e) => Some(e.volume()),
            Body::Polytope(p) => Some(p.volume()),
            Body::Quadric(_) => None,
        }
    }

    pub fn translated(&self, v: &DVector<f64>) -> Result<Body> {
        self.check_dim(v.len())?;
        Ok(match self {
            Body::Ellipsoid(e) => Body::Ellipsoid(e.translated(v)),
            Body::Polytope(p) => Body::Polytope(p.translated(v)?),
            Body::Quadric(q) => Body::Quadric(q.translated(v)),
        })
    }

    /// Image under an orthogonal map; quadrics keep their axis frame.
    pub fn rotated(&self, r: &DMatrix<f64>) -> Result<Body> {
        self.check_dim(r.nrows())?;
        match self {
            Body::Ellipsoid(e) => Ok(Body::Ellipsoid(e.rotated(r)?)),
            Body::Polytope(p) => Ok(Body::Polytope(p.rotated(r)?)),
            Body::Quadric(_) => Err(Error::Unsupported(
                "quadric domains are kept in their axis frame".into(),
            )),
        }
    }

    pub fn scaled(&self, lambda: f64) -> Result<Body> {
        match self {
            Body::Ellipsoid(e) => Ok(Body::Ellipsoid(e.scaled(lambda)?)),
            Body::Polytope(p) => Ok(Body::Polytope(p.scaled(lambda)?)),
            Body::Quadric(_) => Err(Error::Unsupported(
                "scaling is not defined for quadric domains".into(),
            )),
        }
    }

    pub(crate) fn check_dim(&self, got: usize) -> Result<()> {
        let expected = self.dim();
        if expected != got {
            return Err(Error::DimensionMismatch { expected, got });
        }
        Ok(())
    }
}

/// `h_K(ξ) = sup_{x ∈ K} x·ξ`.
pub fn support(body: &Body, xi: &Direction) -> Result<SupportValue> {
    body.support_vec(xi.as_vector())
}

pub fn contains(body: &Body, x: &[f64]) -> Result<bool> {
    body.contains(&DVector::from_column_slice(x))
}

/// `(−h_K(−ξ), h_K(ξ))`, the parameters `t` for which `{x·ξ = t}` meets
/// the interior of `K`.
pub fn chord_interval(body: &Body, xi: &Direction) -> Result<(f64, f64)> {
    let hi = support(body, xi)?.finite()?;
    let lo = -support(body, &xi.neg())?.finite()?;
    Ok((lo, hi))
}
