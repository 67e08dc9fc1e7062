use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::{Body, Ellipsoid, Polytope, QuadricDomain, QuadricKind};
use crate::error::{Error, Result};

/// JSON body description.
///
/// ```json
/// {"type":"ellipsoid","center":[0,0,0],"shape":[[1,0,0],[0,1,0],[0,0,1]]}
/// {"type":"polytope","vertices":[[0,0],[1,0],[0,1]]}
/// {"type":"paraboloid","axes":[1,1]}
/// {"type":"hyperboloid","axes":[1,1],"c":1}
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum BodySpec {
    Ellipsoid {
        center: Vec<f64>,
        shape: Vec<Vec<f64>>,
    },
    Polytope {
        vertices: Vec<Vec<f64>>,
    },
    Paraboloid {
        axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<f64>>,
    },
    Hyperboloid {
        axes: Vec<f64>,
        c: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        offset: Option<Vec<f64>>,
    },
}

impl BodySpec {
    pub fn from_json(text: &str) -> std::result::Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}

fn offset_vec(offset: Option<Vec<f64>>) -> Option<DVector<f64>> {
    offset.map(DVector::from_vec)
}

impl TryFrom<BodySpec> for Body {
    type Error = Error;

    fn try_from(spec: BodySpec) -> Result<Body> {
        match spec {
            BodySpec::Ellipsoid { center, shape } => {
                let n = center.len();
                if shape.len() != n || shape.iter().any(|row| row.len() != n) {
                    return Err(Error::InvalidBody(format!(
                        "shape must be a {n}x{n} matrix"
                    )));
                }
                let m = DMatrix::from_fn(n, n, |i, j| shape[i][j]);
                Ok(Ellipsoid::new(DVector::from_vec(center), m)?.into())
            }
            BodySpec::Polytope { vertices } => Ok(Polytope::from_rows(&vertices)?.into()),
            BodySpec::Paraboloid { axes, offset } => {
                Ok(QuadricDomain::new(QuadricKind::Paraboloid, axes, offset_vec(offset))?.into())
            }
            BodySpec::Hyperboloid { axes, c, offset } => Ok(QuadricDomain::new(
                QuadricKind::HyperboloidSheet { c },
                axes,
                offset_vec(offset),
            )?
            .into()),
        }
    }
}

impl From<Body> for BodySpec {
    fn from(body: Body) -> BodySpec {
        match body {
            Body::Ellipsoid(e) => BodySpec::Ellipsoid {
                center: e.center().as_slice().to_vec(),
                shape: e
                    .shape()
                    .row_iter()
                    .map(|r| r.iter().copied().collect())
                    .collect(),
            },
            Body::Polytope(p) => BodySpec::Polytope {
                vertices: p.vertices().iter().map(|v| v.as_slice().to_vec()).collect(),
            },
            Body::Quadric(q) => {
                let offset = if q.offset().iter().all(|&x| x == 0.0) {
                    None
                } else {
                    Some(q.offset().as_slice().to_vec())
                };
                match q.kind() {
                    QuadricKind::Paraboloid => BodySpec::Paraboloid {
                        axes: q.axes().to_vec(),
                        offset,
                    },
                    QuadricKind::HyperboloidSheet { c } => BodySpec::Hyperboloid {
                        axes: q.axes().to_vec(),
                        c,
                        offset,
                    },
                }
            }
        }
    }
}
