use nalgebra::{DMatrix, DVector, Vector3};

use super::Direction;
use crate::error::{Error, Result};

/// Supporting half-space `normal · x ≤ offset`.
#[derive(Debug, Clone, PartialEq)]
pub struct Facet {
    pub normal: DVector<f64>,
    pub offset: f64,
    /// Indices of the vertices lying on the facet.
    pub vertices: Vec<usize>,
}

/// Convex hull of finitely many points in `R²` or `R³`.
#[derive(Debug, Clone, PartialEq)]
pub struct Polytope {
    vertices: Vec<DVector<f64>>,
    facets: Vec<Facet>,
}

impl Polytope {
    /// Every vertex must be extreme and the hull must have nonempty interior.
    pub fn new(vertices: Vec<DVector<f64>>) -> Result<Self> {
        let n = vertices.first().map(|v| v.len()).unwrap_or(0);
        if !(2..=3).contains(&n) {
            return Err(Error::Unsupported(format!(
                "polytopes are supported in dimensions 2 and 3, got {n}"
            )));
        }
        if let Some(v) = vertices.iter().find(|v| v.len() != n) {
            return Err(Error::DimensionMismatch {
                expected: n,
                got: v.len(),
            });
        }
        if vertices.iter().any(|v| v.iter().any(|x| !x.is_finite())) {
            return Err(Error::InvalidBody("non-finite vertex coordinate".into()));
        }
        if vertices.len() < n + 1 {
            return Err(Error::InvalidBody(format!(
                "need at least {} vertices, got {}",
                n + 1,
                vertices.len()
            )));
        }
        let facets = if n == 2 {
            hull_2d(&vertices)?
        } else {
            hull_3d(&vertices)?
        };
        Ok(Self { vertices, facets })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        Self::new(rows.iter().map(|r| DVector::from_column_slice(r)).collect())
    }

    /// `[−half, half]^n`.
    pub fn cube(n: usize, half: f64) -> Result<Self> {
        let vertices = (0..1usize << n)
            .map(|mask| {
                DVector::from_iterator(
                    n,
                    (0..n).map(|i| if mask >> i & 1 == 1 { half } else { -half }),
                )
            })
            .collect();
        Self::new(vertices)
    }

    pub fn dim(&self) -> usize {
        self.vertices[0].len()
    }

    pub fn vertices(&self) -> &[DVector<f64>] {
        &self.vertices
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn support_vec(&self, xi: &DVector<f64>) -> f64 {
        self.vertices
            .iter()
            .map(|v| v.dot(xi))
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn support(&self, xi: &Direction) -> f64 {
        self.support_vec(xi.as_vector())
    }

    /// Exact evaluation of the facet inequalities; boundary points count.
    pub fn contains(&self, x: &DVector<f64>) -> bool {
        self.facets.iter().all(|f| f.normal.dot(x) <= f.offset)
    }

    pub fn bounding_box(&self) -> (DVector<f64>, DVector<f64>) {
        let n = self.dim();
        let mut lo = DVector::from_element(n, f64::INFINITY);
        let mut hi = DVector::from_element(n, f64::NEG_INFINITY);
        for v in &self.vertices {
            for i in 0..n {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub fn centroid_of_vertices(&self) -> DVector<f64> {
        let n = self.dim();
        self.vertices
            .iter()
            .fold(DVector::zeros(n), |acc, v| acc + v)
            / self.vertices.len() as f64
    }

    /// `n`-dimensional volume from the facet decomposition.
    pub fn volume(&self) -> f64 {
        let inner = self.centroid_of_vertices();
        self.facets
            .iter()
            .map(|f| {
                let pts: Vec<DVector<f64>> =
                    f.vertices.iter().map(|&i| self.vertices[i].clone()).collect();
                let unit = &f.normal / f.normal.norm();
                let height = unit.dot(&pts[0]) - unit.dot(&inner);
                facet_measure(&pts, &unit) * height / self.dim() as f64
            })
            .sum()
    }

    pub fn translated(&self, v: &DVector<f64>) -> Result<Self> {
        Self::new(self.vertices.iter().map(|x| x + v).collect())
    }

    pub fn rotated(&self, r: &DMatrix<f64>) -> Result<Self> {
        Self::new(self.vertices.iter().map(|x| r * x).collect())
    }

    pub fn scaled(&self, lambda: f64) -> Result<Self> {
        if !(lambda > 0.0) {
            return Err(Error::InvalidBody("scale must be positive".into()));
        }
        Self::new(self.vertices.iter().map(|x| x * lambda).collect())
    }
}

fn scale_of(points: &[DVector<f64>]) -> f64 {
    points
        .iter()
        .flat_map(|p| p.iter())
        .fold(0.0f64, |m, x| m.max(x.abs()))
        .max(1e-300)
}

fn cross2(o: &DVector<f64>, a: &DVector<f64>, b: &DVector<f64>) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Counter-clockwise hull indices (monotone chain, collinear points dropped).
pub(crate) fn monotone_chain(points: &[DVector<f64>]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..points.len()).collect();
    idx.sort_by(|&a, &b| {
        points[a][0]
            .total_cmp(&points[b][0])
            .then(points[a][1].total_cmp(&points[b][1]))
    });
    idx.dedup_by(|a, b| points[*a] == points[*b]);
    if idx.len() < 3 {
        return idx;
    }
    let mut hull: Vec<usize> = Vec::with_capacity(2 * idx.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &usize>> = if pass == 0 {
            Box::new(idx.iter())
        } else {
            Box::new(idx.iter().rev())
        };
        for &i in iter {
            while hull.len() >= start + 2
                && cross2(
                    &points[hull[hull.len() - 2]],
                    &points[hull[hull.len() - 1]],
                    &points[i],
                ) <= 0.0
            {
                hull.pop();
            }
            hull.push(i);
        }
        hull.pop();
    }
    hull
}

fn hull_2d(vertices: &[DVector<f64>]) -> Result<Vec<Facet>> {
    let hull = monotone_chain(vertices);
    if hull.len() < 3 {
        return Err(Error::InvalidBody("polygon has empty interior".into()));
    }
    if hull.len() != vertices.len() {
        return Err(Error::InvalidBody(
            "every polygon vertex must be extreme".into(),
        ));
    }
    Ok((0..hull.len())
        .map(|k| {
            let i = hull[k];
            let j = hull[(k + 1) % hull.len()];
            let (p, q) = (&vertices[i], &vertices[j]);
            let normal = DVector::from_vec(vec![q[1] - p[1], p[0] - q[0]]);
            let offset = normal.dot(p);
            Facet {
                normal,
                offset,
                vertices: vec![i, j],
            }
        })
        .collect())
}

fn to3(v: &DVector<f64>) -> Vector3<f64> {
    Vector3::new(v[0], v[1], v[2])
}

/// Supporting planes through vertex triples; `O(V⁴)`, fine for small polytopes.
fn supporting_planes(points: &[DVector<f64>], tol: f64) -> Vec<Facet> {
    let p: Vec<Vector3<f64>> = points.iter().map(to3).collect();
    let mut facets: Vec<Facet> = Vec::new();
    let mut seen: Vec<(Vector3<f64>, f64)> = Vec::new();
    let count = p.len();
    let scale = scale_of(points);
    for i in 0..count {
        for j in i + 1..count {
            for k in j + 1..count {
                let raw = (p[j] - p[i]).cross(&(p[k] - p[i]));
                let norm = raw.norm();
                if norm <= 1e-12 * scale * scale {
                    continue;
                }
                let unit = raw / norm;
                let off = unit.dot(&p[i]);
                let dists: Vec<f64> = p.iter().map(|q| unit.dot(q) - off).collect();
                let sign = if dists.iter().all(|&d| d <= tol) {
                    1.0
                } else if dists.iter().all(|&d| d >= -tol) {
                    -1.0
                } else {
                    continue;
                };
                let u = unit * sign;
                let o = off * sign;
                if seen
                    .iter()
                    .any(|(su, so)| (su - u).norm() < 1e-9 && (so - o).abs() < tol)
                {
                    continue;
                }
                seen.push((u, o));
                let normal = raw * sign;
                let on: Vec<usize> = (0..count).filter(|&l| dists[l].abs() <= tol).collect();
                facets.push(Facet {
                    offset: normal.dot(&p[i]),
                    normal: DVector::from_column_slice(normal.as_slice()),
                    vertices: on,
                });
            }
        }
    }
    facets
}

fn full_dimensional_3d(points: &[DVector<f64>], scale: f64) -> bool {
    let p: Vec<Vector3<f64>> = points.iter().map(to3).collect();
    let tol = 1e-12 * scale.powi(3);
    let n = p.len();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let c = (p[j] - p[i]).cross(&(p[k] - p[i]));
                for l in k + 1..n {
                    if c.dot(&(p[l] - p[i])).abs() > tol {
                        return true;
                    }
                }
            }
        }
    }
    false
}

fn hull_3d(vertices: &[DVector<f64>]) -> Result<Vec<Facet>> {
    let scale = scale_of(vertices);
    if !full_dimensional_3d(vertices, scale) {
        return Err(Error::InvalidBody("polytope has empty interior".into()));
    }
    let tol = 1e-10 * scale;
    for (idx, v) in vertices.iter().enumerate() {
        let others: Vec<DVector<f64>> = vertices
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != idx)
            .map(|(_, w)| w.clone())
            .collect();
        if others.iter().any(|w| (w - v).amax() <= tol) {
            return Err(Error::InvalidBody("duplicate polytope vertex".into()));
        }
        if !full_dimensional_3d(&others, scale) {
            continue;
        }
        let inside = supporting_planes(&others, tol).iter().all(|f| {
            let unit = &f.normal / f.normal.norm();
            unit.dot(v) - f.offset / f.normal.norm() <= tol
        });
        if inside {
            return Err(Error::InvalidBody(
                "every polytope vertex must be extreme".into(),
            ));
        }
    }
    Ok(supporting_planes(vertices, tol))
}

/// `(n−1)`-measure of the convex hull of `pts`, which lie in a hyperplane
/// with unit normal `unit`.
pub(crate) fn facet_measure(pts: &[DVector<f64>], unit: &DVector<f64>) -> f64 {
    match unit.len() {
        2 => {
            let dir = DVector::from_vec(vec![-unit[1], unit[0]]);
            let proj: Vec<f64> = pts.iter().map(|p| p.dot(&dir)).collect();
            let lo = proj.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = proj.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            (hi - lo).max(0.0)
        }
        3 => {
            let basis = crate::linalg::orthonormal_complement(unit);
            let planar: Vec<DVector<f64>> = pts.iter().map(|p| basis.transpose() * p).collect();
            polygon_area(&planar)
        }
        _ => unreachable!("polytopes are restricted to dimensions 2 and 3"),
    }
}

/// Area of the convex hull of planar points (shoelace on the hull).
pub(crate) fn polygon_area(points: &[DVector<f64>]) -> f64 {
    let hull = monotone_chain(points);
    if hull.len() < 3 {
        return 0.0;
    }
    let mut twice = 0.0;
    for k in 0..hull.len() {
        let p = &points[hull[k]];
        let q = &points[hull[(k + 1) % hull.len()]];
        twice += p[0] * q[1] - p[1] * q[0];
    }
    0.5 * twice.abs()
}
