use nalgebra::DVector;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand::SeedableRng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Unit normal vector `ξ ∈ S^{n−1}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction(DVector<f64>);

impl Direction {
    /// Accepts `components` only if its Euclidean norm is 1 within `1e−12`.
    pub fn new(components: DVector<f64>) -> Result<Self> {
        let norm = components.norm();
        if components.len() < 2 {
            return Err(Error::InvalidBody(
                "directions need dimension at least 2".into(),
            ));
        }
        if (norm - 1.0).abs() > 1e-12 || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Ok(Self(components))
    }

    /// Normalizes a nonzero vector.
    pub fn normalized(components: DVector<f64>) -> Result<Self> {
        let norm = components.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotUnit { norm });
        }
        Self::new(components / norm)
    }

    pub fn from_slice(components: &[f64]) -> Result<Self> {
        Self::normalized(DVector::from_column_slice(components))
    }

    /// `e_axis` in `R^n`.
    pub fn axis(n: usize, axis: usize) -> Self {
        let mut v = DVector::zeros(n);
        v[axis] = 1.0;
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_vector(&self) -> &DVector<f64> {
        &self.0
    }

    pub fn as_slice(&self) -> &[f64] {
        self.0.as_slice()
    }

    pub fn neg(&self) -> Self {
        Self(-&self.0)
    }

    pub fn dot(&self, x: &DVector<f64>) -> f64 {
        self.0.dot(x)
    }
}

impl std::ops::Index<usize> for Direction {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

impl Serialize for Direction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.as_slice().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Direction {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<f64>::deserialize(deserializer)?;
        Direction::from_slice(&v).map_err(serde::de::Error::custom)
    }
}

/// Deterministic generator used by every seeded routine in the crate.
pub fn seeded_rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly distributed direction in `R^n`.
pub fn random_direction<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Direction {
    loop {
        let v = DVector::from_fn(n, |_, _| rng.sample::<f64, _>(StandardNormal));
        let norm = v.norm();
        if norm > 1e-8 {
            return Direction(v / norm);
        }
    }
}

/// Fibonacci lattice on `S²`.
pub fn fibonacci_sphere(count: usize) -> Vec<Direction> {
    let golden = std::f64::consts::PI * (3.0 - 5f64.sqrt());
    (0..count)
        .map(|i| {
            let z = 1.0 - (2.0 * i as f64 + 1.0) / count as f64;
            let r = (1.0 - z * z).max(0.0).sqrt();
            let phi = golden * i as f64;
            let v = DVector::from_vec(vec![r * phi.cos(), r * phi.sin(), z]);
            let norm = v.norm();
            Direction(v / norm)
        })
        .collect()
}

/// Direction set used by the moment and detection pipelines: the Fibonacci
/// lattice for `n = 3`, seeded uniform antithetic pairs `±ξ` otherwise.
pub fn sample_directions(n: usize, count: usize, seed: u64) -> Vec<Direction> {
    if n == 3 {
        return fibonacci_sphere(count);
    }
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let xi = random_direction(n, &mut rng);
        let neg = xi.neg();
        out.push(xi);
        if out.len() < count {
            out.push(neg);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_unit() {
        assert!(matches!(
            Direction::new(DVector::from_vec(vec![1.0, 1.0])),
            Err(Error::NotUnit { .. })
        ));
        assert!(Direction::from_slice(&[0.0, 0.0]).is_err());
        assert!(Direction::new(DVector::from_vec(vec![0.6, 0.8])).is_ok());
    }

    #[test]
    fn fibonacci_points_are_unit_and_spread() {
        let dirs = fibonacci_sphere(200);
        let mean: DVector<f64> = dirs
            .iter()
            .fold(DVector::zeros(3), |acc, d| acc + d.as_vector())
            / 200.0;
        assert!(mean.norm() < 1e-2);
        for d in &dirs {
            assert!((d.as_vector().norm() - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn antithetic_sampling_is_seeded() {
        let a = sample_directions(4, 10, 7);
        let b = sample_directions(4, 10, 7);
        assert_eq!(a, b);
        assert_eq!(a[1], a[0].neg());
        assert_ne!(a, sample_directions(4, 10, 8));
    }
}
