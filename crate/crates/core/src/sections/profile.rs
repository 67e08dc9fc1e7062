use std::f64::consts::PI;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::section_volume;
use crate::bodies::{chord_interval, Body, Direction};
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SectionMethod {
    Exact,
    MonteCarlo,
}

/// Samples of `t ↦ A_K(ξ, t)` on a strictly increasing grid.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SectionProfile {
    pub xi: Direction,
    pub n: usize,
    pub grid: Vec<f64>,
    pub values: Vec<f64>,
    pub method: SectionMethod,
}

impl SectionProfile {
    pub fn new(
        xi: Direction,
        grid: Vec<f64>,
        values: Vec<f64>,
        method: SectionMethod,
    ) -> Result<Self> {
        if grid.len() != values.len() {
            return Err(invalid("values", "grid and values differ in length"));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(invalid("grid", "grid must be strictly increasing"));
        }
        Ok(Self {
            n: xi.dim(),
            xi,
            grid,
            values,
            method,
        })
    }

    pub fn len(&self) -> usize {
        self.grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.grid.is_empty()
    }

    /// Profile of the same function after `t ↦ t + shift`.
    pub fn shifted(&self, shift: f64) -> Self {
        Self {
            grid: self.grid.iter().map(|t| t + shift).collect(),
            ..self.clone()
        }
    }

    /// CSV with header `t,A`, `\n` line endings and round-trip float text.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,A\n");
        for (t, a) in self.grid.iter().zip(&self.values) {
            let _ = writeln!(out, "{t:?},{a:?}");
        }
        out
    }

    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Serialize(e.to_string()))
    }
}

/// Chebyshev-Lobatto points `lo … hi`, increasing, endpoints included.
pub fn chebyshev_grid(lo: f64, hi: f64, num_points: usize) -> Vec<f64> {
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let last = (num_points - 1) as f64;
    let mut grid: Vec<f64> = (0..num_points)
        .map(|k| {
            if k == 0 {
                lo
            } else if k == num_points - 1 {
                hi
            } else {
                mid - half * (PI * k as f64 / last).cos()
            }
        })
        .collect();
    // symmetric node pairs can round to the same value only for degenerate
    // intervals; keep the grid strictly increasing regardless
    for k in 1..grid.len() {
        if grid[k] <= grid[k - 1] {
            grid[k] = f64::from_bits(grid[k - 1].to_bits() + 1);
        }
    }
    grid
}

/// Profile on the chord interval shrunk by `margin·width` at both ends.
pub fn profile(
    body: &Body,
    xi: &Direction,
    num_points: usize,
    margin: f64,
) -> Result<SectionProfile> {
    if num_points < 16 {
        return Err(invalid("num_points", "need at least 16 grid points"));
    }
    if !(0.0..0.5).contains(&margin) {
        return Err(invalid("margin", "margin must lie in [0, 0.5)"));
    }
    let (lo, hi) = chord_interval(body, xi)?;
    let w = hi - lo;
    profile_window(body, xi, lo + margin * w, hi - margin * w, num_points)
}

/// Profile on an explicit window `[lo, hi]`; the only option for unbounded
/// bodies.
pub fn profile_window(
    body: &Body,
    xi: &Direction,
    lo: f64,
    hi: f64,
    num_points: usize,
) -> Result<SectionProfile> {
    if num_points < 2 {
        return Err(invalid("num_points", "need at least 2 grid points"));
    }
    if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
        return Err(invalid("window", format!("empty window [{lo}, {hi}]")));
    }
    body.check_dim(xi.dim())?;
    let grid = chebyshev_grid(lo, hi, num_points);
    let values = grid
        .par_iter()
        .map(|&t| section_volume(body, xi, t))
        .collect::<Result<Vec<f64>>>()?;
    SectionProfile::new(xi.clone(), grid, values, SectionMethod::Exact)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bodies::Ellipsoid;
    use crate::sections::section_volume_ellipsoid;
    use nalgebra::DVector;

    #[test]
    fn ball_profile_endpoints_vanish() {
        let ball: Body = Ellipsoid::unit_ball(3).into();
        let p = profile(&ball, &Direction::axis(3, 0), 64, 0.0).unwrap();
        assert_eq!(p.values[0], 0.0);
        assert_eq!(*p.values.last().unwrap(), 0.0);
        assert_eq!(p.grid[0], -1.0);
    }

    #[test]
    fn margin_keeps_values_positive() {
        let ball: Body = Ellipsoid::unit_ball(3).into();
        let p = profile(&ball, &Direction::axis(3, 0), 64, 0.1).unwrap();
        let floor = PI * (1.0 - 0.64);
        assert!(p.values.iter().all(|&v| v >= floor - 1e-12));
    }

    #[test]
    fn midpoint_matches_closed_form() {
        let e = Ellipsoid::from_axes(DVector::from_vec(vec![0.3, 0.0, -0.2]), &[2.0, 1.0, 1.0], None)
            .unwrap();
        let xi = Direction::axis(3, 0);
        let p = profile(&e.clone().into(), &xi, 65, 0.05).unwrap();
        let mid = p.grid[32];
        assert!((mid - 0.3).abs() < 1e-15);
        assert_eq!(p.values[32], section_volume_ellipsoid(&e, &xi, mid));
    }

    #[test]
    fn rejects_bad_parameters() {
        let ball: Body = Ellipsoid::unit_ball(2).into();
        let xi = Direction::axis(2, 0);
        assert!(profile(&ball, &xi, 8, 0.1).is_err());
        assert!(profile(&ball, &xi, 32, 0.5).is_err());
        assert!(profile(&ball, &Direction::axis(3, 0), 32, 0.1).is_err());
    }

    #[test]
    fn csv_layout() {
        let ball: Body = Ellipsoid::unit_ball(2).into();
        let p = profile(&ball, &Direction::axis(2, 0), 16, 0.0).unwrap();
        let csv = p.to_csv();
        assert!(csv.starts_with("t,A\n-1.0,0.0\n"));
        assert_eq!(csv.lines().count(), 17);
        assert!(!csv.contains('\r'));
    }
}
