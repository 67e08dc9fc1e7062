use nalgebra::DVector;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bodies::{seeded_rng, Body, Direction};
use crate::error::{invalid, Error, Result};
use crate::linalg::orthonormal_complement;

/// Default slab half-width as a fraction of the chord width.
pub const DEFAULT_HALFWIDTH_FRACTION: f64 = 1e-3;

const CHUNK: usize = 1 << 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub hits: u64,
    pub samples: u64,
}

/// Monte Carlo estimate of `Vol_n(K ∩ {|x·ξ − t| ≤ h}) / 2h`.
///
/// Points are drawn uniformly from the box spanned by the slab along `ξ` and
/// the support extents of `K` along an orthonormal basis of `ξ^⊥`, then
/// rejected by exact membership. Unbounded bodies need a `truncation` box,
/// which also clips the body. The sample stream is split into fixed chunks
/// with one ChaCha stream each, so the result does not depend on the number
/// of worker threads.
pub fn section_volume_mc(
    body: &Body,
    xi: &Direction,
    t: f64,
    slab_halfwidth: f64,
    samples: usize,
    seed: u64,
    truncation: Option<(&DVector<f64>, &DVector<f64>)>,
) -> Result<McEstimate> {
    if !(slab_halfwidth > 0.0) || !slab_halfwidth.is_finite() {
        return Err(invalid("slab_halfwidth", "must be positive"));
    }
    if samples == 0 {
        return Err(invalid("samples", "must be positive"));
    }
    let n = body.dim();
    body.check_dim(xi.dim())?;
    if let Some((lo, hi)) = truncation {
        body.check_dim(lo.len())?;
        body.check_dim(hi.len())?;
    } else if !body.is_bounded() {
        return Err(invalid(
            "truncation",
            "unbounded bodies need a truncation box",
        ));
    }

    let basis = orthonormal_complement(xi.as_vector());
    let mut ranges = Vec::with_capacity(n - 1);
    for i in 0..n - 1 {
        let u = basis.column(i).into_owned();
        let (lo, hi) = match truncation {
            Some((blo, bhi)) => (-box_support(blo, bhi, &(-&u)), box_support(blo, bhi, &u)),
            None => (
                -body.support_vec(&(-&u))?.finite()?,
                body.support_vec(&u)?.finite()?,
            ),
        };
        if !(hi > lo) {
            return Err(Error::InvalidBody("sampling box has zero volume".into()));
        }
        ranges.push((lo, hi));
    }
    let cross_volume: f64 = ranges.iter().map(|(lo, hi)| hi - lo).product();

    let chunks = samples.div_ceil(CHUNK);
    let hits: u64 = (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let mut rng = seeded_rng(seed);
            rng.set_stream(chunk as u64);
            let count = CHUNK.min(samples - chunk * CHUNK);
            let mut local = 0u64;
            let mut x = DVector::zeros(n);
            for _ in 0..count {
                let s = rng.random_range(t - slab_halfwidth..=t + slab_halfwidth);
                x.copy_from(&(xi.as_vector() * s));
                for (i, (lo, hi)) in ranges.iter().enumerate() {
                    let z = rng.random_range(*lo..*hi);
                    x.axpy(z, &basis.column(i), 1.0);
                }
                let inside_box = truncation.is_none_or(|(blo, bhi)| {
                    (0..n).all(|j| x[j] >= blo[j] && x[j] <= bhi[j])
                });
                if inside_box && body.contains(&x).unwrap_or(false) {
                    local += 1;
                }
            }
            local
        })
        .sum();

    let p = hits as f64 / samples as f64;
    Ok(McEstimate {
        estimate: p * cross_volume,
        stderr: cross_volume * (p * (1.0 - p) / samples as f64).sqrt(),
        hits,
        samples: samples as u64,
    })
}

fn box_support(lo: &DVector<f64>, hi: &DVector<f64>, u: &DVector<f64>) -> f64 {
    (0..u.len()).map(|j| (lo[j] * u[j]).max(hi[j] * u[j])).sum()
}
