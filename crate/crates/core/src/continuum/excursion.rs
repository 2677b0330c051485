use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};

/// Normalized Brownian excursion on the grid `k/m`, `k = 0..=m`.
///
/// A Brownian bridge with Gaussian increments of variance `1/m` is rotated
/// cyclically to start at its minimum (smallest index on ties). Samples
/// with an interior zero are redrawn.
pub fn sample_excursion<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Vec<f64>> {
    if m < 2 {
        return Err(Error::InvalidParameter(format!("grid size m = {m} must be at least 2")));
    }
    let sd = (1.0 / m as f64).sqrt();
    let mut walk = vec![0.0f64; m + 1];
    loop {
        for k in 1..=m {
            let g: f64 = StandardNormal.sample(rng);
            walk[k] = walk[k - 1] + sd * g;
        }
        let end = walk[m];
        let bridge: Vec<f64> = (0..m).map(|k| walk[k] - end * k as f64 / m as f64).collect();
        let mut tau = 0;
        for k in 1..m {
            if bridge[k] < bridge[tau] {
                tau = k;
            }
        }
        let mut e: Vec<f64> = (0..m).map(|k| bridge[(tau + k) % m] - bridge[tau]).collect();
        e.push(0.0);
        if e[1..m].iter().all(|&x| x > 0.0) {
            return Ok(e);
        }
    }
}

/// Rescaled contour `C_k/√m` of a uniform plane tree with `m/2` edges;
/// a cross-check for [`sample_excursion`].
pub fn sample_tree_excursion<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<Vec<f64>> {
    if m < 2 || !m.is_multiple_of(2) {
        return Err(Error::InvalidParameter(format!("grid size m = {m} must be even and at least 2")));
    }
    let edges = m / 2;
    // edges up-steps and edges+1 down-steps, rotated after the first
    // minimum: a uniform Dyck path followed by one down-step
    let mut steps: Vec<i8> = (0..2 * edges + 1).map(|i| if i < edges { 1 } else { -1 }).collect();
    for i in (1..steps.len()).rev() {
        let j = rng.gen_range(0..=i);
        steps.swap(i, j);
    }
    let (mut s, mut best, mut arg) = (0i64, i64::MAX, 0usize);
    for (j, &x) in steps.iter().enumerate() {
        s += x as i64;
        if s < best {
            best = s;
            arg = j;
        }
    }
    let len = steps.len();
    steps.rotate_left((arg + 1) % len);
    let scale = 1.0 / (m as f64).sqrt();
    let mut e = Vec::with_capacity(m + 1);
    let mut h = 0i64;
    e.push(0.0);
    for &x in &steps[..m] {
        h += x as i64;
        e.push(h as f64 * scale);
    }
    Ok(e)
}
