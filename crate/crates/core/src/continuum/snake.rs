use nalgebra::{DMatrix, DVector};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use super::excursion::sample_excursion;
use crate::error::{Error, Result};
use crate::rmq::SparseMin;

/// Largest grid for which [`sample_labels`] factorizes the covariance
/// matrix; above it the tree recursion is used.
pub const DENSE_MAX_M: usize = 1024;

/// Excursion and Gaussian labels on the grid `k/m`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnakeGrid {
    pub m: usize,
    pub e: Vec<f64>,
    pub z: Vec<f64>,
    /// `−min Z`.
    pub delta: f64,
    /// Grid index of the minimum of `Z` (smallest on ties).
    pub s_star: usize,
}

impl SnakeGrid {
    pub fn new(e: Vec<f64>, z: Vec<f64>) -> Result<Self> {
        let m = e.len().saturating_sub(1);
        if m < 1 || z.len() != e.len() {
            return Err(Error::InvalidParameter("excursion and labels must have equal length ≥ 2".into()));
        }
        if e[0] != 0.0 || e[m] != 0.0 || e.iter().any(|&x| x < 0.0) {
            return Err(Error::InvalidParameter("excursion must be nonnegative and vanish at both ends".into()));
        }
        if z[0] != 0.0 {
            return Err(Error::InvalidParameter("labels must start at 0".into()));
        }
        let mut s_star = 0;
        for k in 1..=m {
            if z[k] < z[s_star] {
                s_star = k;
            }
        }
        Ok(SnakeGrid { m, delta: -z[s_star], s_star, e, z })
    }

    pub fn t(&self, k: usize) -> f64 {
        k as f64 / self.m as f64
    }

    /// The same sample read backwards in time.
    pub fn reversed(&self) -> SnakeGrid {
        let e = self.e.iter().rev().copied().collect();
        let z = self.z.iter().rev().copied().collect();
        SnakeGrid::new(e, z).expect("reversal keeps the grid valid")
    }
}

/// Parent of every grid index in the tree coded by `e`: the nearer-in-height
/// of the previous index with `e ≤` and the next index with `e <`. Index
/// `m` is identified with the root 0; the root's parent is itself.
pub fn excursion_tree(e: &[f64]) -> Vec<usize> {
    let m = e.len() - 1;
    let mut prev = vec![usize::MAX; m + 1];
    let mut next = vec![usize::MAX; m + 1];
    let mut stack: Vec<usize> = Vec::new();
    for k in 0..=m {
        while let Some(&top) = stack.last() {
            if e[top] > e[k] {
                next[top] = k;
                stack.pop();
            } else {
                break;
            }
        }
        prev[k] = stack.last().copied().unwrap_or(usize::MAX);
        stack.push(k);
    }
    let mut parent = vec![0; m + 1];
    for k in 1..m {
        let (a, b) = (prev[k], next[k]);
        let b = if b == m { 0 } else { b };
        parent[k] = match (a, b) {
            (usize::MAX, usize::MAX) => 0,
            (usize::MAX, b) => b,
            (a, usize::MAX) => a,
            (a, b) => {
                if e[a] >= e[b] {
                    a
                } else {
                    b
                }
            }
        };
    }
    parent
}

/// Gaussian labels with `E[Z_j Z_k] = min_{[j,k]} e`, by independent
/// increments along the branches of the tree coded by `e`.
pub fn sample_labels_tree<R: Rng + ?Sized>(e: &[f64], rng: &mut R) -> Vec<f64> {
    let m = e.len() - 1;
    let parent = excursion_tree(e);
    let order = topological_order(&parent);
    let mut z = vec![0.0; m + 1];
    for &k in &order {
        if k == 0 {
            continue;
        }
        let p = parent[k];
        let var = (e[k] - e[p]).max(0.0);
        let g: f64 = StandardNormal.sample(rng);
        z[k] = z[p] + var.sqrt() * g;
    }
    z[m] = 0.0;
    z
}

fn topological_order(parent: &[usize]) -> Vec<usize> {
    let n = parent.len() - 1;
    let mut kids: Vec<Vec<usize>> = vec![Vec::new(); n];
    for k in 1..n {
        kids[parent[k]].push(k);
    }
    let mut order = Vec::with_capacity(n);
    let mut stack = vec![0];
    while let Some(v) = stack.pop() {
        order.push(v);
        stack.extend(kids[v].iter().copied());
    }
    order
}

/// Cholesky factor of the label covariance on the interior indices
/// `1..m`. Adds `1e-12` to the diagonal if the plain factorization fails.
pub fn label_covariance_factor(e: &[f64]) -> Result<DMatrix<f64>> {
    let m = e.len() - 1;
    let d = m.saturating_sub(1);
    let mut cov = DMatrix::<f64>::zeros(d, d);
    for j in 0..d {
        let mut run = f64::INFINITY;
        for k in j..d {
            run = run.min(e[k + 1]);
            cov[(j, k)] = run;
            cov[(k, j)] = run;
        }
    }
    if let Some(c) = cov.clone().cholesky() {
        return Ok(c.l());
    }
    for j in 0..d {
        cov[(j, j)] += 1e-12;
    }
    cov.cholesky().map(|c| c.l()).ok_or(Error::NotPositiveDefinite)
}

/// Labels drawn as `L·N` from a precomputed factor.
pub fn sample_labels_dense<R: Rng + ?Sized>(factor: &DMatrix<f64>, rng: &mut R) -> Vec<f64> {
    let d = factor.nrows();
    let g = DVector::<f64>::from_fn(d, |_, _| StandardNormal.sample(rng));
    let x = factor * g;
    let mut z = Vec::with_capacity(d + 2);
    z.push(0.0);
    z.extend(x.iter().copied());
    z.push(0.0);
    z
}

/// Labels given `e`: dense factorization for `m ≤ DENSE_MAX_M`, tree
/// recursion above.
pub fn sample_labels<R: Rng + ?Sized>(e: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    if e.len() - 1 <= DENSE_MAX_M {
        Ok(sample_labels_dense(&label_covariance_factor(e)?, rng))
    } else {
        Ok(sample_labels_tree(e, rng))
    }
}

/// Excursion plus labels, the labels by the tree recursion (exact and
/// linear time at every m).
pub fn sample_snake<R: Rng + ?Sized>(m: usize, rng: &mut R) -> Result<SnakeGrid> {
    let e = sample_excursion(m, rng)?;
    let z = sample_labels_tree(&e, rng);
    SnakeGrid::new(e, z)
}

/// `dcirc(j, k) = Z_j + Z_k − 2·max(min_{[j,k]} Z, min_{[k,m]∪[0,j]} Z)`
/// with constant-time range minima.
pub struct CircularLabelDistance {
    z: Vec<f64>,
    rmq: SparseMin<f64>,
}

impl CircularLabelDistance {
    pub fn new(grid: &SnakeGrid) -> Self {
        CircularLabelDistance { z: grid.z.clone(), rmq: SparseMin::new(&grid.z) }
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        let (j, k) = (j.min(k), j.max(k));
        let m = self.z.len() - 1;
        let inner = self.rmq.min(j, k);
        let outer = self.rmq.min(k, m).min(self.rmq.min(0, j));
        self.z[j] + self.z[k] - 2.0 * inner.max(outer)
    }
}

/// One-off [`CircularLabelDistance::get`].
pub fn dcirc(grid: &SnakeGrid, j: usize, k: usize) -> f64 {
    let (j, k) = (j.min(k), j.max(k));
    let z = &grid.z;
    let inner = z[j..=k].iter().copied().fold(f64::INFINITY, f64::min);
    let outer = z[k..].iter().chain(&z[..=j]).copied().fold(f64::INFINITY, f64::min);
    z[j] + z[k] - 2.0 * inner.max(outer)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn tree_parent_gives_range_minima() {
        let mut rng = from_seed(5);
        let e = sample_excursion(40, &mut rng).unwrap();
        let parent = excursion_tree(&e);
        let depth_path = |mut k: usize| {
            let mut p = vec![k];
            while k != 0 {
                k = parent[k];
                p.push(k);
            }
            p
        };
        for j in 1..40 {
            for k in j + 1..40 {
                let pj = depth_path(j);
                let pk = depth_path(k);
                let lca = *pj.iter().find(|x| pk.contains(x)).unwrap();
                let want = e[j..=k].iter().copied().fold(f64::INFINITY, f64::min);
                assert_eq!(e[lca], want);
            }
        }
    }

    #[test]
    fn dcirc_fast_matches_direct() {
        let mut rng = from_seed(6);
        let g = sample_snake(64, &mut rng).unwrap();
        let fast = CircularLabelDistance::new(&g);
        for j in 0..=64 {
            assert_eq!(dcirc(&g, j, j), 0.0);
            assert!((dcirc(&g, j, g.s_star) - (g.z[j] + g.delta)).abs() < 1e-12);
            for k in 0..=64 {
                assert_eq!(fast.get(j, k), dcirc(&g, j, k));
                assert!(dcirc(&g, j, k) >= (g.z[j] - g.z[k]).abs() - 1e-12);
            }
        }
    }
}
