//! Linear-time uniform sampling of labeled four-type tree shapes.
//!
//! Collapsing everything between consecutive type-1 vertices, a type-1
//! vertex with `c` type-1 grandchildren-in-law carries ordered groups, each
//! a full binary tree of type-4 vertices whose leaves lead to those `c`
//! vertices. Weighting by the number of labelings, the groups of a vertex
//! with `c` such children have total weight `C(2c, c)`, so the collapsed
//! tree is a Galton–Watson tree with negative binomial offspring law
//! NB(1/2, 2/3) conditioned on its size. That conditioning is done
//! exactly: offspring given their sum, then the cycle lemma.

use rand::seq::SliceRandom;
use rand::Rng;
use rand_distr::{Distribution, Exp1, Gamma};
use statrs::function::gamma::ln_gamma;

use super::ttree::{sample_conditioned_ttree, RootType, TSamplerOptions, TTree, TType};
use crate::error::{Error, Result};

fn ln_catalan(k: usize) -> f64 {
    let k = k as f64;
    ln_gamma(2.0 * k + 1.0) - ln_gamma(k + 2.0) - ln_gamma(k + 1.0)
}

fn ln_central(c: usize) -> f64 {
    let c = c as f64;
    ln_gamma(2.0 * c + 1.0) - 2.0 * ln_gamma(c + 1.0)
}

/// `m` i.i.d. NB(1/2, 2/3) variables conditioned to sum to `total`. The
/// law is Poisson with a Gamma(1/2) rate, so given the sum the vector is
/// multinomial over Dirichlet(1/2, …, 1/2) weights; the `total` uniform
/// points come presorted from exponential spacings.
fn conditioned_negbin<R: Rng + ?Sized>(m: usize, total: usize, rng: &mut R) -> Vec<u32> {
    let gamma = Gamma::new(0.5, 1.0).expect("valid gamma parameters");
    let w: Vec<f64> = (0..m).map(|_| gamma.sample(rng)).collect();
    let w_sum: f64 = w.iter().sum();
    let e: Vec<f64> = (0..=total).map(|_| Exp1.sample(rng)).collect();
    let e_sum: f64 = e.iter().sum();
    let mut counts = vec![0u32; m];
    let (mut point, mut j, mut edge) = (0.0, 0usize, w[0] / w_sum);
    for x in &e[..total] {
        point += x / e_sum;
        while point >= edge && j + 1 < m {
            j += 1;
            edge += w[j] / w_sum;
        }
        counts[j] += 1;
    }
    counts
}

/// Log-probability that `m` i.i.d. NB(1/2, 2/3) variables sum to `s`.
fn ln_negbin_sum(m: usize, s: usize) -> f64 {
    let r = m as f64 / 2.0;
    let s = s as f64;
    ln_gamma(s + r) - ln_gamma(r) - ln_gamma(s + 1.0) + r * (1.0f64 / 3.0).ln() + s * (2.0f64 / 3.0).ln()
}

/// Draws from weights given in log scale over `lo..lo+len`.
fn sample_ln_weights<R: Rng + ?Sized>(lw: &[f64], rng: &mut R) -> usize {
    let top = lw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = lw.iter().map(|x| (x - top).exp()).collect();
    let total: f64 = w.iter().sum();
    let mut u = rng.gen::<f64>() * total;
    for (i, x) in w.iter().enumerate() {
        if u < *x {
            return i;
        }
        u -= x;
    }
    w.len() - 1
}

/// Group sizes for a type-1 vertex with `c` collapsed children: weight
/// `2^K Π Cat(L_i − 1)`.
fn type1_groups<R: Rng + ?Sized>(c: usize, rng: &mut R) -> Vec<usize> {
    let mut left = c;
    let mut out = Vec::new();
    while left > 0 {
        let lw: Vec<f64> =
            (1..=left).map(|l| 2f64.ln() + ln_catalan(l - 1) + ln_central(left - l) - ln_central(left)).collect();
        let l = 1 + sample_ln_weights(&lw, rng);
        out.push(l);
        left -= l;
    }
    out
}

/// Uniform full binary tree with `leaves` leaves, as a preorder word of
/// arities (2 or 0).
fn binary_word<R: Rng + ?Sized>(leaves: usize, rng: &mut R) -> Vec<u8> {
    let mut w: Vec<u8> = (0..2 * leaves - 1).map(|i| if i < leaves - 1 { 2 } else { 0 }).collect();
    w.shuffle(rng);
    let (mut s, mut best, mut arg) = (0i64, i64::MAX, 0usize);
    for (j, &a) in w.iter().enumerate() {
        s += a as i64 - 1;
        if s < best {
            best = s;
            arg = j;
        }
    }
    let len = w.len();
    w.rotate_left((arg + 1) % len);
    w
}

/// Uniform random shape from the family, weighted by labelings, so that
/// labeling it uniformly gives a uniform labeled tree. Runs in time
/// `O(n)` apart from the group-size draws.
pub fn sample_uniform_ttree_exact<R: Rng + ?Sized>(n: usize, root: RootType, rng: &mut R) -> Result<TTree> {
    if n < 3 {
        return Err(Error::InvalidParameter(format!("n = {n} must be at least 3")));
    }
    let m = n - 1;
    // collapsed offspring counts in preorder; for a type-2 root the first
    // entry is the root itself
    let mut counts: Vec<u32>;
    match root {
        RootType::One => {
            counts = conditioned_negbin(m, m - 1, rng);
            let (mut s, mut best, mut arg) = (0i64, i64::MAX, 0usize);
            for (j, &x) in counts.iter().enumerate() {
                s += x as i64 - 1;
                if s < best {
                    best = s;
                    arg = j;
                }
            }
            counts.rotate_left((arg + 1) % m);
        }
        RootType::Two => {
            // root arity c ≥ 2 with size-biased weight c·Cat(c−1)·6^{−c},
            // times the chance that the other m vertices have m − c children
            let lw: Vec<f64> = (2..=m)
                .map(|c| (c as f64).ln() + ln_catalan(c - 1) - c as f64 * 6f64.ln() + ln_negbin_sum(m, m - c))
                .collect();
            let c_root = 2 + sample_ln_weights(&lw, rng);
            let mut seq = conditioned_negbin(m, m - c_root, rng);
            // the c good rotations: strict prefix minima lying within c of
            // every later partial sum
            let mut pre = vec![0i64; m + 1];
            for j in 0..m {
                pre[j + 1] = pre[j] + seq[j] as i64 - 1;
            }
            let mut suffix_min = vec![i64::MAX; m + 2];
            for j in (1..=m).rev() {
                suffix_min[j] = suffix_min[j + 1].min(pre[j]);
            }
            let mut good = Vec::with_capacity(c_root);
            let mut run_min = pre[0];
            for t in 1..=m {
                if pre[t] < run_min && (t == m || pre[t] < suffix_min[t + 1] + c_root as i64) {
                    good.push(t);
                }
                run_min = run_min.min(pre[t]);
            }
            if good.len() != c_root {
                return Err(Error::Internal(format!("found {} good rotations, expected {c_root}", good.len())));
            }
            let t = good[rng.gen_range(0..good.len())];
            seq.rotate_left(t % m);
            counts = Vec::with_capacity(m + 1);
            counts.push(c_root as u32);
            counts.extend(seq);
        }
    }
    assemble(&counts, root, rng)
}

/// Shapes up to this size come from the rejection sampler, larger ones
/// from [`sample_uniform_ttree_exact`].
pub const TTREE_GW_MAX_N: usize = 64;

/// Uniform labeled tree of size `n`: the conditioned branching process for
/// small `n`, the collapsed-tree sampler above [`TTREE_GW_MAX_N`].
pub fn sample_uniform_ttree<R: Rng + ?Sized>(n: usize, root: RootType, rng: &mut R) -> Result<TTree> {
    if n <= TTREE_GW_MAX_N {
        Ok(sample_conditioned_ttree(n, root, rng, TSamplerOptions::default())?.shape)
    } else {
        sample_uniform_ttree_exact(n, root, rng)
    }
}

fn assemble<R: Rng + ?Sized>(counts: &[u32], root: RootType, rng: &mut R) -> Result<TTree> {
    // children lists of the collapsed tree
    let v = counts.len();
    let mut kids: Vec<Vec<u32>> = vec![Vec::new(); v];
    let mut stack: Vec<(u32, u32)> = Vec::new();
    for (i, &k) in counts.iter().enumerate() {
        if i > 0 {
            let top = stack.last_mut().ok_or_else(|| Error::Internal("collapsed word closes early".into()))?;
            top.1 -= 1;
            kids[top.0 as usize].push(i as u32);
            let done = top.1 == 0;
            if done {
                stack.pop();
            }
        }
        if k > 0 {
            stack.push((i as u32, k));
        }
        while matches!(stack.last(), Some(&(_, 0))) {
            stack.pop();
        }
    }
    let groups = |x: usize, rng: &mut R| -> Vec<Vec<u8>> {
        let c = kids[x].len();
        let sizes = if x == 0 && root == RootType::Two {
            let lw: Vec<f64> = (1..c).map(|l| ln_catalan(l - 1) + ln_catalan(c - l - 1)).collect();
            let l = 1 + sample_ln_weights(&lw, rng);
            vec![l, c - l]
        } else {
            type1_groups(c, rng)
        };
        sizes.into_iter().map(|l| binary_word(l, rng)).collect()
    };
    let mut word: Vec<(TType, u32)> = Vec::with_capacity(8 * v);
    struct Frame {
        x: usize,
        groups: Vec<Vec<u8>>,
        g: usize,
        pos: usize,
        next_child: usize,
    }
    let g0 = groups(0, rng);
    let root_is_two = root == RootType::Two;
    word.push(if root_is_two { (TType::Two, 2) } else { (TType::One, g0.len() as u32) });
    let mut frames = vec![Frame { x: 0, groups: g0, g: 0, pos: 0, next_child: 0 }];
    while let Some(f) = frames.last_mut() {
        if f.g == f.groups.len() {
            frames.pop();
            continue;
        }
        if f.pos == f.groups[f.g].len() {
            f.g += 1;
            f.pos = 0;
            continue;
        }
        let type_two_root = root_is_two && f.x == 0;
        if f.pos == 0 && !type_two_root {
            word.push((TType::Three, 1));
            word.push((TType::Two, 1));
        } else if f.pos > 0 {
            word.push((TType::Two, 1));
        }
        let arity = f.groups[f.g][f.pos];
        f.pos += 1;
        if arity == 2 {
            word.push((TType::Four, 2));
        } else {
            word.push((TType::Four, 1));
            let child = kids[f.x][f.next_child] as usize;
            f.next_child += 1;
            let gc = groups(child, rng);
            word.push((TType::One, gc.len() as u32));
            frames.push(Frame { x: child, groups: gc, g: 0, pos: 0, next_child: 0 });
        }
    }
    TTree::from_word(&word)
}
