use rand::seq::index;
use rand::Rng;
use rand_distr::{Distribution, Geometric};

use super::plane::PlaneTree;
use crate::error::{Error, Result};

/// Galton–Watson samples smaller than this many black vertices use
/// rejection; larger ones go through the cycle-lemma path.
pub const GW_REJECTION_MAX_N: usize = 256;

/// A p-tree carrying an admissible labeling of its white vertices.
///
/// `labels[v]` is meaningful for white vertices only (even depth); black
/// entries are stored as 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LabeledPTree {
    tree: PlaneTree,
    p: usize,
    labels: Vec<i32>,
}

impl LabeledPTree {
    /// Checks every structural and labeling constraint.
    pub fn new(tree: PlaneTree, p: usize, labels: Vec<i32>) -> Result<Self> {
        check_ptree(&tree, p)?;
        if labels.len() != tree.len() {
            return Err(Error::InvalidParameter("label vector has wrong length".into()));
        }
        if labels[0] != 0 {
            return Err(Error::InvalidParameter("root label must be 0".into()));
        }
        for b in (0..tree.len()).filter(|&v| tree.depth(v) % 2 == 1) {
            let parent = tree.parent(b).expect("black vertex has a parent");
            let mut prev = labels[parent];
            let mut sum = 0i64;
            for w in tree.children(b).chain(std::iter::once(parent)) {
                let d = labels[w] - prev;
                if d < -1 {
                    return Err(Error::InvalidParameter(format!("label decreases by {} around black vertex {b}", -d)));
                }
                sum += d as i64;
                prev = labels[w];
            }
            debug_assert_eq!(sum, 0);
        }
        let labels =
            labels.into_iter().enumerate().map(|(v, l)| if tree.depth(v).is_multiple_of(2) { l } else { 0 }).collect();
        Ok(LabeledPTree { tree, p, labels })
    }

    pub(crate) fn from_parts_unchecked(tree: PlaneTree, p: usize, labels: Vec<i32>) -> Self {
        LabeledPTree { tree, p, labels }
    }

    pub fn tree(&self) -> &PlaneTree {
        &self.tree
    }

    pub fn p(&self) -> usize {
        self.p
    }

    /// Number of black vertices.
    pub fn n(&self) -> usize {
        (self.tree.len() - 1) / self.p
    }

    pub fn label(&self, v: usize) -> i32 {
        self.labels[v]
    }

    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn is_white(&self, v: usize) -> bool {
        self.tree.depth(v).is_multiple_of(2)
    }

    pub fn white_count(&self) -> usize {
        (self.p - 1) * self.n() + 1
    }

    pub fn min_label(&self) -> i32 {
        (0..self.tree.len()).filter(|&v| self.is_white(v)).map(|v| self.labels[v]).min().unwrap_or(0)
    }
}

/// Verifies that `tree` is a p-tree: every odd-depth vertex has p−1 children.
pub fn check_ptree(tree: &PlaneTree, p: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("arity p = {p} < 2")));
    }
    for v in 0..tree.len() {
        if tree.depth(v) % 2 == 1 && tree.child_count(v) != p - 1 {
            return Err(Error::InvalidParameter(format!(
                "black vertex {v} has {} children, expected {}",
                tree.child_count(v),
                p - 1
            )));
        }
    }
    Ok(())
}

fn check_params(p: usize, n: usize) -> Result<()> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("arity p = {p} < 2")));
    }
    if n < 1 {
        return Err(Error::InvalidParameter("need at least one black vertex".into()));
    }
    Ok(())
}

/// Expands the per-white black-child counts (white preorder) into the
/// full preorder child-count word of the p-tree.
pub(crate) fn expand_white_counts(p: usize, white_counts: &[u32]) -> Result<PlaneTree> {
    enum Frame {
        White(u32),
        Black(u32),
    }
    let n: u64 = white_counts.iter().map(|&k| k as u64).sum();
    let mut counts = Vec::with_capacity(white_counts.len() + n as usize);
    let mut next = 0usize;
    let mut take_white = |counts: &mut Vec<u32>| -> Result<u32> {
        let k = *white_counts.get(next).ok_or_else(|| Error::InvalidParameter("white count word too short".into()))?;
        next += 1;
        counts.push(k);
        Ok(k)
    };
    let k0 = take_white(&mut counts)?;
    let mut stack = vec![Frame::White(k0)];
    while let Some(top) = stack.last_mut() {
        match top {
            Frame::White(0) | Frame::Black(0) => {
                stack.pop();
            }
            Frame::White(r) => {
                *r -= 1;
                counts.push(p as u32 - 1);
                stack.push(Frame::Black(p as u32 - 1));
            }
            Frame::Black(r) => {
                *r -= 1;
                let k = take_white(&mut counts)?;
                stack.push(Frame::White(k));
            }
        }
    }
    if next != white_counts.len() {
        return Err(Error::InvalidParameter("white count word too long".into()));
    }
    PlaneTree::from_child_counts(&counts)
}

/// Uniform p-tree with `n` black vertices.
///
/// Small `n` uses Galton–Watson rejection, larger `n` the cycle-lemma path;
/// both are exactly uniform.
pub fn sample_uniform_ptree<R: Rng + ?Sized>(p: usize, n: usize, rng: &mut R) -> Result<PlaneTree> {
    if n <= GW_REJECTION_MAX_N {
        sample_uniform_ptree_gw(p, n, rng, u64::MAX)
    } else {
        sample_uniform_ptree_exact(p, n, rng)
    }
}

/// Galton–Watson tree (geometric number of black children per white vertex,
/// p−1 white children per black vertex) conditioned on `n` black vertices.
///
/// Every p-tree with `n` black vertices has the same probability
/// `(1−β)^{(p−1)n+1} β^n`, so the conditioned law is uniform for any β; we
/// use the critical value β = 1/p so that acceptance decays polynomially.
pub fn sample_uniform_ptree_gw<R: Rng + ?Sized>(
    p: usize,
    n: usize,
    rng: &mut R,
    max_attempts: u64,
) -> Result<PlaneTree> {
    check_params(p, n)?;
    let geom = Geometric::new(1.0 - 1.0 / p as f64).expect("valid success probability");
    let mut white_counts: Vec<u32> = Vec::new();
    for _attempt in 0..max_attempts {
        white_counts.clear();
        // pending white vertices still to be generated
        let mut pending: u64 = 1;
        let mut blacks: usize = 0;
        let mut ok = true;
        while pending > 0 {
            pending -= 1;
            let k = geom.sample(rng).min(u32::MAX as u64) as u32;
            blacks += k as usize;
            if blacks > n {
                ok = false;
                break;
            }
            white_counts.push(k);
            pending += k as u64 * (p as u64 - 1);
        }
        if ok && blacks == n {
            return expand_white_counts(p, &white_counts);
        }
    }
    Err(Error::RejectionBudget { attempts: max_attempts, rate: 0.0 })
}

/// Exact linear-time sampler: uniform weak composition of `n` into the
/// (p−1)n+1 white slots, rotated onto the unique valid Łukasiewicz word.
pub fn sample_uniform_ptree_exact<R: Rng + ?Sized>(p: usize, n: usize, rng: &mut R) -> Result<PlaneTree> {
    check_params(p, n)?;
    let w = (p - 1) * n + 1;
    let mut bars = index::sample(rng, n + w - 1, w - 1).into_vec();
    bars.sort_unstable();
    let mut ks = Vec::with_capacity(w);
    let mut prev: isize = -1;
    for &b in &bars {
        ks.push((b as isize - prev - 1) as u32);
        prev = b as isize;
    }
    ks.push((n + w - 1 - (prev + 1) as usize) as u32);
    let start = cycle_lemma_start(&ks, p);
    ks.rotate_left(start);
    expand_white_counts(p, &ks)
}

/// Rotation offset that turns a word with step sum −1 into a valid
/// Łukasiewicz word: one past the first position of the minimal prefix sum.
pub(crate) fn cycle_lemma_start(ks: &[u32], p: usize) -> usize {
    let mut s: i64 = 0;
    let mut best = i64::MAX;
    let mut arg = 0;
    for (j, &k) in ks.iter().enumerate() {
        s += (p as i64 - 1) * k as i64 - 1;
        if s < best {
            best = s;
            arg = j;
        }
    }
    (arg + 1) % ks.len()
}

/// All increment vectors `(d_0..d_{p-1})` with `d_i >= -1` summing to 0,
/// in lexicographic order.
pub fn increment_vectors(p: usize) -> Vec<Vec<i32>> {
    fn rec(p: usize, left: i32, cur: &mut Vec<i32>, out: &mut Vec<Vec<i32>>) {
        if cur.len() == p - 1 {
            cur.push(-left);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        let slots_after = (p - 1 - cur.len()) as i32;
        // remaining entries are all >= -1, so the running sum stays bounded
        for d in -1..=(slots_after - left) {
            cur.push(d);
            rec(p, left + d, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(p, 0, &mut Vec::with_capacity(p), &mut out);
    out
}

/// Uniform increment vector by stars and bars.
pub fn sample_increment_vector<R: Rng + ?Sized>(p: usize, rng: &mut R, out: &mut Vec<i32>) {
    let mut bars = index::sample(rng, 2 * p - 1, p - 1).into_vec();
    bars.sort_unstable();
    out.clear();
    let mut prev: isize = -1;
    for &b in &bars {
        out.push((b as isize - prev - 1) as i32 - 1);
        prev = b as isize;
    }
    out.push((2 * p as isize - 1 - (prev + 1)) as i32 - 1);
}

/// Uniform admissible labeling of a p-tree; increments around distinct
/// black vertices are independent.
pub fn sample_admissible_labels<R: Rng + ?Sized>(tree: PlaneTree, p: usize, rng: &mut R) -> Result<LabeledPTree> {
    check_ptree(&tree, p)?;
    let mut labels = vec![0i32; tree.len()];
    let mut inc = Vec::with_capacity(p);
    for b in 0..tree.len() {
        if tree.depth(b).is_multiple_of(2) {
            continue;
        }
        sample_increment_vector(p, rng, &mut inc);
        let mut l = labels[tree.parent(b).expect("black has parent")];
        for (c, d) in tree.children(b).zip(inc.iter()) {
            l += d;
            labels[c] = l;
        }
    }
    Ok(LabeledPTree { tree, p, labels })
}

/// Uniform element of the labeled p-trees with `n` black vertices.
pub fn sample_labeled_ptree<R: Rng + ?Sized>(p: usize, n: usize, rng: &mut R) -> Result<LabeledPTree> {
    let tree = sample_uniform_ptree(p, n, rng)?;
    sample_admissible_labels(tree, p, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    fn binom(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn increment_support_sizes() {
        assert_eq!(increment_vectors(2), vec![vec![-1, 1], vec![0, 0], vec![1, -1]]);
        for p in 2..7 {
            let all = increment_vectors(p);
            assert_eq!(all.len() as u64, binom(2 * p as u64 - 1, p as u64 - 1));
            assert!(all.iter().all(|d| d.iter().sum::<i32>() == 0 && d.iter().all(|&x| x >= -1)));
        }
    }

    #[test]
    fn stars_and_bars_hits_support() {
        let mut rng = from_seed(3);
        let support = increment_vectors(3);
        let mut v = Vec::new();
        for _ in 0..200 {
            sample_increment_vector(3, &mut rng, &mut v);
            assert!(support.contains(&v));
        }
    }

    #[test]
    fn unique_shape_for_one_black() {
        let mut rng = from_seed(1);
        let t = sample_uniform_ptree_gw(2, 1, &mut rng, 1000).unwrap();
        assert_eq!(t.child_counts(), &[1, 1, 0]);
    }

    #[test]
    fn exact_sampler_counts() {
        let mut rng = from_seed(9);
        let t = sample_uniform_ptree_exact(3, 1000, &mut rng).unwrap();
        check_ptree(&t, 3).unwrap();
        let whites = (0..t.len()).filter(|&v| t.depth(v).is_multiple_of(2)).count();
        assert_eq!(whites, 2001);
        assert_eq!(t.len() - 1, 3000);
    }

    #[test]
    fn sampled_labels_are_admissible() {
        let mut rng = from_seed(5);
        for p in [2, 3, 5] {
            let th = sample_labeled_ptree(p, 40, &mut rng).unwrap();
            let re = LabeledPTree::new(th.tree().clone(), p, th.labels().to_vec()).unwrap();
            assert_eq!(re, th);
            assert_eq!(th.label(0), 0);
        }
    }

    #[test]
    fn rejects_bad_labels() {
        let t = PlaneTree::from_child_counts(&[1, 1, 0]).unwrap();
        assert!(LabeledPTree::new(t.clone(), 2, vec![0, 0, -2]).is_err());
        assert!(LabeledPTree::new(t, 2, vec![0, 0, 1]).is_ok());
    }
}
