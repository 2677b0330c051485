use super::contour::contour_and_labels;
use super::plane::PlaneTree;
use super::ptree::{expand_white_counts, increment_vectors, LabeledPTree};
use crate::error::{Error, Result};

pub const DEFAULT_ENUMERATION_CAP: u64 = 10_000_000;

/// All p-tree shapes with `n` black vertices, sorted lexicographically by
/// their white contour.
pub fn ptree_shapes(p: usize, n: usize) -> Result<Vec<PlaneTree>> {
    if p < 2 || n < 1 {
        return Err(Error::InvalidParameter(format!("bad (p, n) = ({p}, {n})")));
    }
    let w = (p - 1) * n + 1;
    let mut words = Vec::new();
    let mut cur = Vec::with_capacity(w);
    fn rec(p: usize, w: usize, left: usize, open: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        // `open` = white vertices announced but not yet generated, including
        // the one being chosen now
        let pos = cur.len();
        if pos == w {
            if left == 0 && open == 0 {
                out.push(cur.clone());
            }
            return;
        }
        for k in 0..=left {
            let open_after = open - 1 + k * (p - 1);
            if open_after == 0 && pos + 1 < w {
                continue;
            }
            if open_after > w - pos - 1 {
                break;
            }
            cur.push(k as u32);
            rec(p, w, left - k, open_after, cur, out);
            cur.pop();
        }
    }
    rec(p, w, n, 1, &mut cur, &mut words);
    let mut shapes: Vec<(Vec<u32>, PlaneTree)> = words
        .iter()
        .map(|ws| {
            let t = expand_white_counts(p, ws)?;
            let c = t.dfs_sequence().iter().step_by(2).map(|&v| t.depth(v as usize) / 2).collect();
            Ok((c, t))
        })
        .collect::<Result<_>>()?;
    shapes.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(shapes.into_iter().map(|(_, t)| t).collect())
}

/// Number of labeled p-trees with `n` black vertices (saturating).
pub fn labeled_ptree_count(p: usize, n: usize) -> Result<u128> {
    let shapes = ptree_shapes(p, n)?.len() as u128;
    let per = increment_vectors(p).len() as u128;
    Ok((0..n).fold(shapes, |acc, _| acc.saturating_mul(per)))
}

/// Visits every labeled p-tree: shapes in contour order, then labelings in
/// odometer order over black vertices (preorder, last black fastest), each
/// black vertex running through its increment vectors lexicographically.
pub fn for_each_labeled_ptree<F: FnMut(&LabeledPTree)>(p: usize, n: usize, cap: u64, mut f: F) -> Result<u64> {
    let shapes = ptree_shapes(p, n)?;
    let incs = increment_vectors(p);
    let total = (0..n).fold(shapes.len() as u128, |acc, _| acc.saturating_mul(incs.len() as u128));
    if total > cap as u128 {
        return Err(Error::CapExceeded { cap });
    }
    let mut count = 0u64;
    for tree in shapes {
        let blacks: Vec<usize> = (0..tree.len()).filter(|&v| tree.depth(v) % 2 == 1).collect();
        let mut digits = vec![0usize; blacks.len()];
        let mut labels = vec![0i32; tree.len()];
        loop {
            for (bi, &b) in blacks.iter().enumerate() {
                let mut l = labels[tree.parent(b).expect("black has parent")];
                for (c, d) in tree.children(b).zip(incs[digits[bi]].iter()) {
                    l += d;
                    labels[c] = l;
                }
            }
            f(&LabeledPTree::from_parts_unchecked(tree.clone(), p, labels.clone()));
            count += 1;
            let mut i = digits.len();
            loop {
                if i == 0 {
                    break;
                }
                i -= 1;
                digits[i] += 1;
                if digits[i] < incs.len() {
                    break;
                }
                digits[i] = 0;
                if i == 0 {
                    i = usize::MAX;
                    break;
                }
            }
            if i == usize::MAX {
                break;
            }
        }
    }
    Ok(count)
}

pub fn enumerate_labeled_ptrees(p: usize, n: usize, cap: u64) -> Result<Vec<LabeledPTree>> {
    let mut out = Vec::new();
    for_each_labeled_ptree(p, n, cap, |t| out.push(t.clone()))?;
    Ok(out)
}

/// Lexicographic key on (C, Λ), handy for canonical sorting.
pub fn coding_key(theta: &LabeledPTree) -> (Vec<u32>, Vec<i32>) {
    let cc = contour_and_labels(theta);
    (cc.c, cc.lambda)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    fn fuss_catalan(p: u64, n: u64) -> u64 {
        let mut b = 1u64;
        for i in 0..n {
            b = b * (p * n - i) / (i + 1);
        }
        b / ((p - 1) * n + 1)
    }

    #[test]
    fn small_counts() {
        assert_eq!(enumerate_labeled_ptrees(2, 1, 100).unwrap().len(), 3);
        assert_eq!(ptree_shapes(2, 2).unwrap().len(), 2);
        assert_eq!(enumerate_labeled_ptrees(2, 2, 100).unwrap().len(), 18);
        let p3 = enumerate_labeled_ptrees(3, 1, 100).unwrap();
        assert_eq!(p3.len(), 10);
        assert_eq!(p3[0].tree().child_counts(), &[1, 2, 0, 0]);
    }

    #[test]
    fn shape_counts_match_fuss_catalan() {
        for p in 2..5u64 {
            for n in 1..6u64 {
                assert_eq!(ptree_shapes(p as usize, n as usize).unwrap().len() as u64, fuss_catalan(p, n));
            }
        }
    }

    #[test]
    fn labeled_trees_are_distinct_and_valid() {
        let all = enumerate_labeled_ptrees(3, 2, 1000).unwrap();
        assert_eq!(all.len(), 3 * 100);
        let keys: HashSet<_> = all.iter().map(coding_key).collect();
        assert_eq!(keys.len(), all.len());
        for t in &all {
            LabeledPTree::new(t.tree().clone(), 3, t.labels().to_vec()).unwrap();
        }
    }

    #[test]
    fn cap_is_enforced() {
        assert!(matches!(for_each_labeled_ptree(3, 4, 1000, |_| {}), Err(Error::CapExceeded { cap: 1000 })));
    }
}
