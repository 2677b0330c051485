use super::ttree::{LabeledTTree, RootType, TTree, TType};
use crate::error::{Error, Result};

/// All four-type tree shapes with `n − 1` type-1 vertices and the given
/// root type, in lexicographic order of their preorder words.
pub fn ttree_shapes(n: usize, root: RootType) -> Vec<TTree> {
    let mut out = Vec::new();
    if n < 3 {
        return out;
    }
    let mut word = Vec::new();
    let mut pending = Vec::new();
    match root {
        RootType::One => pending.push(TType::One),
        RootType::Two => {
            word.push((TType::Two, 2));
            pending.extend([TType::Four, TType::Four]);
        }
    }
    rec(n - 1, &mut pending, &mut word, &mut out);
    out.sort_by_key(|a| a.word());
    out
}

fn rec(budget: usize, pending: &mut Vec<TType>, word: &mut Vec<(TType, u32)>, out: &mut Vec<TTree>) {
    let Some(t) = pending.pop() else {
        if budget == 0 {
            out.push(TTree::from_word(word).expect("generated words are valid"));
        }
        return;
    };
    // each pending vertex yields at least one type-1 vertex
    if pending.len() + 1 > budget {
        pending.push(t);
        return;
    }
    let mut branch = |pending: &mut Vec<TType>, k: u32, kids: &[TType], used: usize| {
        let mark = pending.len();
        word.push((t, k));
        pending.extend_from_slice(kids);
        rec(budget - used, pending, word, out);
        pending.truncate(mark);
        word.pop();
    };
    match t {
        TType::One => {
            let mut k = 0;
            while pending.len() + k < budget {
                let kids = vec![TType::Three; k];
                branch(pending, k as u32, &kids, 1);
                k += 1;
            }
        }
        TType::Two => branch(pending, 1, &[TType::Four], 0),
        TType::Three => branch(pending, 1, &[TType::Two], 0),
        TType::Four => {
            branch(pending, 1, &[TType::One], 0);
            branch(pending, 2, &[TType::Two, TType::Two], 0);
        }
    }
    pending.push(t);
}

/// Calls `f` on every admissible labeling of `shape`; the free bits are
/// taken in preorder, the last one varying fastest.
pub fn for_each_tlabeling<F: FnMut(&LabeledTTree)>(shape: &TTree, mut f: F) {
    let tree = shape.tree();
    let free: Vec<usize> = (1..tree.len())
        .filter(|&v| {
            let t = shape.ttype(v);
            let mid = tree.parent(v).map(|m| shape.ttype(m));
            t.is_white() && !(t == TType::Two && mid == Some(TType::Four))
        })
        .collect();
    let m = free.len();
    for mask in 0u64..(1u64 << m) {
        let mut labels = vec![0i32; tree.len()];
        let mut bit = 0;
        for v in 1..tree.len() {
            let t = shape.ttype(v);
            if !t.is_white() {
                continue;
            }
            let mid = tree.parent(v).expect("non-root");
            let gp = tree.parent(mid).expect("grandparent");
            let b = |bit: usize| ((mask >> (m - 1 - bit)) & 1) as i32;
            labels[v] = match (t, shape.ttype(mid)) {
                (TType::Two, TType::Four) => labels[gp],
                (TType::Two, _) => {
                    bit += 1;
                    labels[gp] + b(bit - 1)
                }
                _ => {
                    bit += 1;
                    labels[gp] - b(bit - 1)
                }
            };
        }
        let l = LabeledTTree::new(shape.clone(), labels).expect("constructed labeling is admissible");
        f(&l);
    }
}

/// Every labeled tree of the family, shapes in [`ttree_shapes`] order.
pub fn enumerate_labeled_ttrees(n: usize, root: RootType, cap: u64) -> Result<Vec<LabeledTTree>> {
    let shapes = ttree_shapes(n, root);
    let total: u64 = shapes.iter().map(|s| 1u64 << s.label_degrees_of_freedom()).sum();
    if total > cap {
        return Err(Error::CapExceeded { cap });
    }
    let mut out = Vec::with_capacity(total as usize);
    for s in &shapes {
        for_each_tlabeling(s, |l| out.push(l.clone()));
    }
    Ok(out)
}

/// Counts integer labelings of `shape` satisfying the admissibility rules
/// by brute force over the box `[−r, r]` for every white vertex.
pub fn brute_force_tlabel_count(shape: &TTree) -> u64 {
    let tree = shape.tree();
    let whites: Vec<usize> = (1..tree.len()).filter(|&v| shape.ttype(v).is_white()).collect();
    let r = whites.len() as i32 + 1;
    let mut labels = vec![0i32; tree.len()];
    let mut count = 0;
    let width = (2 * r + 1) as u64;
    let total = width.pow(whites.len() as u32);
    for code in 0..total {
        let mut c = code;
        for &w in &whites {
            labels[w] = (c % width) as i32 - r;
            c /= width;
        }
        if LabeledTTree::new(shape.clone(), labels.clone()).is_ok() {
            count += 1;
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn smallest_families() {
        let pos = ttree_shapes(3, RootType::One);
        assert_eq!(pos.len(), 1);
        let null = ttree_shapes(3, RootType::Two);
        assert_eq!(null.len(), 1);
        assert_eq!(enumerate_labeled_ttrees(3, RootType::One, 100).unwrap().len(), 4);
        assert_eq!(enumerate_labeled_ttrees(3, RootType::Two, 100).unwrap().len(), 4);
    }

    #[test]
    fn labeling_count_matches_brute_force() {
        for n in 3..=5 {
            for root in [RootType::One, RootType::Two] {
                for s in ttree_shapes(n, root) {
                    let whites = s.types().iter().filter(|t| t.is_white()).count();
                    if whites > 6 {
                        continue;
                    }
                    assert_eq!(brute_force_tlabel_count(&s), 1 << s.label_degrees_of_freedom());
                }
            }
        }
    }

    #[test]
    fn shapes_have_the_right_size_and_are_distinct() {
        for n in 3..=7 {
            for root in [RootType::One, RootType::Two] {
                let shapes = ttree_shapes(n, root);
                assert!(shapes.iter().all(|s| s.n() == n && s.root_type() == root));
                let mut words: Vec<_> = shapes.iter().map(TTree::word).collect();
                words.dedup();
                assert_eq!(words.len(), shapes.len());
            }
        }
    }
}
