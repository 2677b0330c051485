use super::contour::contour_and_labels;
use super::plane::PlaneTree;
use super::ptree::LabeledPTree;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

/// A subtree grafted on the ancestral line of a corner.
#[derive(Clone, Debug)]
pub struct BranchSubtree {
    pub side: Side,
    /// Half-generation of the subtree root.
    pub level: u32,
    /// Re-rooted copy, labels shifted so the root has label 0.
    pub tree: LabeledPTree,
    /// Original vertex of each subtree vertex (subtree preorder).
    pub vertices: Vec<u32>,
}

/// Subtrees hanging off the ancestral line of corner `corner` strictly
/// after it (`Right`) or strictly before it (`Left`) in contour order.
///
/// Grafts at a white line vertex `u` are grouped per black child: the
/// subtree is `u` with that one black child and its descendants. Grafts at
/// a black line vertex are the white siblings of the line, one subtree
/// each.
pub fn branching_subtrees(theta: &LabeledPTree, corner: usize, side: Side) -> Result<Vec<BranchSubtree>> {
    let cc = contour_and_labels(theta);
    if corner > cc.len() {
        return Err(Error::InvalidParameter(format!("corner {corner} > pn = {}", cc.len())));
    }
    let tree = theta.tree();
    let v = cc.vertices[corner] as usize;
    let rank = cc.vertices[..corner].iter().filter(|&&x| x as usize == v).count();
    let sizes = tree.subtree_sizes();
    let mut line = vec![v];
    while let Some(p) = tree.parent(*line.last().expect("nonempty")) {
        line.push(p);
    }
    line.reverse();

    let mut out = Vec::new();
    let group = |u: usize, b: usize, out: &mut Vec<BranchSubtree>| {
        let mut counts = vec![1u32];
        let mut vertices = vec![u as u32];
        let base = theta.label(u);
        let mut labels = vec![0];
        for x in b..b + sizes[b] as usize {
            counts.push(tree.child_count(x) as u32);
            vertices.push(x as u32);
            labels.push(if theta.is_white(x) { theta.label(x) - base } else { 0 });
        }
        out.push(BranchSubtree {
            side,
            level: tree.depth(u) / 2,
            tree: LabeledPTree::from_parts_unchecked(
                PlaneTree::from_child_counts(&counts).expect("subtree word is valid"),
                theta.p(),
                labels,
            ),
            vertices,
        });
    };
    let single = |w: usize, out: &mut Vec<BranchSubtree>| {
        let base = theta.label(w);
        let range = w..w + sizes[w] as usize;
        let counts: Vec<u32> = range.clone().map(|x| tree.child_count(x) as u32).collect();
        let labels = range.clone().map(|x| if theta.is_white(x) { theta.label(x) - base } else { 0 }).collect();
        out.push(BranchSubtree {
            side,
            level: tree.depth(w) / 2,
            tree: LabeledPTree::from_parts_unchecked(
                PlaneTree::from_child_counts(&counts).expect("subtree word is valid"),
                theta.p(),
                labels,
            ),
            vertices: range.map(|x| x as u32).collect(),
        });
    };

    match side {
        Side::Left => {
            for j in 0..line.len() - 1 {
                let x = line[j];
                let next = line[j + 1];
                for c in tree.children(x).take_while(|&c| c != next) {
                    if theta.is_white(x) {
                        group(x, c, &mut out);
                    } else {
                        single(c, &mut out);
                    }
                }
            }
            for b in tree.children(v).take(rank) {
                group(v, b, &mut out);
            }
        }
        Side::Right => {
            for b in tree.children(v).skip(rank) {
                group(v, b, &mut out);
            }
            for j in (0..line.len() - 1).rev() {
                let x = line[j];
                let next = line[j + 1];
                for c in tree.children(x).skip_while(|&c| c != next).skip(1) {
                    if theta.is_white(x) {
                        group(x, c, &mut out);
                    } else {
                        single(c, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;
    use crate::trees::ptree::sample_labeled_ptree;

    #[test]
    fn root_corner_right_is_child_groups() {
        let mut rng = from_seed(2);
        let th = sample_labeled_ptree(3, 12, &mut rng).unwrap();
        let subs = branching_subtrees(&th, 0, Side::Right).unwrap();
        assert_eq!(subs.len(), th.tree().child_count(0));
        assert!(subs.iter().all(|s| s.level == 0 && s.tree.label(0) == 0));
        assert!(branching_subtrees(&th, 0, Side::Left).unwrap().is_empty());
    }

    #[test]
    fn fan_first_leaf() {
        // ∅ with two black children, each with one white leaf
        let t = PlaneTree::from_child_counts(&[2, 1, 0, 1, 0]).unwrap();
        let th = LabeledPTree::new(t, 2, vec![0, 0, 1, 0, -1]).unwrap();
        let subs = branching_subtrees(&th, 1, Side::Right).unwrap();
        assert_eq!(subs.len(), 1);
        assert_eq!(subs[0].level, 0);
        assert_eq!(subs[0].vertices, vec![0, 3, 4]);
        assert_eq!(subs[0].tree.label(2), -1);
    }

    #[test]
    fn sides_partition_the_tree() {
        let mut rng = from_seed(8);
        for p in [2, 3, 4] {
            let th = sample_labeled_ptree(p, 30, &mut rng).unwrap();
            let pn = p * 30;
            for corner in [0, 1, pn / 3, pn / 2, pn - 1, pn] {
                let cc = contour_and_labels(&th);
                let v = cc.vertices[corner] as usize;
                let mut seen = vec![0u32; th.tree().len()];
                let mut x = Some(v);
                while let Some(y) = x {
                    seen[y] += 1;
                    x = th.tree().parent(y);
                }
                for side in [Side::Left, Side::Right] {
                    for s in branching_subtrees(&th, corner, side).unwrap() {
                        let graft_copy = th.is_white(s.vertices[0] as usize)
                            && s.tree.tree().child_count(0) == 1
                            && s.vertices.len() > 1
                            && th.tree().parent(s.vertices[1] as usize) == Some(s.vertices[0] as usize)
                            && seen[s.vertices[0] as usize] > 0;
                        let skip = usize::from(graft_copy);
                        for &u in &s.vertices[skip..] {
                            seen[u as usize] += 1;
                        }
                    }
                }
                assert!(seen.iter().all(|&c| c == 1), "p={p} corner={corner}");
            }
        }
    }
}
