use crate::error::{Error, Result};

pub(crate) const NONE: u32 = u32::MAX;

/// Ordered rooted tree with vertices indexed in depth-first (preorder) order.
/// Vertex 0 is the root.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PlaneTree {
    parent: Vec<u32>,
    first_child: Vec<u32>,
    next_sibling: Vec<u32>,
    child_count: Vec<u32>,
    depth: Vec<u32>,
}

impl PlaneTree {
    /// Builds a tree from its preorder sequence of child counts
    /// (the Łukasiewicz word).
    pub fn from_child_counts(counts: &[u32]) -> Result<Self> {
        let v = counts.len();
        if v == 0 {
            return Err(Error::InvalidParameter("empty child-count sequence".into()));
        }
        let mut parent = vec![NONE; v];
        let mut first_child = vec![NONE; v];
        let mut next_sibling = vec![NONE; v];
        let mut depth = vec![0u32; v];
        let mut last_child = vec![NONE; v];
        // (vertex, children still to attach)
        let mut stack: Vec<(u32, u32)> = Vec::new();
        for (i, &k) in counts.iter().enumerate() {
            let i32_ = i as u32;
            if i > 0 {
                let top = match stack.last_mut() {
                    Some(t) => t,
                    None => {
                        return Err(Error::InvalidParameter(format!("child counts close the tree before vertex {i}")))
                    }
                };
                let p = top.0;
                top.1 -= 1;
                parent[i] = p;
                depth[i] = depth[p as usize] + 1;
                if last_child[p as usize] == NONE {
                    first_child[p as usize] = i32_;
                } else {
                    next_sibling[last_child[p as usize] as usize] = i32_;
                }
                last_child[p as usize] = i32_;
            }
            while matches!(stack.last(), Some(&(_, 0))) {
                stack.pop();
            }
            if k > 0 {
                stack.push((i32_, k));
            }
        }
        if !stack.is_empty() {
            return Err(Error::InvalidParameter("child counts leave unfilled child slots".into()));
        }
        Ok(PlaneTree { parent, first_child, next_sibling, child_count: counts.to_vec(), depth })
    }

    pub fn len(&self) -> usize {
        self.parent.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parent.is_empty()
    }

    pub fn parent(&self, v: usize) -> Option<usize> {
        let p = self.parent[v];
        (p != NONE).then_some(p as usize)
    }

    pub fn depth(&self, v: usize) -> u32 {
        self.depth[v]
    }

    pub fn child_count(&self, v: usize) -> usize {
        self.child_count[v] as usize
    }

    pub fn child_counts(&self) -> &[u32] {
        &self.child_count
    }

    pub fn first_child(&self, v: usize) -> Option<usize> {
        let c = self.first_child[v];
        (c != NONE).then_some(c as usize)
    }

    pub fn next_sibling(&self, v: usize) -> Option<usize> {
        let c = self.next_sibling[v];
        (c != NONE).then_some(c as usize)
    }

    pub fn children(&self, v: usize) -> Children<'_> {
        Children { tree: self, next: self.first_child[v] }
    }

    /// Number of vertices in the subtree of `v` (they occupy the preorder
    /// range `v..v + size`).
    pub fn subtree_sizes(&self) -> Vec<u32> {
        let mut size = vec![1u32; self.len()];
        for v in (1..self.len()).rev() {
            let p = self.parent[v] as usize;
            size[p] += size[v];
        }
        size
    }

    /// Full depth-first search sequence `w_0 .. w_{2(V-1)}`.
    pub fn dfs_sequence(&self) -> Vec<u32> {
        let mut tour = Vec::with_capacity(2 * self.len() - 1);
        tour.push(0);
        let mut stack: Vec<(u32, u32)> = vec![(0, self.first_child[0])];
        while let Some(top) = stack.last_mut() {
            let c = top.1;
            if c != NONE {
                top.1 = self.next_sibling[c as usize];
                tour.push(c);
                stack.push((c, self.first_child[c as usize]));
            } else {
                stack.pop();
                if let Some(&(u, _)) = stack.last() {
                    tour.push(u);
                }
            }
        }
        tour
    }
}

pub struct Children<'a> {
    tree: &'a PlaneTree,
    next: u32,
}

impl Iterator for Children<'_> {
    type Item = usize;
    fn next(&mut self) -> Option<usize> {
        if self.next == NONE {
            return None;
        }
        let c = self.next as usize;
        self.next = self.tree.next_sibling[c];
        Some(c)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builds_from_lukasiewicz_word() {
        // root with children a (one child) and b
        let t = PlaneTree::from_child_counts(&[2, 1, 0, 0]).unwrap();
        assert_eq!(t.children(0).collect::<Vec<_>>(), vec![1, 3]);
        assert_eq!(t.children(1).collect::<Vec<_>>(), vec![2]);
        assert_eq!(t.depth(2), 2);
        assert_eq!(t.parent(3), Some(0));
        assert_eq!(t.dfs_sequence(), vec![0, 1, 2, 1, 0, 3, 0]);
        assert_eq!(t.subtree_sizes(), vec![4, 2, 1, 1]);
    }

    #[test]
    fn rejects_bad_words() {
        assert!(PlaneTree::from_child_counts(&[2, 0]).is_err());
        assert!(PlaneTree::from_child_counts(&[1, 0, 0]).is_err());
        assert!(PlaneTree::from_child_counts(&[]).is_err());
    }

    #[test]
    fn single_vertex() {
        let t = PlaneTree::from_child_counts(&[0]).unwrap();
        assert_eq!(t.dfs_sequence(), vec![0]);
    }
}
