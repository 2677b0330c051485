use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::snake::{excursion_tree, CircularLabelDistance, SnakeGrid};
use crate::rmq::SparseMin;

/// Corners of the tree coded by the excursion, in contour order.
///
/// Grid index `k < m` is tree node `k`; index `m` is the root again. A node
/// with `c` children has `c + 1` corners (the root `c`), and every corner
/// carries its node's label.
#[derive(Clone, Debug)]
pub struct CornerContour {
    /// Node of each corner.
    pub node: Vec<u32>,
    /// Label of each corner.
    pub label: Vec<f64>,
    /// Corners of each node.
    pub corners_of: Vec<Vec<u32>>,
}

impl CornerContour {
    pub fn new(grid: &SnakeGrid) -> Self {
        let m = grid.m;
        let parent = excursion_tree(&grid.e);
        let mut kids: Vec<Vec<usize>> = vec![Vec::new(); m];
        for k in 1..m {
            kids[parent[k]].push(k);
        }
        // depth-first tour, without the final return to the root
        let mut node = vec![0u32];
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        while let Some(top) = stack.last_mut() {
            let (v, i) = *top;
            if i < kids[v].len() {
                top.1 += 1;
                let c = kids[v][i];
                node.push(c as u32);
                stack.push((c, 0));
            } else {
                stack.pop();
                if let Some(&(p, _)) = stack.last() {
                    node.push(p as u32);
                }
            }
        }
        if node.len() > 1 {
            node.pop();
        }
        let label = node.iter().map(|&v| grid.z[v as usize]).collect();
        let mut corners_of = vec![Vec::new(); m];
        for (c, &v) in node.iter().enumerate() {
            corners_of[v as usize].push(c as u32);
        }
        CornerContour { node, label, corners_of }
    }

    pub fn len(&self) -> usize {
        self.node.len()
    }

    pub fn is_empty(&self) -> bool {
        self.node.is_empty()
    }
}

/// Symmetric matrices of the one-step label distance between tree nodes
/// and of its chain closure, on the `m` nodes of the grid tree.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricSample {
    pub m: usize,
    pub dcirc: Vec<f64>,
    pub dstar: Vec<f64>,
}

impl MetricSample {
    pub fn dcirc(&self, j: usize, k: usize) -> f64 {
        self.dcirc[(j % self.m) * self.m + k % self.m]
    }

    pub fn dstar(&self, j: usize, k: usize) -> f64 {
        self.dstar[(j % self.m) * self.m + k % self.m]
    }
}

/// One-step label distance between tree nodes: the circular label formula
/// minimized over the corners of both nodes.
pub fn dcirc_matrix(grid: &SnakeGrid) -> Vec<f64> {
    let m = grid.m;
    let cc = CornerContour::new(grid);
    let circ = CornerDistance::new(&cc.label);
    let mut d = vec![0.0; m * m];
    for a in 0..m {
        for b in a + 1..m {
            let mut best = f64::INFINITY;
            for &i in &cc.corners_of[a] {
                for &j in &cc.corners_of[b] {
                    best = best.min(circ.get(i as usize, j as usize));
                }
            }
            d[a * m + b] = best;
            d[b * m + a] = best;
        }
    }
    d
}

/// All-pairs shortest paths on the complete graph weighted by `dcirc`.
pub fn dstar_grid(dcirc: &[f64], m: usize) -> Vec<f64> {
    let mut d = dcirc.to_vec();
    for k in 0..m {
        for i in 0..m {
            let dik = d[i * m + k];
            if dik == f64::INFINITY {
                continue;
            }
            for j in 0..m {
                let via = dik + d[k * m + j];
                if via < d[i * m + j] {
                    d[i * m + j] = via;
                }
            }
        }
    }
    d
}

/// Both matrices for a grid; cubic in `m`.
pub fn metric_sample(grid: &SnakeGrid) -> MetricSample {
    let dcirc = dcirc_matrix(grid);
    let dstar = dstar_grid(&dcirc, grid.m);
    MetricSample { m: grid.m, dcirc, dstar }
}

/// Absolute slack allowed for floating rounding in the grid identities.
pub const METRIC_TOLERANCE: f64 = 1e-9;

/// Checks the identities every grid sample satisfies: zero diagonal and
/// symmetry, `D* ≤ D°`, the triangle inequality for `D*`,
/// `D*(k, s*) = Z_k + Δ` and `D° ≥ |Z_j − Z_k|`. Returns one line per
/// failure.
pub fn check_metric_identities(grid: &SnakeGrid, s: &MetricSample) -> Vec<String> {
    let m = s.m;
    let tol = METRIC_TOLERANCE;
    let mut out = Vec::new();
    for j in 0..m {
        if s.dcirc(j, j) != 0.0 || s.dstar(j, j) != 0.0 {
            out.push(format!("nonzero diagonal at {j}"));
        }
        let want = grid.z[j] + grid.delta;
        if (s.dstar(j, grid.s_star) - want).abs() > tol {
            out.push(format!("D*({j}, s*) = {} != Z + Δ = {want}", s.dstar(j, grid.s_star)));
        }
        for k in 0..m {
            let (c, d) = (s.dcirc(j, k), s.dstar(j, k));
            if c != s.dcirc(k, j) || d != s.dstar(k, j) {
                out.push(format!("asymmetry at ({j}, {k})"));
            }
            if d > c + tol {
                out.push(format!("D*({j}, {k}) = {d} > D° = {c}"));
            }
            if c < (grid.z[j] - grid.z[k]).abs() - tol {
                out.push(format!("D°({j}, {k}) = {c} < |ΔZ|"));
            }
        }
    }
    for i in 0..m {
        for j in 0..m {
            let dij = s.dstar(i, j);
            for k in 0..m {
                if s.dstar(i, k) > dij + s.dstar(j, k) + tol {
                    out.push(format!("triangle inequality fails at ({i}, {j}, {k})"));
                }
            }
        }
    }
    out
}

/// Minimum of the chain sums over every chain of distinct nodes; the
/// exhaustive oracle for [`dstar_grid`] on tiny grids.
pub fn dstar_brute_force(dcirc: &[f64], m: usize) -> Vec<f64> {
    fn walk(d: &[f64], m: usize, at: usize, used: &mut Vec<bool>, acc: f64, best: &mut [f64], src: usize) {
        for next in 0..m {
            if used[next] {
                continue;
            }
            let total = acc + d[at * m + next];
            if total < best[src * m + next] {
                best[src * m + next] = total;
            }
            used[next] = true;
            walk(d, m, next, used, total, best, src);
            used[next] = false;
        }
    }
    let mut best = vec![f64::INFINITY; m * m];
    for s in 0..m {
        best[s * m + s] = 0.0;
        let mut used = vec![false; m];
        used[s] = true;
        walk(dcirc, m, s, &mut used, 0.0, &mut best, s);
    }
    best
}

/// Circular label distance between corners, constant time per query.
struct CornerDistance {
    label: Vec<f64>,
    rmq: SparseMin<f64>,
}

impl CornerDistance {
    fn new(label: &[f64]) -> Self {
        let n = label.len();
        let doubled: Vec<f64> = (0..2 * n).map(|i| label[i % n]).collect();
        CornerDistance { label: label.to_vec(), rmq: SparseMin::new(&doubled) }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        let n = self.label.len();
        let (i, j) = (i.min(j), i.max(j));
        let inner = self.rmq.min(i, j);
        let outer = self.rmq.min(j, i + n);
        self.label[i] + self.label[j] - 2.0 * inner.max(outer)
    }
}

/// Chain distance from one node without the dense matrices: Dijkstra over
/// the corners, joined by the label tree of the corner sequence and by
/// free moves between corners of the same node.
pub struct FastDstar {
    contour: CornerContour,
    /// Label-tree parent of each corner and the edge length to it.
    parent: Vec<(u32, f64)>,
    kids: Vec<Vec<(u32, f64)>>,
}

impl FastDstar {
    pub fn new(grid: &SnakeGrid) -> Self {
        let contour = CornerContour::new(grid);
        let n = contour.len();
        let lab = &contour.label;
        let mut start = 0;
        for c in 1..n {
            if lab[c] < lab[start] {
                start = c;
            }
        }
        // Cartesian tree of the rotated sequence; ties go to the earlier corner
        let rot = |i: usize| (start + i) % n;
        let mut parent = vec![(u32::MAX, 0.0); n];
        let mut stack: Vec<usize> = Vec::new();
        let mut prev = vec![usize::MAX; n];
        let mut next = vec![usize::MAX; n];
        for i in 0..n {
            while let Some(&t) = stack.last() {
                if lab[rot(t)] > lab[rot(i)] {
                    next[t] = i;
                    stack.pop();
                } else {
                    break;
                }
            }
            prev[i] = stack.last().copied().unwrap_or(usize::MAX);
            stack.push(i);
        }
        let mut kids = vec![Vec::new(); n];
        for i in 1..n {
            let p = match (prev[i], next[i]) {
                (usize::MAX, b) => b,
                (a, usize::MAX) => a,
                (a, b) => {
                    if lab[rot(a)] >= lab[rot(b)] {
                        a
                    } else {
                        b
                    }
                }
            };
            let (c, pc) = (rot(i), rot(p));
            let w = lab[c] - lab[pc];
            parent[c] = (pc as u32, w);
            kids[pc].push((c as u32, w));
        }
        FastDstar { contour, parent, kids }
    }

    /// Chain distance from node `u` to every node.
    pub fn from_node(&self, u: usize) -> Vec<f64> {
        self.run(u, None)
    }

    /// Chain distance between two nodes, stopping early.
    pub fn between(&self, u: usize, v: usize) -> f64 {
        let m = self.contour.corners_of.len();
        self.run(u % m, Some(v % m))[v % m]
    }

    fn run(&self, u: usize, target: Option<usize>) -> Vec<f64> {
        let n = self.contour.len();
        let m = self.contour.corners_of.len();
        let mut dist = vec![f64::INFINITY; n];
        let mut node_dist = vec![f64::INFINITY; m];
        let mut heap = BinaryHeap::new();
        for &c in &self.contour.corners_of[u] {
            dist[c as usize] = 0.0;
            heap.push(Reverse((Key(0.0), c)));
        }
        while let Some(Reverse((Key(d), c))) = heap.pop() {
            let c = c as usize;
            if d > dist[c] {
                continue;
            }
            let v = self.contour.node[c] as usize;
            if d < node_dist[v] {
                node_dist[v] = d;
                if target == Some(v) {
                    break;
                }
            }
            let mut relax = |x: u32, w: f64| {
                let nd = d + w;
                if nd < dist[x as usize] {
                    dist[x as usize] = nd;
                    heap.push(Reverse((Key(nd), x)));
                }
            };
            for &x in &self.contour.corners_of[v] {
                relax(x, 0.0);
            }
            let (p, w) = self.parent[c];
            if p != u32::MAX {
                relax(p, w);
            }
            for &(x, w) in &self.kids[c] {
                relax(x, w);
            }
        }
        node_dist
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
struct Key(f64);

impl Eq for Key {}

impl PartialOrd for Key {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Key {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.total_cmp(&other.0)
    }
}

/// Discretized simple geodesic from grid time `k` to `s*`: for each level
/// `Z_k − i·h` down to `−Δ`, the first grid time at or after `k`
/// (cyclically) where `Z` is at or below it.
/// `h = Δ/⌈Δ·√m⌉`; consecutive repeats are dropped.
pub fn simple_geodesic_continuum(grid: &SnakeGrid, k: usize) -> Vec<usize> {
    let m = grid.m;
    let z = &grid.z;
    if k % m == grid.s_star % m || grid.delta <= 0.0 {
        return vec![k];
    }
    let steps = (grid.delta * (m as f64).sqrt()).ceil().max(1.0);
    let h = grid.delta / steps;
    let mut path = vec![k];
    let mut t = k;
    let mut i = 1;
    loop {
        let level = z[k] - i as f64 * h;
        let level = if level <= -grid.delta { -grid.delta } else { level };
        while z[t] > level {
            t = (t + 1) % m;
        }
        if *path.last().expect("nonempty") != t {
            path.push(t);
        }
        if level <= -grid.delta {
            break;
        }
        i += 1;
    }
    path
}

/// Sum of the one-step time distance along a path.
pub fn path_dcirc_length(grid: &SnakeGrid, path: &[usize]) -> f64 {
    let d = CircularLabelDistance::new(grid);
    path.windows(2).map(|w| d.get(w[0], w[1])).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::sample_snake;
    use crate::rng::from_seed;

    #[test]
    fn corners_cover_every_node() {
        let mut rng = from_seed(7);
        let g = sample_snake(30, &mut rng).unwrap();
        let cc = CornerContour::new(&g);
        assert_eq!(cc.len(), 2 * (g.m - 1));
        assert!(cc.corners_of.iter().all(|c| !c.is_empty()));
    }

    #[test]
    fn fast_chain_distance_matches_floyd() {
        let mut rng = from_seed(8);
        for m in [4, 9, 40] {
            let g = sample_snake(m, &mut rng).unwrap();
            let ms = metric_sample(&g);
            let fast = FastDstar::new(&g);
            for u in 0..m {
                let row = fast.from_node(u);
                for v in 0..m {
                    assert!((row[v] - ms.dstar(u, v)).abs() < 1e-12, "m={m} u={u} v={v}");
                }
                let v = (u * 7 + 3) % m;
                assert!((fast.between(u, v) - ms.dstar(u, v)).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn geodesic_from_s_star_is_trivial() {
        let mut rng = from_seed(9);
        let g = sample_snake(100, &mut rng).unwrap();
        assert_eq!(simple_geodesic_continuum(&g, g.s_star), vec![g.s_star]);
        let p = simple_geodesic_continuum(&g, 0);
        assert_eq!(*p.last().unwrap(), g.s_star);
        assert!((path_dcirc_length(&g, &p) - g.delta).abs() < 1e-9);
    }
}
