use rand::Rng;

use super::arcs::{ArcSystem, Target};
use super::bfs::{bfs_distances, DistanceField};
use super::planar::{PlanarMap, VertexOrigin};
use crate::error::{Error, Result};
use crate::rmq::SparseMin;
use crate::trees::{contour_and_labels, ContourCoding, LabeledPTree};

pub const NO_SUCCESSOR: u32 = u32::MAX;

/// A 2p-angulation built from a labeled p-tree, with the bookkeeping that
/// links map vertices back to tree corners.
#[derive(Clone, Debug)]
pub struct BdgMap {
    pub map: PlanarMap,
    pub eps: u8,
    pub p: usize,
    pub coding: ContourCoding,
    /// Map vertex of each tree vertex (`u32::MAX` for black vertices).
    pub map_vertex: Vec<u32>,
    /// Label of each map vertex (∂ is given `min_label - 1`).
    pub vertex_label: Vec<i32>,
    /// Successor of each corner as an index in `i+1 .. i+pn` of the
    /// periodically extended contour, or [`NO_SUCCESSOR`] for minimal
    /// corners.
    pub successor: Vec<u32>,
    pub min_label: i32,
}

/// A path of map vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeodesicPath {
    pub vertices: Vec<u32>,
}

impl GeodesicPath {
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Consecutive vertices adjacent and length equal to the graph
    /// distance between the endpoints.
    pub fn is_geodesic(&self, map: &PlanarMap) -> bool {
        let (Some(&a), Some(&b)) = (self.vertices.first(), self.vertices.last()) else {
            return false;
        };
        self.vertices.windows(2).all(|w| map.are_adjacent(w[0], w[1]))
            && bfs_distances(map, a).get(b) as usize == self.len()
    }
}

impl BdgMap {
    pub fn pn(&self) -> usize {
        self.coding.len()
    }

    pub fn n(&self) -> usize {
        self.coding.n()
    }

    /// Map vertex at corner `i` (taken modulo pn).
    pub fn corner_vertex(&self, i: usize) -> u32 {
        let pn = self.pn();
        self.map_vertex[self.coding.vertices[i % pn] as usize]
    }

    pub fn corner_label(&self, i: usize) -> i32 {
        self.coding.lambda[i % self.pn()]
    }

    pub fn root_tree_vertex(&self) -> u32 {
        0
    }
}

/// Successor of every corner, computed in one backward sweep over the
/// doubled label sequence.
pub fn successors(lambda: &[i32]) -> (Vec<u32>, i32) {
    let pn = lambda.len() - 1;
    let lam = &lambda[..pn];
    let min = *lam.iter().min().expect("nonempty");
    let max = *lam.iter().max().expect("nonempty");
    let mut next = vec![NO_SUCCESSOR; (max - min + 1) as usize];
    let mut succ = vec![NO_SUCCESSOR; pn];
    for j in (0..2 * pn).rev() {
        let l = lam[j % pn];
        if j < pn && l > min {
            succ[j] = next[(l - 1 - min) as usize];
        }
        next[(l - min) as usize] = j as u32;
    }
    (succ, min)
}

/// The bijection from labeled p-trees (times a sign) to rooted pointed
/// 2p-angulations.
pub fn bdg_forward(theta: &LabeledPTree, eps: u8) -> Result<BdgMap> {
    if eps > 1 {
        return Err(Error::InvalidParameter(format!("ε = {eps} must be 0 or 1")));
    }
    let coding = contour_and_labels(theta);
    let pn = coding.len();
    let tree = theta.tree();
    let mut map_vertex = vec![u32::MAX; tree.len()];
    let mut origin = Vec::with_capacity(theta.white_count() + 1);
    let mut vertex_label = Vec::with_capacity(theta.white_count() + 1);
    for v in 0..tree.len() {
        if theta.is_white(v) {
            map_vertex[v] = origin.len() as u32;
            origin.push(VertexOrigin::Tree(v as u32));
            vertex_label.push(theta.label(v));
        }
    }
    let pointed = origin.len() as u32;
    origin.push(VertexOrigin::Pointed);
    let (successor, min_label) = successors(&coding.lambda);
    vertex_label.push(min_label - 1);
    let mut arcs = Vec::with_capacity(pn);
    for (i, &s) in successor.iter().enumerate() {
        if s == NO_SUCCESSOR {
            if coding.lambda[i] != min_label {
                return Err(Error::Internal(format!("corner {i} has no successor")));
            }
            arcs.push((i as u32, Target::Pointed));
        } else {
            if s as usize <= i || s as usize >= i + pn {
                return Err(Error::Internal(format!("successor of corner {i} out of window")));
            }
            arcs.push((i as u32, Target::Pos(s % pn as u32)));
        }
    }
    let positions = coding.vertices[..pn].iter().map(|&v| map_vertex[v as usize]).collect();
    let system = ArcSystem { positions, vertex_count: origin.len(), pointed, arcs };
    let root = if eps == 1 { 0 } else { 1 };
    let map = PlanarMap::from_rotations(&system.rotations(), root, pointed, origin)?;
    Ok(BdgMap { map, eps, p: theta.p(), coding, map_vertex, vertex_label, successor, min_label })
}

/// A white vertex whose distance to ∂ disagrees with its label.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LabelDistanceViolation {
    pub vertex: u32,
    pub distance: u32,
    pub expected: i64,
}

/// Checks `d(∂, v) = ℓ_v − min ℓ + 1` for every white vertex.
pub fn verify_distance_formula(bdg: &BdgMap) -> Vec<LabelDistanceViolation> {
    let d = bfs_distances(&bdg.map, bdg.map.pointed());
    check_label_distances(&d, &bdg.vertex_label, bdg.min_label, bdg.map.pointed())
}

pub(crate) fn check_label_distances(
    d: &DistanceField,
    labels: &[i32],
    min_label: i32,
    pointed: u32,
) -> Vec<LabelDistanceViolation> {
    (0..labels.len() as u32)
        .filter(|&v| v != pointed)
        .filter_map(|v| {
            let expected = labels[v as usize] as i64 - min_label as i64 + 1;
            let got = d.get(v);
            (got as i64 != expected).then_some(LabelDistanceViolation { vertex: v, distance: got, expected })
        })
        .collect()
}

/// Two-arc label bound on `d(v_i, v_j)` for corners `0 <= i < j <= pn`.
pub fn cactus_bound(lambda: &[i32], i: usize, j: usize) -> i64 {
    let pn = lambda.len() - 1;
    assert!(i < j && j <= pn, "cactus_bound needs i < j <= pn");
    let at = |k: usize| lambda[k % pn] as i64;
    let inner = (i..=j).map(at).min().expect("nonempty");
    let outer = (j..=i + pn).map(at).min().expect("nonempty");
    at(i) + at(j) - 2 * inner.max(outer) + 2
}

/// Constant-time [`cactus_bound`] after linear preprocessing.
pub struct CactusOracle {
    lambda: Vec<i32>,
    rmq: SparseMin<i32>,
}

impl CactusOracle {
    pub fn new(lambda: &[i32]) -> Self {
        let pn = lambda.len() - 1;
        let doubled: Vec<i32> = (0..=2 * pn).map(|k| lambda[k % pn]).collect();
        CactusOracle { lambda: lambda.to_vec(), rmq: SparseMin::new(&doubled) }
    }

    /// Two-arc bound for corners `i < j <= pn`.
    pub fn bound(&self, i: usize, j: usize) -> i64 {
        let pn = self.lambda.len() - 1;
        debug_assert!(i < j && j <= pn);
        let inner = self.rmq.min(i, j) as i64;
        let outer = self.rmq.min(j, i + pn) as i64;
        self.lambda[i] as i64 + self.lambda[j] as i64 - 2 * inner.max(outer) + 2
    }

    /// One-arc bound `Λ_i + Λ_j − 2 min_{[i∧j, i∨j]} Λ + 2`.
    pub fn one_sided(&self, i: usize, j: usize) -> i64 {
        let (a, b) = (i.min(j), i.max(j));
        self.lambda[a] as i64 + self.lambda[b] as i64 - 2 * self.rmq.min(a, b) as i64 + 2
    }
}

/// The path from corner `i` to ∂ through successive successors.
pub fn simple_geodesic(bdg: &BdgMap, i: usize) -> GeodesicPath {
    let pn = bdg.pn();
    let mut c = i % pn;
    let mut vertices = vec![bdg.corner_vertex(c)];
    while bdg.successor[c] != NO_SUCCESSOR {
        c = bdg.successor[c] as usize % pn;
        vertices.push(bdg.corner_vertex(c));
    }
    vertices.push(bdg.map.pointed());
    GeodesicPath { vertices }
}

/// Second root and second pointed vertex drawn by the re-rooting device.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Reroot {
    /// Step that generated the new root edge.
    pub step: usize,
    pub root: u32,
    pub pointed: u32,
    /// Graph distance from the new pointed vertex to the new root vertex.
    pub distance: u32,
    /// Whether that distance is at most p.
    pub close: bool,
}

/// Draws `U` uniform in `0..pn`, roots at the arc of step `U` with a fair
/// orientation, and picks a uniform vertex that is close to it except on
/// an event of probability `2 / ((p−1)n + 2)`.
pub fn reroot_uniform<R: Rng + ?Sized>(bdg: &BdgMap, rng: &mut R) -> Reroot {
    let pn = bdg.pn();
    let u = rng.gen_range(0..pn);
    let root = 2 * u as u32 + u32::from(rng.gen::<bool>());
    let coding = &bdg.coding;
    let tree_hat = if coding.c[u + 1] >= coding.c[u] {
        coding.vertices[u + 1] as usize
    } else {
        // v_U is the last child of its black parent; pick a uniform child
        let kids = black_parent_children(bdg, u);
        kids[rng.gen_range(0..kids.len())]
    };
    let nonroot = (bdg.p - 1) * bdg.n();
    let total = nonroot + 2;
    let pick = rng.gen_range(0..total);
    let pointed = if pick < nonroot {
        bdg.map_vertex[tree_hat]
    } else if pick == nonroot {
        bdg.map_vertex[0]
    } else {
        bdg.map.pointed()
    };
    let origin = bdg.map.vertex_of(root);
    let distance = bfs_distances(&bdg.map, pointed).get(origin);
    Reroot { step: u, root, pointed, distance, close: distance as usize <= bdg.p }
}

/// Children of the black parent of the white vertex at corner `pos`: the
/// vertices at its level between the black parent's descent and ascent.
fn black_parent_children(bdg: &BdgMap, pos: usize) -> Vec<usize> {
    let coding = &bdg.coding;
    let depth = |i: usize| coding.c[i];
    let level = depth(pos);
    let mut start = pos;
    while depth(start) >= level {
        start -= 1;
    }
    let mut kids = Vec::new();
    let mut i = start + 1;
    while i < coding.c.len() && depth(i) >= level {
        if depth(i) == level {
            let x = coding.vertices[i] as usize;
            if kids.last() != Some(&x) {
                kids.push(x);
            }
        }
        i += 1;
    }
    kids
}
