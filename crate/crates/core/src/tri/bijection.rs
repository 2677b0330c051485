use serde::{Deserialize, Serialize};

use super::ttree::{LabeledTTree, RootType, TType};
use crate::error::{Error, Result};
use crate::maps::arcs::{ArcSystem, Target};
use crate::maps::{
    bfs_distances, check_label_distances, successors, CactusOracle, DistanceField, LabelDistanceViolation, PlanarMap,
    VertexOrigin, NO_SUCCESSOR,
};

/// Sign class of a rooted pointed triangulation: how the distance to ∂
/// changes along the root edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum RootClass {
    Positive,
    Null,
    Negative,
}

/// A type-2 vertex removed by the construction, remembered with the two
/// map vertices its corners pointed to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ErasedVertex {
    pub tree_vertex: u32,
    pub label: i32,
    /// Endpoints of the merged edge, first corner first.
    pub ends: [u32; 2],
    /// Index of the merged edge in the map.
    pub edge: u32,
}

/// A rooted pointed triangulation built from a labeled four-type tree.
#[derive(Clone, Debug)]
pub struct Triangulation {
    pub map: PlanarMap,
    pub tree: LabeledTTree,
    /// Tree vertex at each corner of the white contour.
    pub corners: Vec<u32>,
    /// Labels along the closed white contour (length corners + 1).
    pub lambda: Vec<i32>,
    pub successor: Vec<u32>,
    pub min_label: i32,
    /// Map vertex of each type-1 tree vertex, `u32::MAX` elsewhere.
    pub map_vertex: Vec<u32>,
    /// Label of each map vertex, ∂ getting `min_label − 1`.
    pub vertex_label: Vec<i32>,
    pub erased: Vec<ErasedVertex>,
}

impl Triangulation {
    pub fn n(&self) -> usize {
        self.map.vertex_count()
    }

    /// Whether corner `i` sits at a type-1 vertex.
    pub fn is_type1_corner(&self, i: usize) -> bool {
        self.tree.ttype(self.corners[i] as usize) == TType::One
    }

    pub fn root_type(&self) -> RootType {
        self.tree.shape().root_type()
    }
}

/// The bijection from labeled four-type trees to rooted pointed
/// triangulations: positive ones for a type-1 root, null ones for a
/// type-2 root.
pub fn ttree_to_triangulation(theta: &LabeledTTree) -> Result<Triangulation> {
    let tree = theta.tree();
    let tour = tree.dfs_sequence();
    let corners: Vec<u32> = tour.iter().step_by(2).copied().collect();
    let k = corners.len() - 1;
    let lambda: Vec<i32> = corners.iter().map(|&v| theta.label(v as usize)).collect();
    let (successor, min_label) = successors(&lambda);

    let mut map_vertex = vec![u32::MAX; tree.len()];
    let mut origin = Vec::new();
    let mut vertex_label = Vec::new();
    for v in 0..tree.len() {
        if theta.ttype(v) == TType::One {
            map_vertex[v] = origin.len() as u32;
            origin.push(VertexOrigin::Tree(v as u32));
            vertex_label.push(theta.label(v));
        }
    }
    let pointed = origin.len() as u32;
    origin.push(VertexOrigin::Pointed);
    vertex_label.push(min_label - 1);
    // provisional ids for type-2 vertices, after ∂
    let mut prov = map_vertex.clone();
    let mut twos = Vec::new();
    for v in 0..tree.len() {
        if theta.ttype(v) == TType::Two {
            prov[v] = pointed + 1 + twos.len() as u32;
            twos.push(v as u32);
        }
    }

    let mut arcs = Vec::with_capacity(k);
    for (i, &s) in successor.iter().enumerate() {
        if s == NO_SUCCESSOR {
            arcs.push((i as u32, Target::Pointed));
        } else {
            let t = s as usize % k;
            if theta.ttype(corners[t] as usize) != TType::One {
                return Err(Error::Internal(format!("successor of corner {i} is not of type 1")));
            }
            arcs.push((i as u32, Target::Pos(t as u32)));
        }
    }
    let positions = corners[..k].iter().map(|&v| prov[v as usize]).collect();
    let system = ArcSystem { positions, vertex_count: pointed as usize + 1 + twos.len(), pointed, arcs };
    let rot = system.rotations();

    // Renumber: arcs leaving type-1 corners keep their two halves; the two
    // arcs leaving a type-2 vertex become one edge joining their far ends.
    let mut new_half = vec![u32::MAX; 2 * k];
    let mut erased_at = vec![u32::MAX; tree.len()];
    let mut erased = Vec::with_capacity(twos.len());
    let mut edges = 0u32;
    for (e, &(src, tgt)) in system.arcs.iter().enumerate() {
        let v = corners[src as usize] as usize;
        let end = match tgt {
            Target::Pos(t) => map_vertex[corners[t as usize] as usize],
            Target::Pointed => pointed,
        };
        if theta.ttype(v) == TType::One {
            new_half[2 * e] = 2 * edges;
            new_half[2 * e + 1] = 2 * edges + 1;
            edges += 1;
        } else if erased_at[v] == u32::MAX {
            erased_at[v] = erased.len() as u32;
            new_half[2 * e + 1] = 2 * edges;
            erased.push(ErasedVertex {
                tree_vertex: v as u32,
                label: theta.label(v),
                ends: [end, u32::MAX],
                edge: edges,
            });
            edges += 1;
        } else {
            let ev = &mut erased[erased_at[v] as usize];
            new_half[2 * e + 1] = 2 * ev.edge + 1;
            ev.ends[1] = end;
        }
    }
    let rotations: Vec<Vec<u32>> =
        rot[..=pointed as usize].iter().map(|r| r.iter().map(|&h| new_half[h as usize]).collect()).collect();
    if rotations.iter().flatten().any(|&h| h == u32::MAX) {
        return Err(Error::Internal("dangling half-edge after erasing type-2 vertices".into()));
    }
    // Positive: the half at the successor end of arc 0, so the root points
    // to ∅. Null: the far half of the arc from ∅'s first corner.
    let root = new_half[1];
    let map = PlanarMap::from_rotations(&rotations, root, pointed, origin)?;
    Ok(Triangulation {
        map,
        tree: theta.clone(),
        corners: corners[..k].to_vec(),
        lambda,
        successor,
        min_label,
        map_vertex,
        vertex_label,
        erased,
    })
}

/// Sign class of the root edge relative to the pointed vertex.
pub fn root_class(map: &PlanarMap) -> RootClass {
    let d = bfs_distances(map, map.pointed());
    let from = d.get(map.root_vertex()) as i64;
    let to = d.get(map.head(map.root())) as i64;
    match to - from {
        1 => RootClass::Positive,
        0 => RootClass::Null,
        _ => RootClass::Negative,
    }
}

/// Checks `d(∂, v) = ℓ_v − min ℓ + 1` at every type-1 vertex.
pub fn verify_tri_distance_formula(t: &Triangulation) -> Vec<LabelDistanceViolation> {
    let d = bfs_distances(&t.map, t.map.pointed());
    check_label_distances(&d, &t.vertex_label, t.min_label, t.map.pointed())
}

/// A pair of type-1 corners whose distance exceeds the two-arc label bound.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CactusViolation {
    pub i: usize,
    pub j: usize,
    pub distance: u32,
    pub bound: i64,
}

/// Checks the two-arc label bound between each type-1 corner in `sources`
/// and every type-1 corner.
pub fn verify_tri_cactus(t: &Triangulation, sources: &[usize]) -> Vec<CactusViolation> {
    let oracle = CactusOracle::new(&t.lambda);
    let k = t.corners.len();
    let mut out = Vec::new();
    let type1: Vec<usize> = (0..k).filter(|&i| t.is_type1_corner(i)).collect();
    for &i in sources {
        if !t.is_type1_corner(i) {
            continue;
        }
        let d: DistanceField = bfs_distances(&t.map, t.map_vertex[t.corners[i] as usize]);
        for &j in &type1 {
            if j == i {
                continue;
            }
            let bound = oracle.bound(i.min(j), i.max(j));
            let distance = d.get(t.map_vertex[t.corners[j] as usize]);
            if distance as i64 > bound {
                out.push(CactusViolation { i, j, distance, bound });
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tri::enumerate::enumerate_labeled_ttrees;

    #[test]
    fn smallest_triangulations() {
        for root in [RootType::One, RootType::Two] {
            for theta in enumerate_labeled_ttrees(3, root, 100).unwrap() {
                let t = ttree_to_triangulation(&theta).unwrap();
                let m = &t.map;
                assert_eq!((m.vertex_count(), m.face_count(), m.edge_count()), (3, 2, 3));
                assert_eq!(m.face_degrees(), vec![3, 3]);
                let want = if root == RootType::One { RootClass::Positive } else { RootClass::Null };
                assert_eq!(root_class(m), want);
                assert!(verify_tri_distance_formula(&t).is_empty());
            }
        }
    }
}
