//! Maps with two geodesic boundaries, obtained by cutting a 2p-angulation
//! along the leftmost geodesic from the root to ∂.

use std::io::Write;

use crate::error::{Error, Result};
use crate::maps::arcs::{ArcSystem, Target};
use crate::maps::{
    bdg_forward, bfs_distances, bfs_into, simple_geodesic, BdgMap, CactusOracle, GeodesicPath, PlanarMap, VertexOrigin,
    NO_SUCCESSOR,
};
use crate::trees::LabeledPTree;

#[derive(Clone, Debug)]
pub struct Dmgb {
    /// The cut map. Tree vertices keep their ids from `bdg`.
    pub map: PlanarMap,
    /// The uncut map and its tree data.
    pub bdg: BdgMap,
    pub delta: usize,
    /// Left boundary: first-hit vertices of each negative label level.
    pub gamma: Vec<u32>,
    /// Right boundary: the added chain.
    pub gamma_tilde: Vec<u32>,
    /// Label of every vertex of the cut map (∂ carries `-delta`).
    pub vertex_label: Vec<i32>,
    /// Where the arc leaving each position goes (`None` if no arc).
    next: Vec<Option<Target>>,
    /// Vertex owning each position.
    positions: Vec<u32>,
}

impl Dmgb {
    pub fn pointed(&self) -> u32 {
        self.map.pointed()
    }

    /// Vertex id of the chain vertex ṽ_i, `1 <= i < delta`.
    pub fn chain_vertex(&self, i: usize) -> u32 {
        self.gamma_tilde[i]
    }

    /// Degree of the boundary face (0 when `delta == 1`).
    pub fn boundary_degree(&self) -> usize {
        if self.delta >= 2 {
            2 * self.delta
        } else {
            0
        }
    }
}

/// Cuts the map coded by `theta` open along its leftmost root geodesic.
pub fn build_dmgb(theta: &LabeledPTree, eps: u8) -> Result<Dmgb> {
    let bdg = bdg_forward(theta, eps)?;
    let pn = bdg.pn();
    let delta = (1 - bdg.min_label) as usize;
    let lambda = &bdg.coding.lambda;
    let first_hit = |level: i32| -> u32 {
        let j = lambda.iter().position(|&l| l == level).expect("every level down to min is hit");
        bdg.corner_vertex(j)
    };
    let gamma_tree: Vec<u32> = (0..delta as i32).map(|i| first_hit(-i)).collect();
    if delta == 1 {
        let mut gamma = gamma_tree;
        gamma.push(bdg.map.pointed());
        let positions: Vec<u32> = (0..pn).map(|i| bdg.corner_vertex(i)).collect();
        let next = (0..pn)
            .map(|i| {
                Some(if bdg.successor[i] == NO_SUCCESSOR {
                    Target::Pointed
                } else {
                    Target::Pos(bdg.successor[i] % pn as u32)
                })
            })
            .collect();
        return Ok(Dmgb {
            map: bdg.map.clone(),
            vertex_label: bdg.vertex_label.clone(),
            gamma_tilde: gamma.clone(),
            gamma,
            delta,
            bdg,
            next,
            positions,
        });
    }

    let whites = bdg.map.vertex_count() - 1;
    let chain = |i: usize| (whites + i - 1) as u32;
    let pointed = (whites + delta - 1) as u32;
    let mut origin: Vec<VertexOrigin> = bdg.map.origins()[..whites].to_vec();
    let mut vertex_label = bdg.vertex_label[..whites].to_vec();
    for i in 1..delta {
        origin.push(VertexOrigin::Extra(i as u32));
        vertex_label.push(-(i as i32));
    }
    origin.push(VertexOrigin::Pointed);
    vertex_label.push(-(delta as i32));

    // positions: corners 0..pn-1, the split root sector at pn, then the
    // ascending corners of ṽ_1..ṽ_{δ-1}
    let mut positions: Vec<u32> = (0..pn).map(|i| bdg.corner_vertex(i)).collect();
    positions.push(0);
    positions.extend((1..delta).map(chain));
    let mut arcs = Vec::with_capacity(pn + delta);
    for i in 0..pn {
        let s = bdg.successor[i];
        let t = if s == NO_SUCCESSOR {
            Target::Pointed
        } else if s as usize <= pn {
            Target::Pos(s)
        } else {
            Target::Pos((pn + (1 - lambda[i]) as usize) as u32)
        };
        arcs.push((i as u32, t));
    }
    for k in 0..delta {
        let t = if k + 1 < delta { Target::Pos((pn + k + 1) as u32) } else { Target::Pointed };
        arcs.push(((pn + k) as u32, t));
    }
    let mut next = vec![None; positions.len()];
    for &(s, t) in &arcs {
        next[s as usize] = Some(t);
    }
    let system = ArcSystem { positions: positions.clone(), vertex_count: origin.len(), pointed, arcs };
    let map = PlanarMap::from_rotations(&system.rotations(), bdg.map.root(), pointed, origin)?;
    let mut gamma = gamma_tree;
    gamma.push(pointed);
    let mut gamma_tilde = vec![0];
    gamma_tilde.extend((1..delta).map(chain));
    gamma_tilde.push(pointed);
    Ok(Dmgb { map, bdg, delta, gamma, gamma_tilde, vertex_label, next, positions })
}

/// Both boundary geodesics `(γ, γ̃)` from the root to ∂.
pub fn boundary_geodesics(d: &Dmgb) -> (GeodesicPath, GeodesicPath) {
    (GeodesicPath { vertices: d.gamma.clone() }, GeodesicPath { vertices: d.gamma_tilde.clone() })
}

/// Simple geodesic from corner `i` in the cut map: successors while they
/// stay within the contour, then down the chain.
pub fn dmgb_simple_geodesic(d: &Dmgb, i: usize) -> GeodesicPath {
    let mut c = i % d.bdg.pn();
    let mut vertices = vec![d.positions[c]];
    loop {
        match d.next[c].expect("every visited position has an arc") {
            Target::Pointed => {
                vertices.push(d.pointed());
                break;
            }
            Target::Pos(t) => {
                c = t as usize;
                vertices.push(d.positions[c]);
            }
        }
    }
    GeodesicPath { vertices }
}

/// Which source vertices the pairwise checks start from.
#[derive(Clone, Debug)]
pub enum Sources {
    All,
    Only(Vec<u32>),
}

#[derive(Clone, Debug, Default)]
pub struct DmgbReport {
    pub violations: Vec<String>,
    pub pairs_checked: u64,
}

impl DmgbReport {
    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the four boundary properties:
/// (i) the boundaries meet only at their endpoints and are geodesics;
/// (ii) `d <= d̃` on tree vertices; (iii) `d̃(v, ∂) = ℓ_v + δ`;
/// (iv) `d̃(∅, v) = d(∅, v)`.
pub fn verify_dmgb_properties(d: &Dmgb, sources: &Sources) -> DmgbReport {
    let mut rep = DmgbReport::default();
    let m = &d.map;
    let whites = d.bdg.map.vertex_count() - 1;
    let delta = d.delta;
    let from_root = bfs_distances(m, 0);
    if d.gamma.len() != delta + 1 || d.gamma_tilde.len() != delta + 1 {
        rep.violations.push("boundary lengths differ from δ".into());
    }
    if from_root.get(d.pointed()) as usize != delta {
        rep.violations.push(format!("d̃(∅,∂) = {} != δ = {delta}", from_root.get(d.pointed())));
    }
    if delta >= 2 {
        for x in &d.gamma[1..delta] {
            if d.gamma_tilde[1..delta].contains(x) {
                rep.violations.push(format!("boundaries share inner vertex {x}"));
            }
        }
    }
    for path in [&d.gamma, &d.gamma_tilde] {
        if !path.windows(2).all(|w| m.are_adjacent(w[0], w[1])) {
            rep.violations.push("boundary path has a non-edge step".into());
        }
    }
    let to_pointed = bfs_distances(m, d.pointed());
    for v in 0..m.vertex_count() as u32 {
        if v == d.pointed() {
            continue;
        }
        let want = d.vertex_label[v as usize] as i64 + delta as i64;
        if to_pointed.get(v) as i64 != want {
            rep.violations.push(format!("(iii) d̃({v},∂) = {} != {want}", to_pointed.get(v)));
        }
    }
    let plain_root = bfs_distances(&d.bdg.map, 0);
    for v in 0..whites as u32 {
        if plain_root.get(v) != from_root.get(v) {
            rep.violations.push(format!("(iv) d̃(∅,{v}) = {} != d = {}", from_root.get(v), plain_root.get(v)));
        }
    }
    let srcs: Vec<u32> = match sources {
        Sources::All => (0..whites as u32).collect(),
        Sources::Only(v) => v.clone(),
    };
    let (mut a, mut b, mut q) = (Vec::new(), Vec::new(), Vec::new());
    for &s in &srcs {
        bfs_into(&d.bdg.map, s, &mut a, &mut q);
        bfs_into(m, s, &mut b, &mut q);
        for v in 0..whites {
            rep.pairs_checked += 1;
            if a[v] > b[v] {
                rep.violations.push(format!("(ii) d({s},{v}) = {} > d̃ = {}", a[v], b[v]));
            }
        }
    }
    rep
}

/// A corner pair breaking `d_n <= d̃_n <= d°_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainViolation {
    pub i: usize,
    pub j: usize,
    pub plain: u32,
    pub cut: u32,
    pub bound: i64,
}

/// Checks `d(v_i, v_j) <= d̃(v_i, v_j) <= Λ_i + Λ_j − 2 min_{[i,j]} Λ + 2`
/// for the given corner pairs.
pub fn check_inequality_chain(d: &Dmgb, pairs: &[(usize, usize)]) -> Vec<ChainViolation> {
    let oracle = CactusOracle::new(&d.bdg.coding.lambda);
    let mut sorted: Vec<(usize, usize)> = pairs.to_vec();
    sorted.sort_unstable();
    let (mut a, mut b, mut q) = (Vec::new(), Vec::new(), Vec::new());
    let mut current = usize::MAX;
    let mut out = Vec::new();
    for (i, j) in sorted {
        if i != current {
            current = i;
            bfs_into(&d.bdg.map, d.bdg.corner_vertex(i), &mut a, &mut q);
            bfs_into(&d.map, d.bdg.corner_vertex(i), &mut b, &mut q);
        }
        let vj = d.bdg.corner_vertex(j) as usize;
        let bound = oracle.one_sided(i, j);
        if a[vj] > b[vj] || b[vj] as i64 > bound {
            out.push(ChainViolation { i, j, plain: a[vj], cut: b[vj], bound });
        }
    }
    out
}

/// Zips the boundary face shut: identifies γ(i) with ṽ_i and merges each
/// chain edge into the matching edge of γ. The result should be
/// isomorphic to the uncut map.
pub fn glue_boundary(d: &Dmgb) -> Result<PlanarMap> {
    if d.delta == 1 {
        return Ok(d.map.clone());
    }
    let m = &d.map;
    let pn = d.bdg.pn();
    let delta = d.delta;
    let lambda = &d.bdg.coding.lambda;
    let phi: Vec<usize> = (0..delta as i32).map(|i| lambda.iter().position(|&l| l == -i).expect("level hit")).collect();
    let chain_edge = |k: usize| (pn + k) as u32;
    let whites = d.bdg.map.vertex_count() - 1;
    let mut rotations: Vec<Vec<u32>> = vec![Vec::new(); whites + 1];
    let drop = |h: u32| h >= 2 * pn as u32;
    for v in 0..whites as u32 {
        rotations[v as usize] = m.rotation(v).iter().copied().filter(|&h| !drop(h)).collect();
    }
    rotations[whites] = m.rotation(d.pointed()).iter().copied().filter(|&h| !drop(h)).collect();
    for k in 1..delta {
        let x = d.gamma[k];
        let y = d.gamma_tilde[k];
        let ax = 2 * phi[k - 1] as u32 + 1;
        let bx = 2 * phi[k] as u32;
        let cy_down = 2 * chain_edge(k - 1) + 1;
        let cy_up = 2 * chain_edge(k);
        let ccw_from = |rot: &[u32], start: u32, stop: u32| -> Vec<u32> {
            // half-edges strictly after `start` up to strictly before `stop`
            let n = rot.len();
            let s = rot.iter().position(|&h| h == start).expect("half-edge in rotation");
            (1..n).map(|t| rot[(s + t) % n]).take_while(|&h| h != stop).collect()
        };
        let rx = m.rotation(x);
        let ry = m.rotation(y);
        let x_fwd = m.sigma(ax) == bx;
        let x_bwd = m.sigma(bx) == ax;
        let y_fwd = m.sigma(cy_up) == cy_down;
        let y_bwd = m.sigma(cy_down) == cy_up;
        let forward = match (x_fwd, x_bwd, y_fwd, y_bwd) {
            (true, false, _, _) => true,
            (false, true, _, _) => false,
            (true, true, true, false) => true,
            (true, true, false, true) => false,
            (true, true, _, _) => true,
            _ => return Err(Error::Internal(format!("boundary corner not found at γ({k})"))),
        };
        if (forward && !y_fwd) || (!forward && !y_bwd) {
            return Err(Error::Internal(format!("boundary orientation mismatch at level {k}")));
        }
        let merged: Vec<u32> = if forward {
            let mut r = vec![bx];
            r.extend(ccw_from(rx, bx, ax));
            r.push(ax);
            r.extend(ccw_from(ry, cy_down, cy_up));
            r
        } else {
            let mut r = vec![ax];
            r.extend(ccw_from(rx, ax, bx));
            r.push(bx);
            r.extend(ccw_from(ry, cy_up, cy_down));
            r
        };
        rotations[x as usize] = merged;
    }
    let mut origin: Vec<VertexOrigin> = m.origins()[..whites].to_vec();
    origin.push(VertexOrigin::Pointed);
    PlanarMap::from_rotations(&rotations, m.root(), whites as u32, origin)
}

/// Sidecar text listing the boundary geodesics:
///
/// ```text
/// delta <δ>
/// gamma <v_0> ... <v_δ>
/// gamma_tilde <v_0> ... <v_δ>
/// ```
pub fn write_boundary_sidecar<W: Write>(d: &Dmgb, mut w: W) -> std::io::Result<()> {
    let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
    writeln!(w, "delta {}", d.delta)?;
    writeln!(w, "gamma {}", join(&d.gamma))?;
    writeln!(w, "gamma_tilde {}", join(&d.gamma_tilde))
}

/// Convenience: the plain simple geodesic of the uncut map.
pub fn plain_simple_geodesic(d: &Dmgb, i: usize) -> GeodesicPath {
    simple_geodesic(&d.bdg, i)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::maps::isomorphic;
    use crate::trees::PlaneTree;

    fn tiny(l: i32) -> LabeledPTree {
        LabeledPTree::new(PlaneTree::from_child_counts(&[1, 1, 0]).unwrap(), 2, vec![0, 0, l]).unwrap()
    }

    #[test]
    fn four_cycle() {
        let d = build_dmgb(&tiny(-1), 1).unwrap();
        assert_eq!(d.delta, 2);
        assert_eq!(d.map.vertex_count(), 4);
        assert_eq!(d.map.edge_count(), 4);
        assert_eq!(d.map.face_degrees(), vec![4, 4]);
        for v in 0..4 {
            assert_eq!(d.map.degree(v), 2);
        }
        let to_p = bfs_distances(&d.map, d.pointed());
        assert_eq!(to_p.get(d.bdg.map_vertex[2]), 1);
        assert!(verify_dmgb_properties(&d, &Sources::All).is_clean());
        assert!(isomorphic(&glue_boundary(&d).unwrap(), &d.bdg.map));
    }

    #[test]
    fn flat_label_is_uncut() {
        let d = build_dmgb(&tiny(0), 1).unwrap();
        assert_eq!(d.delta, 1);
        assert_eq!(d.map, d.bdg.map);
        assert_eq!(d.gamma, d.gamma_tilde);
        assert_eq!(d.gamma.len(), 2);
    }
}
