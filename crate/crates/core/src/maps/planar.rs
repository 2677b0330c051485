use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// What a map vertex stands for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum VertexOrigin {
    /// A white tree vertex (index in the tree's preorder).
    Tree(u32),
    /// An added vertex, such as a boundary-chain vertex.
    Extra(u32),
    /// The distinguished vertex ∂.
    Pointed,
}

/// Rooted, pointed planar map stored as half-edge permutations.
///
/// Edge `e` consists of half-edges `2e` and `2e + 1`, so the involution is
/// `α(h) = h ^ 1`. `σ(h)` is the next half-edge counterclockwise around the
/// vertex of `h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PlanarMap {
    sigma: Vec<u32>,
    vertex: Vec<u32>,
    rot_start: Vec<u32>,
    rot: Vec<u32>,
    root: u32,
    pointed: u32,
    origin: Vec<VertexOrigin>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Face {
    pub degree: usize,
    pub half_edges: Vec<u32>,
}

impl PlanarMap {
    /// Builds a map from counterclockwise rotation lists, one per vertex.
    pub fn from_rotations(rotations: &[Vec<u32>], root: u32, pointed: u32, origin: Vec<VertexOrigin>) -> Result<Self> {
        let h: usize = rotations.iter().map(Vec::len).sum();
        if !h.is_multiple_of(2) || h == 0 {
            return Err(Error::Internal(format!("odd or zero half-edge count {h}")));
        }
        if origin.len() != rotations.len() {
            return Err(Error::Internal("origin table length mismatch".into()));
        }
        let mut sigma = vec![u32::MAX; h];
        let mut vertex = vec![u32::MAX; h];
        let mut rot_start = Vec::with_capacity(rotations.len() + 1);
        let mut rot = Vec::with_capacity(h);
        for (v, r) in rotations.iter().enumerate() {
            rot_start.push(rot.len() as u32);
            if r.is_empty() {
                return Err(Error::Internal(format!("vertex {v} is isolated")));
            }
            for (k, &x) in r.iter().enumerate() {
                let x = x as usize;
                if x >= h || vertex[x] != u32::MAX {
                    return Err(Error::Internal(format!("half-edge {x} misplaced at vertex {v}")));
                }
                vertex[x] = v as u32;
                sigma[x] = r[(k + 1) % r.len()];
                rot.push(x as u32);
            }
        }
        rot_start.push(rot.len() as u32);
        if root as usize >= h || pointed as usize >= rotations.len() {
            return Err(Error::Internal("root or pointed vertex out of range".into()));
        }
        Ok(PlanarMap { sigma, vertex, rot_start, rot, root, pointed, origin })
    }

    /// Builds a map from σ as a permutation array (vertices are its cycles,
    /// numbered by smallest half-edge).
    pub fn from_sigma(sigma: Vec<u32>, root: u32, pointed_half_edge: u32) -> Result<Self> {
        let h = sigma.len();
        let mut seen = vec![false; h];
        let mut rotations = Vec::new();
        let mut pointed = u32::MAX;
        for s in 0..h {
            if seen[s] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x] {
                seen[x] = true;
                cyc.push(x as u32);
                x = *sigma.get(x).ok_or_else(|| Error::Internal("σ out of range".into()))? as usize;
                if x >= h {
                    return Err(Error::Internal("σ out of range".into()));
                }
            }
            if x != s {
                return Err(Error::Internal("σ is not a permutation".into()));
            }
            if cyc.contains(&pointed_half_edge) {
                pointed = rotations.len() as u32;
            }
            rotations.push(cyc);
        }
        let origin = (0..rotations.len())
            .map(|v| if v as u32 == pointed { VertexOrigin::Pointed } else { VertexOrigin::Extra(v as u32) })
            .collect();
        if pointed == u32::MAX {
            return Err(Error::Internal("pointed half-edge out of range".into()));
        }
        PlanarMap::from_rotations(&rotations, root, pointed, origin)
    }

    pub fn half_edge_count(&self) -> usize {
        self.sigma.len()
    }

    pub fn edge_count(&self) -> usize {
        self.sigma.len() / 2
    }

    pub fn vertex_count(&self) -> usize {
        self.origin.len()
    }

    #[inline]
    pub fn alpha(&self, h: u32) -> u32 {
        h ^ 1
    }

    #[inline]
    pub fn sigma(&self, h: u32) -> u32 {
        self.sigma[h as usize]
    }

    pub fn sigma_slice(&self) -> &[u32] {
        &self.sigma
    }

    #[inline]
    pub fn vertex_of(&self, h: u32) -> u32 {
        self.vertex[h as usize]
    }

    /// Half-edges around `v`, counterclockwise.
    #[inline]
    pub fn rotation(&self, v: u32) -> &[u32] {
        &self.rot[self.rot_start[v as usize] as usize..self.rot_start[v as usize + 1] as usize]
    }

    pub fn degree(&self, v: u32) -> usize {
        self.rotation(v).len()
    }

    /// Endpoint opposite to `h`.
    #[inline]
    pub fn head(&self, h: u32) -> u32 {
        self.vertex[(h ^ 1) as usize]
    }

    pub fn root(&self) -> u32 {
        self.root
    }

    pub fn root_vertex(&self) -> u32 {
        self.vertex_of(self.root)
    }

    pub fn pointed(&self) -> u32 {
        self.pointed
    }

    pub fn origin(&self, v: u32) -> VertexOrigin {
        self.origin[v as usize]
    }

    pub fn origins(&self) -> &[VertexOrigin] {
        &self.origin
    }

    pub fn with_root(&self, root: u32) -> Self {
        let mut m = self.clone();
        m.root = root;
        m
    }

    pub fn with_pointed(&self, pointed: u32) -> Self {
        let mut m = self.clone();
        m.pointed = pointed;
        m
    }

    /// Orbits of σ∘α; each face lists its half-edges in traversal order.
    pub fn faces(&self) -> Vec<Face> {
        let h = self.half_edge_count();
        let mut seen = vec![false; h];
        let mut out = Vec::new();
        for s in 0..h as u32 {
            if seen[s as usize] {
                continue;
            }
            let mut cyc = Vec::new();
            let mut x = s;
            while !seen[x as usize] {
                seen[x as usize] = true;
                cyc.push(x);
                x = self.sigma(self.alpha(x));
            }
            out.push(Face { degree: cyc.len(), half_edges: cyc });
        }
        out
    }

    pub fn face_count(&self) -> usize {
        self.faces().len()
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Sorted multiset of face degrees.
    pub fn face_degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.faces().iter().map(|f| f.degree).collect();
        d.sort_unstable();
        d
    }

    /// Edge list `(u, v)` in edge order, `u` the vertex of half-edge `2e`.
    pub fn edges(&self) -> impl Iterator<Item = (u32, u32)> + '_ {
        (0..self.edge_count() as u32).map(|e| (self.vertex_of(2 * e), self.vertex_of(2 * e + 1)))
    }

    pub fn are_adjacent(&self, u: u32, v: u32) -> bool {
        self.rotation(u).iter().any(|&h| self.head(h) == v)
    }

    /// Structural checks: σ permutation, connectivity and genus 0.
    pub fn check_planar(&self) -> Result<()> {
        let mut seen = vec![false; self.half_edge_count()];
        for &h in &self.sigma {
            if seen[h as usize] {
                return Err(Error::Internal("σ is not a permutation".into()));
            }
            seen[h as usize] = true;
        }
        let d = crate::maps::bfs_distances(self, 0);
        if d.dist.contains(&u32::MAX) {
            return Err(Error::Internal("map is not connected".into()));
        }
        let chi = self.euler_characteristic();
        if chi != 2 {
            return Err(Error::Internal(format!("Euler characteristic {chi} != 2")));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Single edge: two vertices, one face of degree 2.
    fn segment() -> PlanarMap {
        PlanarMap::from_rotations(&[vec![0], vec![1]], 0, 1, vec![VertexOrigin::Tree(0), VertexOrigin::Pointed])
            .unwrap()
    }

    #[test]
    fn segment_is_planar() {
        let m = segment();
        assert_eq!(m.face_degrees(), vec![2]);
        assert_eq!(m.euler_characteristic(), 2);
        m.check_planar().unwrap();
    }

    #[test]
    fn sigma_round_trip() {
        let m = segment();
        let r = PlanarMap::from_sigma(m.sigma_slice().to_vec(), 0, 1).unwrap();
        assert_eq!(r.face_degrees(), vec![2]);
        assert_eq!(r.pointed(), 1);
    }

    #[test]
    fn rejects_duplicate_half_edges() {
        assert!(PlanarMap::from_rotations(
            &[vec![0, 0], vec![1]],
            0,
            1,
            vec![VertexOrigin::Tree(0), VertexOrigin::Pointed]
        )
        .is_err());
    }
}
