//! Embedding of arc diagrams drawn from the corners of a tree contour.
//!
//! Corners ("positions") lie in cyclic order along a circle, each owned by
//! a vertex. An arc goes from a position either to another position or to
//! the pointed vertex, and arcs never cross. Walking a vertex's positions in
//! contour order, each position contributes first its incoming arcs, nearest
//! source first, then its outgoing arc; this gives the clockwise rotation.
//! Around the pointed vertex the clockwise rotation lists arcs by decreasing
//! source position.

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) enum Target {
    Pos(u32),
    Pointed,
}

pub(crate) struct ArcSystem {
    /// Vertex owning each position.
    pub positions: Vec<u32>,
    pub vertex_count: usize,
    pub pointed: u32,
    /// Arc `e` yields half-edges `2e` (source side) and `2e + 1`.
    pub arcs: Vec<(u32, Target)>,
}

impl ArcSystem {
    /// Counterclockwise rotation of every vertex.
    pub fn rotations(&self) -> Vec<Vec<u32>> {
        let np = self.positions.len();
        let mut incoming: Vec<Vec<(u32, u32)>> = vec![Vec::new(); np];
        let mut outgoing: Vec<Vec<u32>> = vec![Vec::new(); np];
        let mut to_pointed: Vec<(u32, u32)> = Vec::new();
        for (e, &(s, t)) in self.arcs.iter().enumerate() {
            let e = e as u32;
            outgoing[s as usize].push(2 * e);
            match t {
                Target::Pos(t) => {
                    let d = (t as usize + np - s as usize) % np;
                    incoming[t as usize].push((d as u32, 2 * e + 1));
                }
                Target::Pointed => to_pointed.push((s, 2 * e + 1)),
            }
        }
        let mut cw: Vec<Vec<u32>> = vec![Vec::new(); self.vertex_count];
        for pos in 0..np {
            let v = self.positions[pos] as usize;
            let inc = &mut incoming[pos];
            inc.sort_unstable();
            cw[v].extend(inc.iter().map(|&(_, h)| h));
            cw[v].extend(outgoing[pos].iter().copied());
        }
        to_pointed.sort_unstable_by(|a, b| b.cmp(a));
        cw[self.pointed as usize].extend(to_pointed.iter().map(|&(_, h)| h));
        for r in &mut cw {
            r.reverse();
        }
        cw
    }
}
