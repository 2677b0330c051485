use super::bijection::Triangulation;
use crate::maps::bfs_into;

/// Graph distance on a triangulation extended to the erased type-2
/// vertices, each placed at the middle of its merged edge.
///
/// Points `0..n` are map vertices and `n + u` is the `u`-th erased vertex.
/// Distances are returned in half-edge units (twice the graph distance),
/// so all values are integers. Construction runs one BFS per map vertex.
pub struct HalfDistance {
    n: usize,
    dist: Vec<u32>,
    ends: Vec<[u32; 2]>,
}

impl HalfDistance {
    pub fn new(t: &Triangulation) -> Self {
        let n = t.map.vertex_count();
        let mut dist = vec![0u32; n * n];
        let mut row = Vec::new();
        let mut queue = Vec::new();
        for v in 0..n {
            bfs_into(&t.map, v as u32, &mut row, &mut queue);
            dist[v * n..(v + 1) * n].copy_from_slice(&row);
        }
        HalfDistance { n, dist, ends: t.erased.iter().map(|e| e.ends).collect() }
    }

    /// Number of points (map vertices plus erased vertices).
    pub fn len(&self) -> usize {
        self.n + self.ends.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn map_vertex_count(&self) -> usize {
        self.n
    }

    fn d(&self, a: u32, b: u32) -> u32 {
        self.dist[a as usize * self.n + b as usize]
    }

    /// Twice the extended distance between points `a` and `b`.
    pub fn doubled(&self, a: usize, b: usize) -> u32 {
        let n = self.n;
        match (a < n, b < n) {
            (true, true) => 2 * self.d(a as u32, b as u32),
            (true, false) => 1 + 2 * self.ends[b - n].iter().map(|&x| self.d(a as u32, x)).min().unwrap_or(0),
            (false, true) => self.doubled(b, a),
            (false, false) => {
                if a == b {
                    return 0;
                }
                let (ea, eb) = (self.ends[a - n], self.ends[b - n]);
                let m = ea.iter().flat_map(|&x| eb.iter().map(move |&y| (x, y))).map(|(x, y)| self.d(x, y)).min();
                2 + 2 * m.unwrap_or(0)
            }
        }
    }

    /// Extended distance as a real number.
    pub fn get(&self, a: usize, b: usize) -> f64 {
        self.doubled(a, b) as f64 / 2.0
    }
}
