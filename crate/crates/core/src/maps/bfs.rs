use super::planar::PlanarMap;

pub const UNREACHED: u32 = u32::MAX;

/// Graph distances from one source vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DistanceField {
    pub source: u32,
    pub dist: Vec<u32>,
}

impl DistanceField {
    pub fn get(&self, v: u32) -> u32 {
        self.dist[v as usize]
    }
}

pub fn bfs_distances(map: &PlanarMap, source: u32) -> DistanceField {
    let mut dist = Vec::new();
    let mut queue = Vec::new();
    bfs_into(map, source, &mut dist, &mut queue);
    DistanceField { source, dist }
}

/// BFS reusing caller-owned buffers.
pub fn bfs_into(map: &PlanarMap, source: u32, dist: &mut Vec<u32>, queue: &mut Vec<u32>) {
    dist.clear();
    dist.resize(map.vertex_count(), UNREACHED);
    queue.clear();
    dist[source as usize] = 0;
    queue.push(source);
    let mut head = 0;
    while head < queue.len() {
        let v = queue[head];
        head += 1;
        let dv = dist[v as usize] + 1;
        for &h in map.rotation(v) {
            let w = map.head(h);
            if dist[w as usize] == UNREACHED {
                dist[w as usize] = dv;
                queue.push(w);
            }
        }
    }
}

/// Checks `|d(u) - d(v)| <= 1` along every edge and that every non-source
/// vertex has a neighbour one step closer.
pub fn is_consistent(map: &PlanarMap, field: &DistanceField) -> bool {
    let d = &field.dist;
    for (u, v) in map.edges() {
        if d[u as usize].abs_diff(d[v as usize]) > 1 {
            return false;
        }
    }
    (0..map.vertex_count() as u32)
        .all(|v| v == field.source || map.rotation(v).iter().any(|&h| d[map.head(h) as usize] + 1 == d[v as usize]))
}
