//! Map file formats.
//!
//! Text edge list:
//!
//! ```text
//! V E F p n
//! u v            (one line per edge, edge order)
//! root u v       (origin and head of the root half-edge)
//! point w
//! ```
//!
//! `p` is 0 for triangulations, where `n` is the vertex count.
//!
//! Binary (little-endian):
//!
//! ```text
//! 0   4  magic "RMMP"
//! 4   2  version (1)
//! 6   2  p
//! 8   8  n
//! 16  4  H (half-edges)
//! 20  4  V
//! 24  4  root half-edge
//! 28  4  pointed vertex
//! 32  4H α
//! ..  4H σ
//! ..  4H vertex of each half-edge
//! ..  5V origin tags: kind u8 (0 tree, 1 extra, 2 pointed), index u32
//! ```

use std::io::{BufRead, Read, Write};

use super::planar::{PlanarMap, VertexOrigin};
use crate::error::{Error, Result};

pub const MAP_MAGIC: &[u8; 4] = b"RMMP";
pub const MAP_VERSION: u16 = 1;

pub fn write_edge_list<W: Write>(map: &PlanarMap, p: usize, n: usize, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{} {} {} {} {}", map.vertex_count(), map.edge_count(), map.face_count(), p, n)?;
    for (u, v) in map.edges() {
        writeln!(w, "{u} {v}")?;
    }
    writeln!(w, "root {} {}", map.root_vertex(), map.head(map.root()))?;
    writeln!(w, "point {}", map.pointed())
}

/// Parsed text edge list; carries no rotation system.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeList {
    pub v: usize,
    pub e: usize,
    pub f: usize,
    pub p: usize,
    pub n: usize,
    pub edges: Vec<(u32, u32)>,
    pub root: (u32, u32),
    pub point: u32,
}

pub fn read_edge_list<R: BufRead>(r: R) -> Result<EdgeList> {
    let bad = |reason: String| Error::Format { path: "<edge list>".into(), reason };
    let mut lines = r.lines();
    let mut next_line = || -> Result<String> {
        lines.next().ok_or_else(|| bad("unexpected end of file".into()))?.map_err(|e| Error::io("<edge list>", e))
    };
    let header = next_line()?;
    let h: Vec<usize> = header
        .split_whitespace()
        .map(|x| x.parse().map_err(|_| bad(format!("bad header field {x:?}"))))
        .collect::<Result<_>>()?;
    if h.len() != 5 {
        return Err(bad("header needs V E F p n".into()));
    }
    let parse_pair = |line: &str, skip: usize| -> Result<(u32, u32)> {
        let f: Vec<&str> = line.split_whitespace().skip(skip).collect();
        if f.len() != 2 {
            return Err(bad(format!("bad line {line:?}")));
        }
        let a = f[0].parse().map_err(|_| bad(format!("bad vertex {:?}", f[0])))?;
        let b = f[1].parse().map_err(|_| bad(format!("bad vertex {:?}", f[1])))?;
        if a as usize >= h[0] || b as usize >= h[0] {
            return Err(bad(format!("vertex out of range in {line:?}")));
        }
        Ok((a, b))
    };
    let mut edges = Vec::with_capacity(h[1]);
    for _ in 0..h[1] {
        edges.push(parse_pair(&next_line()?, 0)?);
    }
    let root_line = next_line()?;
    if !root_line.starts_with("root ") {
        return Err(bad("missing root line".into()));
    }
    let root = parse_pair(&root_line, 1)?;
    let point_line = next_line()?;
    let point = point_line
        .strip_prefix("point ")
        .and_then(|x| x.trim().parse().ok())
        .ok_or_else(|| bad("missing point line".into()))?;
    Ok(EdgeList { v: h[0], e: h[1], f: h[2], p: h[3], n: h[4], edges, root, point })
}

pub fn write_map_binary<W: Write>(map: &PlanarMap, p: usize, n: usize, mut w: W) -> std::io::Result<()> {
    let h = map.half_edge_count();
    let mut buf = Vec::with_capacity(32 + 12 * h + 5 * map.vertex_count());
    buf.extend_from_slice(MAP_MAGIC);
    buf.extend_from_slice(&MAP_VERSION.to_le_bytes());
    buf.extend_from_slice(&(p as u16).to_le_bytes());
    buf.extend_from_slice(&(n as u64).to_le_bytes());
    for x in [h as u32, map.vertex_count() as u32, map.root(), map.pointed()] {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for x in 0..h as u32 {
        buf.extend_from_slice(&map.alpha(x).to_le_bytes());
    }
    for &x in map.sigma_slice() {
        buf.extend_from_slice(&x.to_le_bytes());
    }
    for x in 0..h as u32 {
        buf.extend_from_slice(&map.vertex_of(x).to_le_bytes());
    }
    for &o in map.origins() {
        let (kind, idx) = match o {
            VertexOrigin::Tree(i) => (0u8, i),
            VertexOrigin::Extra(i) => (1, i),
            VertexOrigin::Pointed => (2, 0),
        };
        buf.push(kind);
        buf.extend_from_slice(&idx.to_le_bytes());
    }
    w.write_all(&buf)
}

/// A map read back from the binary format, with its (p, n) header fields.
pub struct StoredMap {
    pub map: PlanarMap,
    pub p: usize,
    pub n: usize,
}

pub fn read_map_binary<R: Read>(mut r: R) -> Result<StoredMap> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::io("<map stream>", e))?;
    let bad = |reason: &str| Error::Format { path: "<map stream>".into(), reason: reason.into() };
    if bytes.len() < 32 || &bytes[0..4] != MAP_MAGIC {
        return Err(bad("missing RMMP header"));
    }
    if u16::from_le_bytes([bytes[4], bytes[5]]) != MAP_VERSION {
        return Err(bad("unsupported version"));
    }
    let p = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let word = |i: usize| u32::from_le_bytes(bytes[i..i + 4].try_into().expect("4 bytes"));
    let (h, v, root, pointed) = (word(16) as usize, word(20) as usize, word(24), word(28));
    if bytes.len() != 32 + 12 * h + 5 * v {
        return Err(bad("length does not match header"));
    }
    for x in 0..h {
        if word(32 + 4 * x) != (x as u32 ^ 1) {
            return Err(bad("α must pair half-edges 2e and 2e+1"));
        }
    }
    let sigma: Vec<u32> = (0..h).map(|x| word(32 + 4 * h + 4 * x)).collect();
    let vertex: Vec<u32> = (0..h).map(|x| word(32 + 8 * h + 4 * x)).collect();
    let mut origin = Vec::with_capacity(v);
    for i in 0..v {
        let at = 32 + 12 * h + 5 * i;
        let idx = word(at + 1);
        origin.push(match bytes[at] {
            0 => VertexOrigin::Tree(idx),
            1 => VertexOrigin::Extra(idx),
            2 => VertexOrigin::Pointed,
            _ => return Err(bad("bad origin tag")),
        });
    }
    let mut rotations: Vec<Vec<u32>> = vec![Vec::new(); v];
    let mut done = vec![false; h];
    for s in 0..h {
        if done[s] {
            continue;
        }
        let owner = *vertex.get(s).ok_or_else(|| bad("vertex table"))? as usize;
        if owner >= v || !rotations[owner].is_empty() {
            return Err(bad("vertex table inconsistent with σ"));
        }
        let mut x = s;
        loop {
            if x >= h || done[x] || vertex[x] as usize != owner {
                return Err(bad("σ inconsistent with vertex table"));
            }
            done[x] = true;
            rotations[owner].push(x as u32);
            x = sigma[x] as usize;
            if x == s {
                break;
            }
        }
    }
    let map = PlanarMap::from_rotations(&rotations, root, pointed, origin)?;
    Ok(StoredMap { map, p, n })
}
