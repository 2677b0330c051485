use std::io::{Read, Write};

use super::plane::PlaneTree;
use super::ptree::LabeledPTree;
use crate::error::{Error, Result};

pub const CONTOUR_MAGIC: &[u8; 4] = b"RMLT";
pub const CONTOUR_VERSION: u16 = 1;

/// White contour of a labeled p-tree: `C_i = |v_i| / 2`, `Λ_i = ℓ(v_i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContourCoding {
    pub p: usize,
    pub c: Vec<u32>,
    pub lambda: Vec<i32>,
    /// Tree vertex visited at each white corner.
    pub vertices: Vec<u32>,
}

impl ContourCoding {
    /// Number of steps `pn`.
    pub fn len(&self) -> usize {
        self.c.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn n(&self) -> usize {
        self.len() / self.p
    }
}

pub fn contour_and_labels(theta: &LabeledPTree) -> ContourCoding {
    let tree = theta.tree();
    let tour = tree.dfs_sequence();
    let vertices: Vec<u32> = tour.iter().step_by(2).copied().collect();
    let c = vertices.iter().map(|&v| tree.depth(v as usize) / 2).collect();
    let lambda = vertices.iter().map(|&v| theta.label(v as usize)).collect();
    ContourCoding { p: theta.p(), c, lambda, vertices }
}

fn malformed(index: usize, reason: impl Into<String>) -> Error {
    Error::MalformedCoding { index, reason: reason.into() }
}

/// Rebuilds the unique labeled p-tree with the given white contour and
/// label sequences. Errors name the first violated constraint.
pub fn decode_contour(c: &[u32], lambda: &[i32], p: usize) -> Result<LabeledPTree> {
    if p < 2 {
        return Err(Error::InvalidParameter(format!("arity p = {p} < 2")));
    }
    if c.is_empty() || c.len() != lambda.len() {
        return Err(malformed(0, "C and Λ must be non-empty and of equal length"));
    }
    if c[0] != 0 {
        return Err(malformed(0, "C_0 must be 0"));
    }
    if lambda[0] != 0 {
        return Err(malformed(0, "Λ_0 must be 0"));
    }
    let steps = c.len() - 1;
    if !steps.is_multiple_of(p) {
        return Err(malformed(steps, format!("length {steps} is not a multiple of p = {p}")));
    }
    let mut parent: Vec<u32> = vec![u32::MAX];
    let mut kids: Vec<u32> = vec![0];
    let mut labels: Vec<i32> = vec![0];
    let mut path: Vec<u32> = vec![0];
    for i in 0..steps {
        let dc = c[i + 1] as i64 - c[i] as i64;
        let dl = lambda[i + 1] as i64 - lambda[i] as i64;
        if dc.abs() > 1 {
            return Err(malformed(i, format!("contour step {dc} has magnitude > 1")));
        }
        if dl < -1 {
            return Err(malformed(i, format!("label step {dl} < -1")));
        }
        let top = *path.last().expect("path keeps the root");
        match dc {
            1 => {
                let b = parent.len() as u32;
                parent.push(top);
                kids.push(1);
                labels.push(0);
                kids[top as usize] += 1;
                let u = parent.len() as u32;
                parent.push(b);
                kids.push(0);
                labels.push(lambda[i + 1]);
                path.push(u);
            }
            0 => {
                if path.len() == 1 {
                    return Err(malformed(i, "flat step at the root"));
                }
                let b = parent[top as usize];
                if kids[b as usize] as usize >= p - 1 {
                    return Err(malformed(i, "black vertex would exceed p-1 children"));
                }
                kids[b as usize] += 1;
                let u = parent.len() as u32;
                parent.push(b);
                kids.push(0);
                labels.push(lambda[i + 1]);
                *path.last_mut().expect("nonempty") = u;
            }
            _ => {
                if path.len() == 1 {
                    return Err(malformed(i, "contour goes below 0"));
                }
                let b = parent[top as usize];
                if kids[b as usize] as usize != p - 1 {
                    return Err(malformed(i, "black vertex closed with fewer than p-1 children"));
                }
                path.pop();
                let back = *path.last().expect("nonempty") as usize;
                if labels[back] != lambda[i + 1] {
                    return Err(malformed(i, "label of a revisited vertex changed"));
                }
            }
        }
    }
    if path.len() != 1 {
        return Err(malformed(steps, "C must end at 0"));
    }
    let tree = PlaneTree::from_child_counts(&kids)?;
    let n = steps / p;
    if tree.len() != p * n + 1 {
        return Err(Error::Internal("decoded vertex count mismatch".into()));
    }
    Ok(LabeledPTree::from_parts_unchecked(tree, p, labels))
}

/// Byte layout (all integers little-endian):
///
/// ```text
/// 0   4  magic "RMLT"
/// 4   2  version (1)
/// 6   2  p
/// 8   8  n  (number of black vertices; the coding has pn steps)
/// 16  ⌈pn/4⌉ bytes: C steps, 2 bits each, step t at bits 2(t mod 4) of
///        byte ⌊t/4⌋; codes 0,1,2 mean −1,0,+1
/// ..  pn unsigned LEB128 varints holding Λ_{t+1} − Λ_t + 1
/// ```
pub fn write_contour<W: Write>(coding: &ContourCoding, mut w: W) -> std::io::Result<()> {
    let steps = coding.len();
    w.write_all(CONTOUR_MAGIC)?;
    w.write_all(&CONTOUR_VERSION.to_le_bytes())?;
    w.write_all(&(coding.p as u16).to_le_bytes())?;
    w.write_all(&(coding.n() as u64).to_le_bytes())?;
    let mut packed = vec![0u8; steps.div_ceil(4)];
    for t in 0..steps {
        let code = (coding.c[t + 1] as i64 - coding.c[t] as i64 + 1) as u8;
        packed[t / 4] |= code << (2 * (t % 4));
    }
    w.write_all(&packed)?;
    let mut buf = Vec::with_capacity(steps);
    for t in 0..steps {
        let mut x = (coding.lambda[t + 1] as i64 - coding.lambda[t] as i64 + 1) as u64;
        loop {
            let byte = (x & 0x7f) as u8;
            x >>= 7;
            if x == 0 {
                buf.push(byte);
                break;
            }
            buf.push(byte | 0x80);
        }
    }
    w.write_all(&buf)
}

/// Reads the format written by [`write_contour`] and decodes the tree.
pub fn read_contour<R: Read>(mut r: R) -> Result<LabeledPTree> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::io("<contour stream>", e))?;
    let bad = |reason: &str| Error::Format { path: "<contour stream>".into(), reason: reason.into() };
    if bytes.len() < 16 || &bytes[0..4] != CONTOUR_MAGIC {
        return Err(bad("missing RMLT header"));
    }
    let version = u16::from_le_bytes([bytes[4], bytes[5]]);
    if version != CONTOUR_VERSION {
        return Err(bad("unsupported version"));
    }
    let p = u16::from_le_bytes([bytes[6], bytes[7]]) as usize;
    let n = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let steps = p.checked_mul(n).ok_or_else(|| bad("pn overflows"))?;
    let packed_len = steps.div_ceil(4);
    if bytes.len() < 16 + packed_len {
        return Err(bad("truncated contour steps"));
    }
    let packed = &bytes[16..16 + packed_len];
    let mut c = Vec::with_capacity(steps + 1);
    c.push(0u32);
    let mut level: i64 = 0;
    for t in 0..steps {
        let code = (packed[t / 4] >> (2 * (t % 4))) & 3;
        if code == 3 {
            return Err(bad("invalid contour step code"));
        }
        level += code as i64 - 1;
        if level < 0 {
            return Err(Error::MalformedCoding { index: t, reason: "contour goes below 0".into() });
        }
        c.push(level as u32);
    }
    let mut pos = 16 + packed_len;
    let mut lambda = Vec::with_capacity(steps + 1);
    lambda.push(0i32);
    let mut cur: i64 = 0;
    for _ in 0..steps {
        let mut x: u64 = 0;
        let mut shift = 0;
        loop {
            let byte = *bytes.get(pos).ok_or_else(|| bad("truncated label steps"))?;
            pos += 1;
            x |= ((byte & 0x7f) as u64) << shift;
            if byte & 0x80 == 0 {
                break;
            }
            shift += 7;
            if shift > 63 {
                return Err(bad("varint too long"));
            }
        }
        cur += x as i64 - 1;
        lambda.push(i32::try_from(cur).map_err(|_| bad("label out of range"))?);
    }
    if pos != bytes.len() {
        return Err(bad("trailing bytes"));
    }
    decode_contour(&c, &lambda, p)
}
