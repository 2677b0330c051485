//! Snake and metric file formats.
//!
//! Snake CSV: header `t,e,z`, then one row per grid index `k = 0..=m`.
//!
//! Metric binary (little-endian):
//!
//! ```text
//! 0   4  magic "RMDM"
//! 4   2  version (1)
//! 6   2  flags: bit 0 one-step matrix present, bit 1 chain matrix present
//! 8   8  m (matrix order)
//! 16  ..  upper triangles (j < k, row-major) as f64, one block per flag set
//! ```

use std::io::{BufRead, Read, Write};

use super::metric::MetricSample;
use super::snake::SnakeGrid;
use crate::error::{Error, Result};

pub const METRIC_MAGIC: &[u8; 4] = b"RMDM";
pub const METRIC_VERSION: u16 = 1;

pub fn write_snake_csv<W: Write>(grid: &SnakeGrid, mut w: W) -> std::io::Result<()> {
    writeln!(w, "t,e,z")?;
    for k in 0..=grid.m {
        writeln!(w, "{},{},{}", grid.t(k), grid.e[k], grid.z[k])?;
    }
    Ok(())
}

pub fn read_snake_csv<R: BufRead>(r: R) -> Result<SnakeGrid> {
    let bad = |reason: String| Error::Format { path: "<snake csv>".into(), reason };
    let mut lines = r.lines();
    let header = lines.next().ok_or_else(|| bad("empty file".into()))?.map_err(|e| Error::io("<snake csv>", e))?;
    if header.trim() != "t,e,z" {
        return Err(bad(format!("unexpected header {header:?}")));
    }
    let (mut e, mut z) = (Vec::new(), Vec::new());
    for (i, line) in lines.enumerate() {
        let line = line.map_err(|e| Error::io("<snake csv>", e))?;
        if line.trim().is_empty() {
            continue;
        }
        let cols: Vec<&str> = line.split(',').collect();
        let parse = |s: &str| s.trim().parse::<f64>().map_err(|_| bad(format!("row {}: bad number {s:?}", i + 1)));
        if cols.len() != 3 {
            return Err(bad(format!("row {}: expected 3 columns", i + 1)));
        }
        e.push(parse(cols[1])?);
        z.push(parse(cols[2])?);
    }
    SnakeGrid::new(e, z)
}

pub fn write_metric_binary<W: Write>(sample: &MetricSample, mut w: W) -> std::io::Result<()> {
    let m = sample.m;
    let mut buf = Vec::with_capacity(16 + 8 * m * m);
    buf.extend_from_slice(METRIC_MAGIC);
    buf.extend_from_slice(&METRIC_VERSION.to_le_bytes());
    buf.extend_from_slice(&3u16.to_le_bytes());
    buf.extend_from_slice(&(m as u64).to_le_bytes());
    for mat in [&sample.dcirc, &sample.dstar] {
        for j in 0..m {
            for k in j + 1..m {
                buf.extend_from_slice(&mat[j * m + k].to_le_bytes());
            }
        }
    }
    w.write_all(&buf)
}

pub fn read_metric_binary<R: Read>(mut r: R) -> Result<MetricSample> {
    let mut bytes = Vec::new();
    r.read_to_end(&mut bytes).map_err(|e| Error::io("<metric stream>", e))?;
    let bad = |reason: &str| Error::Format { path: "<metric stream>".into(), reason: reason.into() };
    if bytes.len() < 16 || &bytes[0..4] != METRIC_MAGIC {
        return Err(bad("missing RMDM header"));
    }
    if u16::from_le_bytes([bytes[4], bytes[5]]) != METRIC_VERSION {
        return Err(bad("unsupported version"));
    }
    let flags = u16::from_le_bytes([bytes[6], bytes[7]]);
    let m = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let tri = m * m.saturating_sub(1) / 2;
    let blocks = (flags & 1) as usize + ((flags >> 1) & 1) as usize;
    if bytes.len() != 16 + 8 * tri * blocks {
        return Err(bad("length does not match header"));
    }
    let mut at = 16;
    let mut read_block = |present: bool| -> Vec<f64> {
        let mut mat = vec![0.0; m * m];
        if !present {
            return mat;
        }
        for j in 0..m {
            for k in j + 1..m {
                let x = f64::from_le_bytes(bytes[at..at + 8].try_into().expect("8 bytes"));
                at += 8;
                mat[j * m + k] = x;
                mat[k * m + j] = x;
            }
        }
        mat
    };
    let dcirc = read_block(flags & 1 != 0);
    let dstar = read_block(flags & 2 != 0);
    Ok(MetricSample { m, dcirc, dstar })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::continuum::{metric_sample, sample_snake};
    use crate::rng::from_seed;

    #[test]
    fn round_trips() {
        let mut rng = from_seed(11);
        let g = sample_snake(16, &mut rng).unwrap();
        let mut csv = Vec::new();
        write_snake_csv(&g, &mut csv).unwrap();
        let back = read_snake_csv(&csv[..]).unwrap();
        assert_eq!(back, g);
        let ms = metric_sample(&g);
        let mut bin = Vec::new();
        write_metric_binary(&ms, &mut bin).unwrap();
        assert_eq!(read_metric_binary(&bin[..]).unwrap(), ms);
        assert!(read_metric_binary(&bin[..20]).is_err());
    }
}
