//! Experiment records and report files.
//!
//! `report.csv` has the columns `experiment,q,n,stat,value,stderr,seed`,
//! one row per cell statistic (`q = 0` marks continuum rows, an empty
//! `stderr` means none was computed). `report.json` holds the full records
//! and reloads exactly. Each plot series goes to
//! `<experiment>_<series>.dat` as two whitespace-separated columns.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "experiment,q,n,stat,value,stderr,seed";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StatRow {
    pub q: u32,
    pub n: u64,
    pub stat: String,
    pub value: f64,
    pub stderr: Option<f64>,
}

/// A pass/fail item: exact identities must have `value == 0` violations,
/// tolerances must land inside `[lower, upper]`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub exact: bool,
    pub value: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub passed: bool,
}

impl Check {
    pub fn exact(name: impl Into<String>, violations: u64) -> Self {
        Check {
            name: name.into(),
            exact: true,
            value: violations as f64,
            lower: None,
            upper: Some(0.0),
            passed: violations == 0,
        }
    }

    pub fn below(name: impl Into<String>, value: f64, upper: f64) -> Self {
        Check { name: name.into(), exact: false, value, lower: None, upper: Some(upper), passed: value < upper }
    }

    pub fn above(name: impl Into<String>, value: f64, lower: f64) -> Self {
        Check { name: name.into(), exact: false, value, lower: Some(lower), upper: None, passed: value > lower }
    }

    pub fn within(name: impl Into<String>, value: f64, lower: f64, upper: f64) -> Self {
        Check {
            name: name.into(),
            exact: false,
            value,
            lower: Some(lower),
            upper: Some(upper),
            passed: value >= lower && value <= upper,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlotSeries {
    pub name: String,
    pub points: Vec<(f64, f64)>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentRecord {
    pub experiment: String,
    pub config: BTreeMap<String, String>,
    pub seed: u64,
    /// How task streams are derived from the seed.
    pub rng: String,
    pub rows: Vec<StatRow>,
    pub checks: Vec<Check>,
    pub plots: Vec<PlotSeries>,
    /// Cells that did not complete, with the reason.
    pub partial: Vec<String>,
}

impl ExperimentRecord {
    pub fn new(experiment: &str, config: BTreeMap<String, String>, seed: u64) -> Self {
        ExperimentRecord {
            experiment: experiment.into(),
            config,
            seed,
            rng: "ChaCha8(mix(mix(mix(seed) ^ cell) ^ replicate)), mix = SplitMix64 finalizer".into(),
            rows: Vec::new(),
            checks: Vec::new(),
            plots: Vec::new(),
            partial: Vec::new(),
        }
    }

    pub fn row(&mut self, q: u32, n: u64, stat: impl Into<String>, value: f64, stderr: Option<f64>) {
        self.rows.push(StatRow { q, n, stat: stat.into(), value, stderr });
    }

    pub fn passed(&self) -> bool {
        self.partial.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    pub fn exact_violations(&self) -> f64 {
        self.checks.iter().filter(|c| c.exact).map(|c| c.value).sum()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn value(&self, q: u32, n: u64, stat: &str) -> Option<f64> {
        self.rows.iter().find(|r| r.q == q && r.n == n && r.stat == stat).map(|r| r.value)
    }
}

fn fmt_f64(x: f64) -> String {
    // shortest round-trip representation
    format!("{x:?}")
}

pub fn records_to_csv(records: &[ExperimentRecord]) -> String {
    let mut s = String::from(CSV_HEADER);
    s.push('\n');
    for r in records {
        for row in &r.rows {
            let se = row.stderr.map(fmt_f64).unwrap_or_default();
            writeln!(s, "{},{},{},{},{},{},{}", r.experiment, row.q, row.n, row.stat, fmt_f64(row.value), se, r.seed)
                .expect("writing to a string");
        }
    }
    s
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(bytes).map_err(|e| Error::io(path, e))
}

/// Writes `report.csv`, `report.json` and the plot-data files into `dir`,
/// returning the paths in the order written.
pub fn emit_report(records: &[ExperimentRecord], dir: &Path) -> Result<Vec<PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut written = Vec::new();
    let csv = dir.join("report.csv");
    write_file(&csv, records_to_csv(records).as_bytes())?;
    written.push(csv);
    let json = dir.join("report.json");
    let mut text = serde_json::to_string_pretty(records)?;
    text.push('\n');
    write_file(&json, text.as_bytes())?;
    written.push(json);
    for r in records {
        for p in &r.plots {
            let path = dir.join(format!("{}_{}.dat", r.experiment, p.name));
            let mut s = String::new();
            for (x, y) in &p.points {
                writeln!(s, "{} {}", fmt_f64(*x), fmt_f64(*y)).expect("writing to a string");
            }
            write_file(&path, s.as_bytes())?;
            written.push(path);
        }
    }
    Ok(written)
}

pub fn read_report_json(path: &Path) -> Result<Vec<ExperimentRecord>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    Ok(serde_json::from_str(&text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_is_header_only() {
        assert_eq!(records_to_csv(&[]), format!("{CSV_HEADER}\n"));
    }

    #[test]
    fn json_round_trip_is_exact() {
        let dir = tempfile::tempdir().unwrap();
        let mut r = ExperimentRecord::new("universality", BTreeMap::new(), 3);
        r.row(4, 1000, "mean", 0.1 + 0.2, Some(1.0 / 3.0));
        r.row(0, 2048, "delta_mean", std::f64::consts::PI, None);
        r.checks.push(Check::below("ks", 0.01, 0.05));
        r.plots.push(PlotSeries { name: "ecdf".into(), points: vec![(0.5, 1e-300)] });
        let paths = emit_report(&[r.clone()], dir.path()).unwrap();
        assert_eq!(paths.len(), 3);
        let back = read_report_json(&dir.path().join("report.json")).unwrap();
        assert_eq!(back, vec![r]);
        let csv = std::fs::read_to_string(&paths[0]).unwrap();
        assert!(csv.contains("universality,0,2048,delta_mean,3.141592653589793,,3"));
    }
}
