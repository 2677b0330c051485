//! Plain-text `key = value` experiment configuration.
//!
//! ```text
//! # comment
//! experiment = universality
//! q = 4, 6, 3
//! n = 1000, 10000, 30000
//! samples = 2000
//! seed = 7
//! tol.ks_q = 0.05
//! ```
//!
//! Keys `experiment`, `q`, `n`, `samples`, `continuum_samples`, `m`,
//! `seed` and `out` are typed; `tol.*` entries are tolerances; every other
//! key is kept verbatim as an experiment parameter.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Universality,
    TwoPoint,
    BallVolume,
    GeodesicStats,
    DmgbSweep,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Universality => "universality",
            ExperimentKind::TwoPoint => "two_point",
            ExperimentKind::BallVolume => "ball_volume",
            ExperimentKind::GeodesicStats => "geodesic_stats",
            ExperimentKind::DmgbSweep => "dmgb_sweep",
        }
    }
}

impl FromStr for ExperimentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "universality" => ExperimentKind::Universality,
            "two_point" => ExperimentKind::TwoPoint,
            "ball_volume" => ExperimentKind::BallVolume,
            "geodesic_stats" => ExperimentKind::GeodesicStats,
            "dmgb_sweep" => ExperimentKind::DmgbSweep,
            _ => return Err(Error::Config(format!("unknown experiment '{s}'"))),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub q: Vec<u32>,
    /// Face counts.
    pub n: Vec<usize>,
    pub samples: usize,
    pub continuum_samples: usize,
    pub m: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub tolerances: BTreeMap<String, f64>,
    pub params: BTreeMap<String, String>,
}

impl ExperimentConfig {
    /// Defaults for an experiment, before any file overrides.
    pub fn defaults(experiment: ExperimentKind) -> Self {
        let (q, n, samples) = match experiment {
            ExperimentKind::Universality => (vec![4, 6, 3], vec![1000, 10_000, 30_000], 2000),
            ExperimentKind::TwoPoint => (vec![4], vec![30_000], 4000),
            ExperimentKind::BallVolume => (vec![4], vec![100_000], 200),
            ExperimentKind::GeodesicStats => (vec![4], vec![1000, 10_000, 100_000], 200),
            ExperimentKind::DmgbSweep => (vec![4], vec![1000, 10_000], 100),
        };
        ExperimentConfig {
            experiment,
            q,
            n,
            samples,
            continuum_samples: 10_000,
            m: 2048,
            seed: 1,
            out: PathBuf::from("results"),
            tolerances: BTreeMap::new(),
            params: BTreeMap::new(),
        }
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
    }

    pub fn tolerance(&self, key: &str, default: f64) -> f64 {
        self.tolerances.get(key).copied().unwrap_or(default)
    }

    pub fn param_f64(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not a number"))),
        }
    }

    pub fn param_usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.parse().map_err(|_| Error::Config(format!("{key}: '{v}' is not a count"))),
        }
    }

    /// Every setting as strings, in key order, for the report.
    pub fn echo(&self) -> BTreeMap<String, String> {
        let join = |v: Vec<String>| v.join(",");
        let mut out = BTreeMap::new();
        out.insert("experiment".into(), self.experiment.name().into());
        out.insert("q".into(), join(self.q.iter().map(|x| x.to_string()).collect()));
        out.insert("n".into(), join(self.n.iter().map(|x| x.to_string()).collect()));
        out.insert("samples".into(), self.samples.to_string());
        out.insert("continuum_samples".into(), self.continuum_samples.to_string());
        out.insert("m".into(), self.m.to_string());
        out.insert("seed".into(), self.seed.to_string());
        for (k, v) in &self.tolerances {
            out.insert(format!("tol.{k}"), v.to_string());
        }
        for (k, v) in &self.params {
            out.insert(k.clone(), v.clone());
        }
        out
    }

    pub fn validate(&self) -> Result<()> {
        for &q in &self.q {
            if q != 3 && (q < 4 || q % 2 != 0) {
                return Err(Error::Config(format!("q = {q} must be 3 or an even number ≥ 4")));
            }
        }
        if self.samples == 0 || self.continuum_samples == 0 {
            return Err(Error::Config("sample counts must be at least 1".into()));
        }
        if self.q.is_empty() || self.n.is_empty() {
            return Err(Error::Config("q and n lists must be nonempty".into()));
        }
        if self.n.contains(&0) {
            return Err(Error::Config("face counts must be positive".into()));
        }
        if self.m < 2 {
            return Err(Error::Config("grid size m must be at least 2".into()));
        }
        Ok(())
    }
}

fn list<T: FromStr>(key: &str, v: &str) -> Result<Vec<T>> {
    v.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            let s = s.replace('_', "");
            let parsed = if let Some((a, b)) = s.split_once('e') {
                // 3e4 style counts
                match (a.parse::<u64>(), b.parse::<u32>()) {
                    (Ok(a), Ok(b)) => (a * 10u64.pow(b)).to_string(),
                    _ => s.clone(),
                }
            } else {
                s.clone()
            };
            parsed.parse::<T>().map_err(|_| Error::Config(format!("{key}: cannot parse '{s}'")))
        })
        .collect()
}

fn single<T: FromStr>(key: &str, v: &str) -> Result<T> {
    let mut all = list::<T>(key, v)?;
    if all.len() != 1 {
        return Err(Error::Config(format!("{key} takes one value")));
    }
    Ok(all.remove(0))
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut pairs: Vec<(usize, String, String)> = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) =
                line.split_once('=').ok_or_else(|| Error::Config(format!("line {}: expected key = value", ln + 1)))?;
            pairs.push((ln + 1, k.trim().to_string(), v.trim().to_string()));
        }
        let kind = pairs
            .iter()
            .find(|(_, k, _)| k == "experiment")
            .ok_or_else(|| Error::Config("missing 'experiment' key".into()))?
            .2
            .parse()?;
        let mut c = ExperimentConfig::defaults(kind);
        let mut seen = std::collections::BTreeSet::new();
        for (ln, k, v) in pairs {
            if !seen.insert(k.clone()) {
                return Err(Error::Config(format!("line {ln}: duplicate key '{k}'")));
            }
            match k.as_str() {
                "experiment" => {}
                "q" => c.q = list(&k, &v)?,
                "n" => c.n = list(&k, &v)?,
                "samples" => c.samples = single(&k, &v)?,
                "continuum_samples" => c.continuum_samples = single(&k, &v)?,
                "m" => c.m = single(&k, &v)?,
                "seed" => c.seed = single(&k, &v)?,
                "out" => c.out = PathBuf::from(v),
                _ => {
                    if let Some(t) = k.strip_prefix("tol.") {
                        let x: f64 = v.parse().map_err(|_| Error::Config(format!("line {ln}: bad tolerance '{v}'")))?;
                        c.tolerances.insert(t.to_string(), x);
                    } else {
                        c.params.insert(k, v);
                    }
                }
            }
        }
        c.validate()?;
        Ok(c)
    }
}
