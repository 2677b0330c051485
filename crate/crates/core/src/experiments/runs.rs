//! The Monte Carlo experiments.
//!
//! Every replicate draws from `rng::stream(seed, cell, replicate)`, where
//! `cell` numbers the (experiment part, q, n) combination. Replicates run in
//! parallel but results are collected in replicate order and reduced
//! sequentially, so reports do not depend on thread scheduling.

use rand::Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ExperimentKind};
use super::record::{Check, ExperimentRecord, PlotSeries};
use super::sampling::sample_tree;
use super::stats::{fit_line, ks_two_sample, moments, quantile, sorted};
use crate::continuum::{sample_snake, FastDstar};
use crate::dmgb::{build_dmgb, check_inequality_chain};
use crate::error::{Error, Result};
use crate::maps::{bfs_distances, bfs_into, simple_geodesic, UNREACHED};
use crate::rng::{stream, Stream};
use crate::tri::c_q;

/// Cell offsets of the continuum samples, far above any discrete cell.
const CONTINUUM_CELL: u64 = 1 << 40;

const QUANTILES: [f64; 5] = [0.1, 0.25, 0.5, 0.75, 0.9];

fn replicates<T, F>(seed: u64, cell: u64, count: usize, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64, &mut Stream) -> Result<T> + Sync,
{
    (0..count as u64)
        .into_par_iter()
        .map(|rep| {
            let mut rng = stream(seed, cell, rep);
            f(rep, &mut rng)
        })
        .collect()
}

/// `c_q · faces^{−1/4}`.
pub fn distance_scale(q: u32, faces: usize) -> f64 {
    c_q(q as usize) * (faces as f64).powf(-0.25)
}

fn summarize(rec: &mut ExperimentRecord, q: u32, n: u64, prefix: &str, xs: &[f64]) {
    let mo = moments(xs);
    rec.row(q, n, format!("{prefix}mean"), mo.mean, Some(mo.stderr));
    rec.row(q, n, format!("{prefix}sd"), mo.sd, None);
    let s = sorted(xs);
    for p in QUANTILES {
        rec.row(q, n, format!("{prefix}q{:02}", (p * 100.0).round() as u32), quantile(&s, p), None);
    }
    rec.row(q, n, format!("{prefix}samples"), xs.len() as f64, None);
}

fn quantile_curve(name: String, xs: &[f64]) -> PlotSeries {
    let s = sorted(xs);
    PlotSeries { name, points: (0..=100).map(|k| (k as f64 / 100.0, quantile(&s, k as f64 / 100.0))).collect() }
}

fn reference_q(config: &ExperimentConfig) -> u32 {
    if config.q.contains(&4) {
        4
    } else {
        config.q[0]
    }
}

fn largest_n(config: &ExperimentConfig) -> usize {
    *config.n.iter().max().expect("validated nonempty")
}

/// `d(∅, ∂)` read off the labels; when `check` is set the map is built and
/// the value compared with breadth-first search. Returns the distance and
/// whether a check failed.
pub fn root_to_pointed<R: Rng + ?Sized>(q: u32, faces: usize, rng: &mut R, check: bool) -> Result<(u32, bool)> {
    let t = sample_tree(q, faces, rng)?;
    let labels = t.vertex_labels();
    let min = *labels.iter().min().expect("nonempty");
    let d = (labels[0] - min + 1) as u32;
    let mut bad = false;
    if check {
        let m = t.build()?;
        bad = bfs_distances(&m.map, m.root_vertex).get(m.map.pointed()) != d;
    }
    Ok((d, bad))
}

/// Δ of independent grid snakes.
fn continuum_deltas(seed: u64, cell: u64, count: usize, m: usize) -> Result<Vec<f64>> {
    replicates(seed, cell, count, |_, rng| Ok(sample_snake(m, rng)?.delta))
}

pub fn run_universality(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::Universality.name(), config.echo(), config.seed);
    let verify_reps = config.param_usize("verify_reps", 10)? as u64;
    let qref = reference_q(config);
    let mut ladder: Vec<usize> = config.n.clone();
    ladder.sort_unstable();
    ladder.dedup();
    let deltas = continuum_deltas(config.seed, CONTINUUM_CELL, config.continuum_samples, config.m)?;
    summarize(&mut rec, 0, config.m as u64, "delta_", &deltas);
    let mut violations = 0u64;
    let mut trend = Vec::new();
    let mut at_largest: Vec<(u32, Vec<f64>)> = Vec::new();
    for (ni, &n) in ladder.iter().enumerate() {
        let mut per_q: Vec<(u32, Vec<f64>)> = Vec::new();
        for (qi, &q) in config.q.iter().enumerate() {
            let cell = (ni * config.q.len() + qi) as u64 + 1;
            let scale = distance_scale(q, n);
            let out = match replicates(config.seed, cell, config.samples, |rep, rng| {
                root_to_pointed(q, n, rng, rep < verify_reps)
            }) {
                Ok(v) => v,
                Err(e) => {
                    rec.partial.push(format!("q={q} n={n}: {e}"));
                    continue;
                }
            };
            violations += out.iter().filter(|x| x.1).count() as u64;
            let xs: Vec<f64> = out.iter().map(|x| x.0 as f64 * scale).collect();
            summarize(&mut rec, q, n as u64, "", &xs);
            per_q.push((q, xs));
        }
        for i in 0..per_q.len() {
            for j in i + 1..per_q.len() {
                let ks = ks_two_sample(&per_q[i].1, &per_q[j].1);
                rec.row(per_q[i].0, n as u64, format!("ks_vs_q{}", per_q[j].0), ks.distance, None);
            }
            let ks = ks_two_sample(&per_q[i].1, &deltas);
            rec.row(per_q[i].0, n as u64, "ks_vs_continuum", ks.distance, None);
            rec.row(per_q[i].0, n as u64, "ks_vs_continuum_p", ks.p_value, None);
            if per_q[i].0 == qref {
                trend.push((n as f64, ks.distance));
            }
        }
        if n == *ladder.last().expect("nonempty") {
            at_largest = per_q;
        }
    }
    let big = largest_n(config);
    let find = |q: u32| at_largest.iter().find(|x| x.0 == q).map(|x| &x.1);
    if let (Some(a), Some(b)) = (find(4), find(6)) {
        let ks = ks_two_sample(a, b).distance;
        rec.checks.push(Check::below(format!("ks_q4_q6_n{big}"), ks, config.tolerance("ks_q", 0.05)));
    }
    if let Some(a) = find(qref) {
        let ks = ks_two_sample(a, &deltas).distance;
        rec.checks.push(Check::below(
            format!("ks_q{qref}_continuum_n{big}"),
            ks,
            config.tolerance("ks_continuum", 0.08),
        ));
    }
    if trend.len() >= 2 {
        let rises = trend.windows(2).filter(|w| w[1].1 >= w[0].1).count();
        rec.checks.push(Check::below(format!("ks_q{qref}_continuum_trend_rises"), rises as f64, 0.5));
    }
    rec.checks.push(Check::exact("label_distance_vs_bfs", violations));
    for (q, xs) in &at_largest {
        rec.plots.push(quantile_curve(format!("quantiles_q{q}_n{big}"), xs));
    }
    rec.plots.push(quantile_curve(format!("quantiles_continuum_m{}", config.m), &deltas));
    rec.plots.push(PlotSeries { name: format!("ks_trend_q{qref}"), points: trend });
    Ok(rec)
}

/// Uniform vertex-to-vertex and vertex-to-∂ distances, discrete and
/// continuum.
pub fn run_two_point(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::TwoPoint.name(), config.echo(), config.seed);
    let verify_reps = config.param_usize("verify_reps", 10)? as u64;
    let qref = reference_q(config);
    let big = largest_n(config);
    let mut violations = 0u64;
    let mut cell = 1u64;
    for &n in &config.n {
        for &q in &config.q {
            let scale = distance_scale(q, n);
            // two uniform vertices, distance by breadth-first search
            let two = replicates(config.seed, cell, config.samples, |rep, rng| {
                let m = sample_tree(q, n, rng)?.build()?;
                let vc = m.map.vertex_count() as u32;
                let (u, v) = (rng.gen_range(0..vc), rng.gen_range(0..vc));
                let d = bfs_distances(&m.map, u);
                let mut bad = false;
                if rep < verify_reps {
                    let dp = bfs_distances(&m.map, m.map.pointed());
                    bad = (0..vc)
                        .filter(|&w| w != m.map.pointed())
                        .any(|w| dp.get(w) as i64 != (m.vertex_label[w as usize] - m.min_label + 1) as i64);
                }
                Ok((d.get(v), bad))
            });
            // one uniform vertex against ∂, from the labels
            let one = replicates(config.seed, cell + 1, config.samples, |_, rng| {
                let labels = sample_tree(q, n, rng)?.vertex_labels();
                let w = rng.gen_range(0..=labels.len());
                if w == labels.len() {
                    return Ok(0u32);
                }
                let min = *labels.iter().min().expect("nonempty");
                Ok((labels[w] - min + 1) as u32)
            });
            cell += 2;
            let (two, one) = match (two, one) {
                (Ok(a), Ok(b)) => (a, b),
                (Err(e), _) | (_, Err(e)) => {
                    rec.partial.push(format!("q={q} n={n}: {e}"));
                    continue;
                }
            };
            violations += two.iter().filter(|x| x.1).count() as u64;
            let xs: Vec<f64> = two.iter().map(|x| x.0 as f64 * scale).collect();
            let ys: Vec<f64> = one.iter().map(|&x| x as f64 * scale).collect();
            summarize(&mut rec, q, n as u64, "two_point_", &xs);
            summarize(&mut rec, q, n as u64, "one_point_", &ys);
            let ks = ks_two_sample(&xs, &ys);
            rec.row(q, n as u64, "ks_two_vs_one", ks.distance, None);
            rec.row(q, n as u64, "ks_two_vs_one_p", ks.p_value, None);
            if q == qref && n == big {
                rec.checks.push(Check::below(
                    format!("ks_two_vs_one_q{q}_n{n}"),
                    ks.distance,
                    config.tolerance("ks_discrete", 0.05),
                ));
                rec.plots.push(quantile_curve(format!("two_point_q{q}_n{n}"), &xs));
                rec.plots.push(quantile_curve(format!("one_point_q{q}_n{n}"), &ys));
            }
        }
    }
    rec.checks.push(Check::exact("label_distance_vs_bfs", violations));

    // continuum: D*(U, V) and Z_U + Δ on one grid, Δ on independent grids
    let m = config.m;
    let pairs = replicates(config.seed, CONTINUUM_CELL, config.continuum_samples, |_, rng| {
        let g = sample_snake(m, rng)?;
        let (u, v) = (rng.gen_range(0..m), rng.gen_range(0..m));
        let d = FastDstar::new(&g).between(u, v);
        let same = if u == v { d } else { 0.0 };
        Ok((d, g.z[u] + g.delta, same))
    })?;
    let deltas = continuum_deltas(config.seed, CONTINUUM_CELL + 1, config.continuum_samples, m)?;
    let dstar: Vec<f64> = pairs.iter().map(|x| x.0).collect();
    let zu: Vec<f64> = pairs.iter().map(|x| x.1).collect();
    let nonzero_diag = pairs.iter().filter(|x| x.2 != 0.0).count() as u64;
    summarize(&mut rec, 0, m as u64, "dstar_uv_", &dstar);
    summarize(&mut rec, 0, m as u64, "z_u_plus_delta_", &zu);
    summarize(&mut rec, 0, m as u64, "delta_", &deltas);
    let ks_main = ks_two_sample(&dstar, &deltas);
    rec.row(0, m as u64, "ks_dstar_vs_delta", ks_main.distance, None);
    rec.row(0, m as u64, "ks_dstar_vs_delta_p", ks_main.p_value, None);
    rec.row(0, m as u64, "ks_zu_vs_delta", ks_two_sample(&zu, &deltas).distance, None);
    rec.row(0, m as u64, "ks_dstar_vs_zu", ks_two_sample(&dstar, &zu).distance, None);
    rec.checks.push(Check::below(
        format!("ks_dstar_vs_delta_m{m}"),
        ks_main.distance,
        config.tolerance("ks_continuum", 0.05),
    ));
    rec.checks.push(Check::exact("dstar_same_point_nonzero", nonzero_diag));
    rec.plots.push(quantile_curve(format!("dstar_uv_m{m}"), &dstar));
    rec.plots.push(quantile_curve(format!("delta_m{m}"), &deltas));
    Ok(rec)
}

/// Log-spaced grid of `points` values from `lo` to `hi`.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Vec<f64> {
    (0..points).map(|i| lo * (hi / lo).powf(i as f64 / (points - 1).max(1) as f64)).collect()
}

/// Mean ball volume fraction around uniform centers for `r = ρ·n^{1/4}`,
/// with the log-log slope over a fitting window of ρ.
pub fn run_ball_volume(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::BallVolume.name(), config.echo(), config.seed);
    let rho_min = config.param_f64("rho_min", 0.05)?;
    let rho_max = config.param_f64("rho_max", 5.0)?;
    let points = config.param_usize("rho_points", 21)?;
    let centre = (rho_min * rho_max).sqrt();
    let fit_lo = config.param_f64("fit_lo", centre / 10f64.sqrt())?;
    let fit_hi = config.param_f64("fit_hi", centre * 10f64.sqrt())?;
    if !(rho_min > 0.0 && rho_max > rho_min && points >= 2 && fit_hi > fit_lo) {
        return Err(Error::Config("need 0 < rho_min < rho_max, rho_points ≥ 2 and fit_lo < fit_hi".into()));
    }
    let rhos = log_grid(rho_min, rho_max, points);
    let qref = reference_q(config);
    let big = largest_n(config);
    let mut violations = 0u64;
    let mut cell = 1u64;
    for &n in &config.n {
        for &q in &config.q {
            let radii: Vec<f64> = rhos.iter().map(|r| r * (n as f64).powf(0.25)).collect();
            let out = replicates(config.seed, cell, config.samples, |_, rng| {
                let m = sample_tree(q, n, rng)?.build()?;
                let vc = m.map.vertex_count();
                let x = rng.gen_range(0..vc as u32);
                let d = bfs_distances(&m.map, x);
                let mut count = Vec::new();
                for v in 0..vc as u32 {
                    let k = d.get(v);
                    if k == UNREACHED {
                        return Err(Error::Internal("disconnected map".into()));
                    }
                    let k = k as usize;
                    if count.len() <= k {
                        count.resize(k + 1, 0u64);
                    }
                    count[k] += 1;
                }
                let mut cum = 0u64;
                let cumul: Vec<u64> = count
                    .iter()
                    .map(|c| {
                        cum += c;
                        cum
                    })
                    .collect();
                let ecc = cumul.len() - 1;
                let fr: Vec<f64> = radii
                    .iter()
                    .map(|&r| {
                        let k = (r.floor() as usize).min(ecc);
                        cumul[k] as f64 / vc as f64
                    })
                    .collect();
                let mut bad = fr.windows(2).filter(|w| w[1] < w[0]).count() as u64;
                if cumul[ecc] != vc as u64 {
                    bad += 1;
                }
                Ok((fr, bad))
            });
            cell += 1;
            let out = match out {
                Ok(v) => v,
                Err(e) => {
                    rec.partial.push(format!("q={q} n={n}: {e}"));
                    continue;
                }
            };
            violations += out.iter().map(|x| x.1).sum::<u64>();
            let mut means = Vec::new();
            for (i, rho) in rhos.iter().enumerate() {
                let col: Vec<f64> = out.iter().map(|x| x.0[i]).collect();
                let mo = moments(&col);
                rec.row(q, n as u64, format!("volume_rho_{rho:.4}"), mo.mean, Some(mo.stderr));
                means.push((*rho, mo.mean));
            }
            let window: Vec<(f64, f64)> = means
                .iter()
                .filter(|(r, v)| *r >= fit_lo && *r <= fit_hi && *v > 0.0)
                .map(|(r, v)| (r.ln(), v.ln()))
                .collect();
            if window.len() < 3 {
                rec.partial.push(format!("q={q} n={n}: fewer than three points in the fitting window"));
                continue;
            }
            let (x, y): (Vec<f64>, Vec<f64>) = window.into_iter().unzip();
            let fit = fit_line(&x, &y);
            rec.row(q, n as u64, "slope", fit.slope, Some(fit.slope_stderr));
            if q == qref && n == big {
                rec.checks.push(Check::within(
                    format!("slope_q{q}_n{n}"),
                    fit.slope,
                    config.tolerance("slope_lo", 3.5),
                    config.tolerance("slope_hi", 4.5),
                ));
            }
            rec.plots.push(PlotSeries { name: format!("volume_q{q}_n{n}"), points: means });
        }
    }
    rec.checks.push(Check::exact("volume_monotone_and_complete", violations));
    Ok(rec)
}

struct GeodesicRep {
    excluded: bool,
    event: bool,
    /// Shared steps before ∂ of two simple geodesics.
    coalescence: f64,
    bfs_is_simple: bool,
}

/// Traversal event across the two boundaries, coalescence of simple
/// geodesics and how often a breadth-first geodesic is a simple one.
pub fn run_geodesic_stats(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::GeodesicStats.name(), config.echo(), config.seed);
    let alpha = config.param_f64("alpha", 0.1)?;
    let beta1 = config.param_f64("beta1", 2.0)?;
    let beta2 = config.param_f64("beta2", 4.0)?;
    if !(alpha > 0.0 && 15.0 * alpha < beta1 && beta1 < beta2) {
        return Err(Error::Config("need 0 < 15·alpha < beta1 < beta2".into()));
    }
    let mut cell = 1u64;
    for &n in &config.n {
        for &q in &config.q {
            if q % 2 != 0 {
                rec.partial.push(format!("q={q}: boundary surgery needs an even face degree"));
                continue;
            }
            let p = q as usize / 2;
            let s = (n as f64).powf(0.25);
            let a = (alpha * s).floor() as usize;
            let b = (alpha / 3.0 * s).floor() as usize;
            let out = replicates(config.seed, cell, config.samples, |_, rng| {
                let theta = crate::trees::sample_labeled_ptree(p, n, rng)?;
                let eps = rng.gen_range(0..2u8);
                let d = build_dmgb(&theta, eps)?;
                let delta = d.delta;
                let excluded = delta == 1;
                let in_range = beta1 * s < delta as f64 && (delta as f64) < beta2 * s;
                let mut event = false;
                if !excluded && in_range {
                    let da = bfs_distances(&d.map, d.gamma[a]).get(d.gamma_tilde[a]) as i64;
                    let db = bfs_distances(&d.map, d.gamma[b]).get(d.gamma_tilde[b]) as i64;
                    event = da == db + 2 * (a as i64 - b as i64);
                }
                let bdg = &d.bdg;
                let pn = bdg.pn();
                let (i, j) = (rng.gen_range(0..pn), rng.gen_range(0..pn));
                let (wi, wj) = (simple_geodesic(bdg, i).vertices, simple_geodesic(bdg, j).vertices);
                let shared = wi.iter().rev().zip(wj.iter().rev()).take_while(|(x, y)| x == y).count();
                // breadth-first geodesic: first lower neighbour in rotation order
                let pointed = bdg.map.pointed();
                let dist = bfs_distances(&bdg.map, pointed);
                let v = bdg.corner_vertex(rng.gen_range(0..pn));
                let mut path = vec![v];
                let mut cur = v;
                while cur != pointed {
                    let want = dist.get(cur) - 1;
                    cur = bdg
                        .map
                        .rotation(cur)
                        .iter()
                        .map(|&h| bdg.map.head(h))
                        .find(|&w| dist.get(w) == want)
                        .ok_or_else(|| Error::Internal("no lower neighbour".into()))?;
                    path.push(cur);
                }
                let bfs_is_simple =
                    (0..pn).filter(|&c| bdg.corner_vertex(c) == v).any(|c| simple_geodesic(bdg, c).vertices == path);
                Ok(GeodesicRep { excluded, event, coalescence: shared.saturating_sub(1) as f64, bfs_is_simple })
            });
            cell += 1;
            let out = match out {
                Ok(v) => v,
                Err(e) => {
                    rec.partial.push(format!("q={q} n={n}: {e}"));
                    continue;
                }
            };
            let used: Vec<&GeodesicRep> = out.iter().filter(|r| !r.excluded).collect();
            let k = used.iter().filter(|r| r.event).count() as f64;
            let total = used.len() as f64;
            let freq = if total > 0.0 { k / total } else { 0.0 };
            let se = if total > 0.0 { (freq * (1.0 - freq) / total).sqrt() } else { 0.0 };
            rec.row(q, n as u64, "event_frequency", freq, Some(se));
            rec.row(q, n as u64, "excluded_delta_one", (out.len() - used.len()) as f64, None);
            rec.row(q, n as u64, "alpha_index", a as f64, None);
            rec.row(q, n as u64, "alpha_third_index", b as f64, None);
            rec.checks.push(Check::above(format!("event_frequency_q{q}_n{n}"), freq, 0.0));
            let scale = distance_scale(q, n);
            let co: Vec<f64> = out.iter().map(|r| r.coalescence * scale).collect();
            summarize(&mut rec, q, n as u64, "coalescence_", &co);
            let f = out.iter().filter(|r| r.bfs_is_simple).count() as f64 / out.len() as f64;
            rec.row(q, n as u64, "bfs_geodesic_is_simple", f, Some((f * (1.0 - f) / out.len() as f64).sqrt()));
        }
    }
    Ok(rec)
}

/// Exact `d ≤ d̃ ≤ d°` checks over random corner pairs, with rescaled
/// histograms of `d̃`.
pub fn run_dmgb_sweep(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new(ExperimentKind::DmgbSweep.name(), config.echo(), config.seed);
    let pairs = config.param_usize("pairs", 100_000)?;
    let sources = config.param_usize("sources_per_map", 10)?.max(1);
    let bins = config.param_usize("bins", 40)?.max(1);
    let width = config.param_f64("bin_width", 0.1)?;
    let mut cell = 1u64;
    for &n in &config.n {
        for &q in &config.q {
            if q % 2 != 0 {
                rec.partial.push(format!("q={q}: boundary surgery needs an even face degree"));
                continue;
            }
            let p = q as usize / 2;
            let scale = distance_scale(q, n);
            let targets = pairs.div_ceil(config.samples * sources).max(1);
            let out = replicates(config.seed, cell, config.samples, |_, rng| {
                let theta = crate::trees::sample_labeled_ptree(p, n, rng)?;
                let eps = rng.gen_range(0..2u8);
                let d = build_dmgb(&theta, eps)?;
                let pn = d.bdg.pn();
                let mut list = Vec::with_capacity(sources * targets);
                for _ in 0..sources {
                    let i = rng.gen_range(0..pn);
                    for _ in 0..targets {
                        list.push((i, rng.gen_range(0..pn)));
                    }
                }
                let violations = check_inequality_chain(&d, &list).len() as u64;
                let (mut dist, mut queue) = (Vec::new(), Vec::new());
                let mut hist = vec![0u64; bins];
                let mut self_bad = 0u64;
                let mut current = usize::MAX;
                let mut sorted_list = list.clone();
                sorted_list.sort_unstable();
                for &(i, j) in &sorted_list {
                    if i != current {
                        current = i;
                        bfs_into(&d.map, d.bdg.corner_vertex(i), &mut dist, &mut queue);
                        if dist[d.bdg.corner_vertex(i) as usize] != 0 {
                            self_bad += 1;
                        }
                    }
                    let x = dist[d.bdg.corner_vertex(j) as usize] as f64 * scale;
                    let k = ((x / width) as usize).min(bins - 1);
                    hist[k] += 1;
                }
                Ok((violations, self_bad, list.len() as u64, hist))
            });
            cell += 1;
            let out = match out {
                Ok(v) => v,
                Err(e) => {
                    rec.partial.push(format!("q={q} n={n}: {e}"));
                    continue;
                }
            };
            let checked: u64 = out.iter().map(|x| x.2).sum();
            let violations: u64 = out.iter().map(|x| x.0).sum();
            let self_bad: u64 = out.iter().map(|x| x.1).sum();
            let mut hist = vec![0u64; bins];
            for x in &out {
                for (h, c) in hist.iter_mut().zip(&x.3) {
                    *h += c;
                }
            }
            rec.row(q, n as u64, "pairs_checked", checked as f64, None);
            rec.row(q, n as u64, "chain_violations", violations as f64, None);
            rec.checks.push(Check::exact(format!("inequality_chain_q{q}_n{n}"), violations));
            rec.checks.push(Check::exact(format!("self_distance_q{q}_n{n}"), self_bad));
            let total = checked as f64;
            rec.plots.push(PlotSeries {
                name: format!("cut_distance_q{q}_n{n}"),
                points: hist
                    .iter()
                    .enumerate()
                    .map(|(k, &c)| ((k as f64 + 0.5) * width, c as f64 / total / width))
                    .collect(),
            });
        }
    }
    Ok(rec)
}

pub fn run_experiment(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    config.validate()?;
    match config.experiment {
        ExperimentKind::Universality => run_universality(config),
        ExperimentKind::TwoPoint => run_two_point(config),
        ExperimentKind::BallVolume => run_ball_volume(config),
        ExperimentKind::GeodesicStats => run_geodesic_stats(config),
        ExperimentKind::DmgbSweep => run_dmgb_sweep(config),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::from_seed;

    #[test]
    fn one_face_quadrangulations_are_one_or_two_from_the_root() {
        let mut rng = from_seed(4);
        let mut seen = std::collections::BTreeSet::new();
        for _ in 0..200 {
            let (d, bad) = root_to_pointed(4, 1, &mut rng, true).unwrap();
            assert!(!bad);
            seen.insert(d);
        }
        assert_eq!(seen.into_iter().collect::<Vec<_>>(), vec![1, 2]);
    }

    #[test]
    fn scale_constants() {
        assert!((distance_scale(4, 1) - (9.0f64 / 8.0).powf(0.25)).abs() < 1e-15);
        assert!((distance_scale(6, 16) - (3.0f64 / 8.0).powf(0.25) / 2.0).abs() < 1e-15);
        assert!((distance_scale(3, 1) - 6f64.powf(0.25)).abs() < 1e-15);
    }

    #[test]
    fn small_runs_are_deterministic() {
        let text = "experiment = universality\nq = 4, 3\nn = 20, 40\nsamples = 30\ncontinuum_samples = 30\nm = 64\n";
        let c: ExperimentConfig = text.parse().unwrap();
        let a = run_experiment(&c).unwrap();
        let b = run_experiment(&c).unwrap();
        assert_eq!(a, b);
        assert!(a.check("label_distance_vs_bfs").unwrap().passed);
    }

    #[test]
    fn every_experiment_runs_at_toy_size() {
        for name in ["two_point", "ball_volume", "geodesic_stats", "dmgb_sweep"] {
            let text = format!(
                "experiment = {name}\nq = 4\nn = 50\nsamples = 8\ncontinuum_samples = 8\nm = 32\npairs = 200\n"
            );
            let c: ExperimentConfig = text.parse().unwrap();
            let r = run_experiment(&c).unwrap();
            assert!(r.partial.is_empty(), "{name}: {:?}", r.partial);
            assert_eq!(r.exact_violations(), 0.0, "{name}");
        }
    }
}
