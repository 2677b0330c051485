//! The exact-identity suites behind `experiment verify`: every check here
//! must report zero violations on every instance.

use rand::Rng;

use super::config::ExperimentConfig;
use super::record::{Check, ExperimentRecord};
use crate::continuum::{
    check_metric_identities, dcirc_matrix, dstar_brute_force, dstar_grid, metric_sample, sample_snake,
};
use crate::dmgb::{build_dmgb, check_inequality_chain, verify_dmgb_properties, Sources};
use crate::error::Result;
use crate::maps::{bdg_forward, bfs_into, verify_distance_formula, CactusOracle};
use crate::rng::stream;
use crate::trees::sample_labeled_ptree;
use crate::tri::{
    bipartite_closed_forms, sample_admissible_tlabels, sample_uniform_ttree, ttree_to_triangulation, verify_tri_cactus,
    verify_tri_constants, verify_tri_distance_formula, ClosedForms, RootType,
};

const VERIFY_CELL: u64 = 1 << 41;

fn bipartite_instance<R: Rng>(p: usize, n: usize, rng: &mut R) -> Result<u64> {
    let theta = sample_labeled_ptree(p, n, rng)?;
    let eps = rng.gen_range(0..2u8);
    let b = bdg_forward(&theta, eps)?;
    let m = &b.map;
    let mut bad = 0u64;
    bad += m.check_planar().is_err() as u64;
    bad += (m.vertex_count() != (p - 1) * n + 2) as u64;
    bad += (m.edge_count() != p * n) as u64;
    bad += (m.face_count() != n) as u64;
    bad += m.face_degrees().iter().filter(|&&d| d != 2 * p).count() as u64;
    bad += (m.euler_characteristic() != 2) as u64;
    bad += verify_distance_formula(&b).len() as u64;
    let oracle = CactusOracle::new(&b.coding.lambda);
    let pn = b.pn();
    let (mut dist, mut queue) = (Vec::new(), Vec::new());
    for _ in 0..5 {
        let i = rng.gen_range(0..pn);
        bfs_into(m, b.corner_vertex(i), &mut dist, &mut queue);
        for j in 0..pn {
            let (lo, hi) = (i.min(j), i.max(j));
            if lo != hi && dist[b.corner_vertex(j) as usize] as i64 > oracle.bound(lo, hi) {
                bad += 1;
            }
        }
    }
    let d = build_dmgb(&theta, eps)?;
    let whites = d.bdg.map.vertex_count() as u32 - 1;
    let srcs: Vec<u32> = (0..3).map(|_| rng.gen_range(0..whites)).collect();
    bad += verify_dmgb_properties(&d, &Sources::Only(srcs)).violations.len() as u64;
    let pairs: Vec<(usize, usize)> = (0..100).map(|_| (rng.gen_range(0..pn), rng.gen_range(0..pn))).collect();
    bad += check_inequality_chain(&d, &pairs).len() as u64;
    Ok(bad)
}

fn triangulation_instance<R: Rng>(n: usize, root: RootType, rng: &mut R) -> Result<u64> {
    let shape = sample_uniform_ttree(n, root, rng)?;
    let t = ttree_to_triangulation(&sample_admissible_tlabels(shape, rng))?;
    let m = &t.map;
    let mut bad = 0u64;
    bad += m.check_planar().is_err() as u64;
    bad += (m.vertex_count() != n) as u64;
    bad += (m.face_count() != 2 * (n - 2)) as u64;
    bad += m.face_degrees().iter().filter(|&&d| d != 3).count() as u64;
    bad += verify_tri_distance_formula(&t).len() as u64;
    let k = t.corners.len();
    let sources: Vec<usize> = (0..5).map(|_| rng.gen_range(0..k)).collect();
    bad += verify_tri_cactus(&t, &sources).len() as u64;
    Ok(bad)
}

/// Runs the exact suites at the configured q and sizes (`verify_sizes`,
/// default `4,100,1000` vertices or faces) with `verify_samples` instances
/// each, plus the grid metric identities at `verify_m` and the constants.
pub fn run_verify(config: &ExperimentConfig) -> Result<ExperimentRecord> {
    let mut rec = ExperimentRecord::new("verify", config.echo(), config.seed);
    let sizes: Vec<usize> = match config.params.get("verify_sizes") {
        Some(s) => s
            .split(',')
            .map(|x| x.trim().parse().map_err(|_| crate::Error::Config(format!("verify_sizes: bad entry '{x}'"))))
            .collect::<Result<_>>()?,
        None => vec![4, 100, 1000],
    };
    let samples = config.param_usize("verify_samples", 5)? as u64;
    let mut cell = VERIFY_CELL;
    for &q in &config.q {
        for &n in &sizes {
            let mut bad = 0u64;
            for rep in 0..samples {
                let mut rng = stream(config.seed, cell, rep);
                bad += if q == 3 {
                    let root = if rep % 2 == 0 { RootType::One } else { RootType::Two };
                    triangulation_instance(n.max(3), root, &mut rng)?
                } else {
                    bipartite_instance(q as usize / 2, n, &mut rng)?
                };
            }
            cell += 1;
            rec.row(q, n as u64, "instances", samples as f64, None);
            rec.checks.push(Check::exact(format!("bijection_identities_q{q}_n{n}"), bad));
        }
    }
    // grid metric identities and the chain oracle on tiny grids
    let m = config.param_usize("verify_m", 64)?;
    let mut bad = 0u64;
    for rep in 0..samples {
        let mut rng = stream(config.seed, cell, rep);
        let g = sample_snake(m, &mut rng)?;
        bad += check_metric_identities(&g, &metric_sample(&g)).len() as u64;
        for tiny in 2..=6 {
            let g = sample_snake(tiny, &mut rng)?;
            let dc = dcirc_matrix(&g);
            let fast = dstar_grid(&dc, tiny);
            let slow = dstar_brute_force(&dc, tiny);
            bad += fast.iter().zip(&slow).filter(|(a, b)| (*a - *b).abs() > 1e-12).count() as u64;
        }
    }
    rec.checks.push(Check::exact(format!("grid_metric_m{m}"), bad));
    // constants against their closed forms
    let c = verify_tri_constants();
    let f = ClosedForms::triangulations();
    let eps = 1e-12;
    let mut off = 0u64;
    off += ((c.spectral_radius - 1.0).abs() > eps) as u64;
    off += (0..4).filter(|&i| (c.a[i] - f.a[i]).abs() > eps || (c.b[i] - f.b[i]).abs() > eps).count() as u64;
    for (x, y) in [(c.a_q_b, f.a_q_b), (c.lambda, f.lambda), (c.sigma2, f.sigma2), (c.kappa, f.kappa)] {
        off += ((x - y).abs() > eps) as u64;
    }
    off += ((c.c_3 - 6f64.powf(0.25)).abs() > eps) as u64;
    for bc in &c.bipartite {
        let (l, k) = bipartite_closed_forms(bc.p);
        off +=
            ((bc.lambda_p - l).abs() > eps || (bc.kappa_p - k).abs() > eps || (bc.kappa_p - bc.c_q).abs() > eps) as u64;
    }
    rec.checks.push(Check::exact("constants_closed_forms", off));
    Ok(rec)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_suite_is_clean_at_small_sizes() {
        let c: ExperimentConfig =
            "experiment = universality\nq = 4, 6, 3\nverify_sizes = 4, 30\nverify_samples = 2\nverify_m = 16\n"
                .parse()
                .unwrap();
        let r = run_verify(&c).unwrap();
        assert!(r.passed(), "{:?}", r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }
}
