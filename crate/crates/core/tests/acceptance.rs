//! Acceptance suite: one line per criterion, nonzero exit if any fails.
//!
//! Statistical criteria load the experiment configs from `configs/` at the
//! workspace root; those files hold the sizes and tolerances used here.

use std::collections::HashSet;
use std::path::PathBuf;
use std::time::Instant;

use rand::Rng;
use randmaps::continuum::{
    check_metric_identities, dcirc_matrix, dstar_brute_force, dstar_grid, metric_sample, sample_snake,
};
use randmaps::dmgb::{build_dmgb, check_inequality_chain, verify_dmgb_properties, Sources};
use randmaps::experiments::{chi_square, emit_report, run_experiment, ExperimentConfig, ExperimentRecord};
use randmaps::maps::{bdg_forward, bfs_into, canonical_hash, verify_distance_formula, CactusOracle, PlanarMap};
use randmaps::rng::{from_seed, stream};
use randmaps::trees::{
    for_each_labeled_ptree, ptree_shapes, sample_labeled_ptree, sample_uniform_ptree_gw, DEFAULT_ENUMERATION_CAP,
};
use randmaps::tri::{
    c_q, enumerate_labeled_ttrees, root_class, sample_admissible_tlabels, sample_conditioned_ttree,
    sample_uniform_ttree, ttree_shapes, ttree_to_triangulation, verify_tri_cactus, verify_tri_constants,
    verify_tri_distance_formula, RootClass, RootType, TSamplerOptions, Triangulation,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn verdict(violations: u64, detail: String) -> Outcome {
    if violations == 0 {
        Ok(detail)
    } else {
        Err(format!("{violations} violations; {detail}"))
    }
}

/// Violations of the distance bound from `sources` corners of a map.
fn cactus_violations(map: &PlanarMap, lambda: &[i32], corner_vertex: impl Fn(usize) -> u32, sources: &[usize]) -> u64 {
    let pn = lambda.len() - 1;
    let oracle = CactusOracle::new(lambda);
    let (mut dist, mut queue) = (Vec::new(), Vec::new());
    let mut bad = 0;
    for &i in sources {
        bfs_into(map, corner_vertex(i), &mut dist, &mut queue);
        for j in 0..pn {
            let (lo, hi) = (i.min(j), i.max(j));
            if lo != hi && dist[corner_vertex(j) as usize] as i64 > oracle.bound(lo, hi) {
                bad += 1;
            }
        }
    }
    bad
}

fn bijection_suite() -> Outcome {
    let mut bad = 0u64;
    let mut maps = 0u64;
    for p in [2, 3] {
        for n in 1..=4 {
            let mut seen = HashSet::new();
            for_each_labeled_ptree(p, n, DEFAULT_ENUMERATION_CAP, |theta| {
                for eps in [0u8, 1] {
                    let b = bdg_forward(theta, eps).expect("valid tree");
                    let m = &b.map;
                    bad += m.check_planar().is_err() as u64;
                    bad += (m.vertex_count() != (p - 1) * n + 2) as u64;
                    bad += (m.edge_count() != p * n) as u64;
                    bad += (m.face_count() != n) as u64;
                    bad += m.face_degrees().iter().filter(|&&d| d != 2 * p).count() as u64;
                    bad += (m.euler_characteristic() != 2) as u64;
                    bad += verify_distance_formula(&b).len() as u64;
                    bad += !seen.insert(canonical_hash(m)) as u64;
                    maps += 1;
                    // the graph does not depend on the root sign
                    if eps == 1 {
                        let all: Vec<usize> = (0..b.pn()).collect();
                        bad += cactus_violations(m, &b.coding.lambda, |i| b.corner_vertex(i), &all);
                    }
                }
            })
            .map_err(|e| e.to_string())?;
        }
    }
    verdict(bad, format!("{maps} maps, p ∈ {{2,3}}, n ≤ 4, both signs"))
}

fn dmgb_suite() -> Outcome {
    let mut bad = 0u64;
    let mut small = 0u64;
    for n in 1..=4 {
        for_each_labeled_ptree(2, n, DEFAULT_ENUMERATION_CAP, |theta| {
            let d = build_dmgb(theta, 1).expect("valid tree");
            bad += verify_dmgb_properties(&d, &Sources::All).violations.len() as u64;
            let pn = 2 * n;
            let pairs: Vec<_> = (0..pn).flat_map(|i| (0..pn).map(move |j| (i, j))).collect();
            bad += check_inequality_chain(&d, &pairs).len() as u64;
            small += 1;
        })
        .map_err(|e| e.to_string())?;
    }
    let mut rng = from_seed(2);
    for _ in 0..100 {
        let theta = sample_labeled_ptree(2, 10_000, &mut rng).map_err(|e| e.to_string())?;
        let d = build_dmgb(&theta, rng.gen_range(0..2)).map_err(|e| e.to_string())?;
        let whites = d.bdg.map.vertex_count() as u32 - 1;
        let sources: Vec<u32> = (0..5).map(|_| rng.gen_range(0..whites)).collect();
        bad += verify_dmgb_properties(&d, &Sources::Only(sources)).violations.len() as u64;
        let pn = d.bdg.pn();
        let pairs: Vec<_> = (0..1000).map(|_| (rng.gen_range(0..pn), rng.gen_range(0..pn))).collect();
        bad += check_inequality_chain(&d, &pairs).len() as u64;
    }
    verdict(bad, format!("{small} exhaustive instances, 100 at n = 10^4"))
}

fn triangulation_violations(t: &Triangulation, sources: &[usize]) -> u64 {
    let n = t.tree.n();
    let m = &t.map;
    let mut bad = m.check_planar().is_err() as u64;
    bad += (m.vertex_count() != n) as u64;
    bad += (m.face_count() != 2 * (n - 2)) as u64;
    bad += m.face_degrees().iter().filter(|&&d| d != 3).count() as u64;
    bad += verify_tri_distance_formula(t).len() as u64;
    bad += verify_tri_cactus(t, sources).len() as u64;
    let want = match t.root_type() {
        RootType::One => RootClass::Positive,
        RootType::Two => RootClass::Null,
    };
    bad += (root_class(m) != want) as u64;
    bad
}

fn triangulation_suite() -> Outcome {
    let mut bad = 0u64;
    let mut enumerated = 0u64;
    for n in 3..=6 {
        let mut seen = HashSet::new();
        for root in [RootType::One, RootType::Two] {
            for theta in enumerate_labeled_ttrees(n, root, 1 << 20).map_err(|e| e.to_string())? {
                let t = ttree_to_triangulation(&theta).map_err(|e| e.to_string())?;
                let all: Vec<usize> = (0..t.corners.len()).collect();
                bad += triangulation_violations(&t, &all);
                bad += !seen.insert(canonical_hash(&t.map)) as u64;
                enumerated += 1;
            }
        }
    }
    let mut rng = from_seed(3);
    let mut random = 0;
    for (n, reps) in [(10, 50), (100, 20), (1000, 10), (10_000, 5)] {
        for root in [RootType::One, RootType::Two] {
            for _ in 0..reps {
                let shape = sample_uniform_ttree(n, root, &mut rng).map_err(|e| e.to_string())?;
                let t =
                    ttree_to_triangulation(&sample_admissible_tlabels(shape, &mut rng)).map_err(|e| e.to_string())?;
                let k = t.corners.len();
                let sources: Vec<usize> = (0..10).map(|_| rng.gen_range(0..k)).collect();
                bad += triangulation_violations(&t, &sources);
                random += 1;
            }
        }
    }
    verdict(bad, format!("{enumerated} enumerated (n ≤ 6), {random} random up to n = 10^4"))
}

fn constants_suite() -> Outcome {
    let c = verify_tri_constants();
    let s3 = 3f64.sqrt();
    let eps = 1e-12;
    let mut pairs: Vec<(String, f64, f64)> = vec![
        ("spectral radius".into(), c.spectral_radius, 1.0),
        ("lambda".into(), c.lambda, (3.0 - s3) / 4.0),
        ("kappa".into(), c.kappa, 3f64.powf(0.25)),
        ("sigma^2".into(), c.sigma2, (s3 - 1.0) / 8.0),
        ("a.Q(b)".into(), c.a_q_b, (6.0 - 3.0 * s3) * (6.0 - s3) / 8.0),
        ("sum a".into(), c.a.iter().sum(), 1.0),
        ("a.b".into(), c.a.iter().zip(&c.b).map(|(x, y)| x * y).sum(), 1.0),
        ("c_3".into(), c.c_3, 6f64.powf(0.25)),
        ("c_3 table".into(), c_q(3), c.c_3),
    ];
    for b in &c.bipartite {
        pairs.push((format!("kappa_{}", b.p), b.kappa_p, c_q(2 * b.p)));
    }
    let off: Vec<String> =
        pairs.iter().filter(|(_, x, y)| (x - y).abs() > eps).map(|(n, x, y)| format!("{n}: {x} vs {y}")).collect();
    if off.is_empty() {
        Ok(format!("{} identities within 1e-12", pairs.len()))
    } else {
        Err(off.join("; "))
    }
}

fn uniformity_suite() -> Outcome {
    let draws = 100_000;
    let mut lines = Vec::new();
    let mut fail = false;
    for (n, root) in [(5, RootType::One), (5, RootType::Two), (6, RootType::One)] {
        let shapes = ttree_shapes(n, root);
        let weights: Vec<f64> = shapes.iter().map(|s| 2f64.powi(s.label_degrees_of_freedom() as i32)).collect();
        let total: f64 = weights.iter().sum();
        let probs: Vec<f64> = weights.iter().map(|w| w / total).collect();
        let index: std::collections::HashMap<_, _> = shapes.iter().enumerate().map(|(i, s)| (s.word(), i)).collect();
        let mut counts = vec![0u64; shapes.len()];
        let mut rng = from_seed(50 + n as u64);
        for _ in 0..draws {
            let s = sample_conditioned_ttree(n, root, &mut rng, TSamplerOptions::default())
                .map_err(|e| e.to_string())?
                .shape;
            counts[index[&s.word()]] += 1;
        }
        let cs = chi_square(&counts, &probs);
        fail |= cs.p_value <= 0.01;
        lines.push(format!("T n={n} {root:?} p={:.3}", cs.p_value));
    }
    for (p, n) in [(2, 5), (3, 4)] {
        let shapes = ptree_shapes(p, n).map_err(|e| e.to_string())?;
        let index: std::collections::HashMap<_, _> =
            shapes.iter().enumerate().map(|(i, s)| (s.child_counts().to_vec(), i)).collect();
        let mut counts = vec![0u64; shapes.len()];
        let mut rng = from_seed(60 + p as u64);
        for _ in 0..draws {
            let t = sample_uniform_ptree_gw(p, n, &mut rng, u64::MAX).map_err(|e| e.to_string())?;
            counts[index[t.child_counts()]] += 1;
        }
        let cs = chi_square(&counts, &vec![1.0 / shapes.len() as f64; shapes.len()]);
        fail |= cs.p_value <= 0.01;
        lines.push(format!("p-tree p={p} n={n} p={:.3}", cs.p_value));
    }
    let detail = format!("{draws} draws each: {}", lines.join(", "));
    if fail {
        Err(detail)
    } else {
        Ok(detail)
    }
}

fn continuum_suite() -> Outcome {
    let mut bad = 0u64;
    let samples = 5;
    for r in 0..samples {
        let g = sample_snake(512, &mut stream(6, 0, r)).map_err(|e| e.to_string())?;
        bad += check_metric_identities(&g, &metric_sample(&g)).len() as u64;
    }
    let mut rng = from_seed(6);
    for m in 2..=6 {
        for _ in 0..200 {
            let g = sample_snake(m, &mut rng).map_err(|e| e.to_string())?;
            let dc = dcirc_matrix(&g);
            let fast = dstar_grid(&dc, m);
            let slow = dstar_brute_force(&dc, m);
            bad += fast.iter().zip(&slow).filter(|(a, b)| (*a - *b).abs() > 1e-12).count() as u64;
        }
    }
    verdict(bad, format!("{samples} grids at m = 512, 1000 chain oracles at m ≤ 6"))
}

fn config_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs").join(format!("{name}.conf"))
}

fn run_config(name: &str) -> Result<ExperimentRecord, String> {
    let config = ExperimentConfig::load(&config_path(name)).map_err(|e| e.to_string())?;
    run_experiment(&config).map_err(|e| e.to_string())
}

fn summarize(rec: &ExperimentRecord) -> Outcome {
    let parts: Vec<String> = rec
        .checks
        .iter()
        .filter(|c| !c.exact || !c.passed)
        .map(|c| format!("{}{} = {:.4}", if c.passed { "" } else { "FAILED " }, c.name, c.value))
        .collect();
    let detail = parts.join(", ");
    if rec.passed() {
        Ok(detail)
    } else {
        Err(format!("{detail}{}", rec.partial.iter().map(|p| format!("; partial {p}")).collect::<String>()))
    }
}

fn determinism_suite() -> Outcome {
    let configs = [
        "experiment = universality\nq = 4, 6, 3\nn = 200, 1000\nsamples = 200\ncontinuum_samples = 300\nm = 256\nseed = 9\n",
        "experiment = two_point\nq = 4\nn = 1000\nsamples = 300\ncontinuum_samples = 100\nm = 256\nseed = 9\n",
        "experiment = ball_volume\nq = 4\nn = 2000\nsamples = 10\nseed = 9\n",
        "experiment = geodesic_stats\nq = 4\nn = 1000, 3000\nsamples = 10\nseed = 9\n",
        "experiment = dmgb_sweep\nq = 4\nn = 1000\nsamples = 5\nseed = 9\npairs = 2000\n",
    ];
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut files = 0;
    for (i, text) in configs.iter().enumerate() {
        let config: ExperimentConfig = text.parse().map_err(|e: randmaps::Error| e.to_string())?;
        let mut outputs = Vec::new();
        for run in 0..2 {
            let rec = run_experiment(&config).map_err(|e| e.to_string())?;
            let out = dir.path().join(format!("{i}_{run}"));
            let paths = emit_report(&[rec], &out).map_err(|e| e.to_string())?;
            let bytes: Vec<(String, Vec<u8>)> = paths
                .iter()
                .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), std::fs::read(p).unwrap()))
                .collect();
            outputs.push(bytes);
        }
        if outputs[0] != outputs[1] {
            return Err(format!("{} reports differ between runs", config.experiment.name()));
        }
        files += outputs[0].len();
    }
    Ok(format!("5 experiments run twice, {files} report files byte-identical"))
}

fn main() {
    let criteria: Vec<Criterion> = vec![
        ("exact bijection suite", Box::new(bijection_suite)),
        ("exact geodesic-boundary suite", Box::new(dmgb_suite)),
        ("exact triangulation suite", Box::new(triangulation_suite)),
        ("constants", Box::new(constants_suite)),
        ("sampler uniformity", Box::new(uniformity_suite)),
        ("continuum identities", Box::new(continuum_suite)),
        ("universality", Box::new(|| summarize(&run_config("universality")?))),
        ("two-point law", Box::new(|| summarize(&run_config("two_point")?))),
        ("ball-volume exponent", Box::new(|| summarize(&run_config("ball_volume")?))),
        ("determinism", Box::new(determinism_suite)),
    ];
    // `cargo test -- <filter>` runs only criteria whose number or name matches
    let filter: Vec<String> = std::env::args().skip(1).filter(|a| !a.starts_with('-')).collect();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let number = (i + 1).to_string();
        if !filter.is_empty() && !filter.iter().any(|f| *f == number || name.contains(f.as_str())) {
            continue;
        }
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {number:>2} PASS {name} ({secs:.1} s): {detail}"),
            Err(detail) => {
                failed += 1;
                println!("criterion {number:>2} FAIL {name} ({secs:.1} s): {detail}");
            }
        }
    }
    if failed > 0 {
        std::process::exit(1);
    }
}
