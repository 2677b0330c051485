use std::collections::HashSet;

use proptest::prelude::*;
use rand::Rng;
use randmaps::maps::canonical_hash;
use randmaps::rng::from_seed;
use randmaps::tri::*;

fn check_instance(t: &Triangulation, all_sources: bool, rng: &mut impl Rng) {
    let n = t.tree.n();
    let m = &t.map;
    m.check_planar().unwrap();
    assert_eq!(m.vertex_count(), n);
    assert_eq!(m.face_count(), 2 * (n - 2));
    assert_eq!(m.edge_count(), 3 * (n - 2));
    assert!(m.face_degrees().iter().all(|&d| d == 3));
    assert_eq!(m.euler_characteristic(), 2);
    let want = match t.root_type() {
        RootType::One => RootClass::Positive,
        RootType::Two => RootClass::Null,
    };
    assert_eq!(root_class(m), want);
    assert!(verify_tri_distance_formula(t).is_empty());
    let k = t.corners.len();
    let sources: Vec<usize> =
        if all_sources { (0..k).collect() } else { (0..20).map(|_| rng.gen_range(0..k)).collect() };
    assert!(verify_tri_cactus(t, &sources).is_empty());
}

#[test]
fn every_small_tree_gives_a_distinct_triangulation() {
    let mut rng = from_seed(1);
    for n in 3..=6 {
        let mut seen = HashSet::new();
        let mut total = 0;
        for root in [RootType::One, RootType::Two] {
            for theta in enumerate_labeled_ttrees(n, root, 1 << 20).unwrap() {
                let t = ttree_to_triangulation(&theta).unwrap();
                check_instance(&t, true, &mut rng);
                seen.insert(canonical_hash(&t.map));
                total += 1;
            }
        }
        assert_eq!(seen.len(), total, "n = {n}");
    }
}

#[test]
fn random_triangulations_up_to_ten_thousand() {
    let mut rng = from_seed(2);
    for (n, reps) in [(10, 40), (100, 20), (1000, 5), (10_000, 2)] {
        for root in [RootType::One, RootType::Two] {
            for _ in 0..reps {
                let shape = sample_uniform_ttree(n, root, &mut rng).unwrap();
                let theta = sample_admissible_tlabels(shape, &mut rng);
                let t = ttree_to_triangulation(&theta).unwrap();
                check_instance(&t, false, &mut rng);
            }
        }
    }
}

#[test]
fn increment_marginals_have_variance_one_quarter() {
    let mut rng = from_seed(3);
    // [kind][value + 1]: kind 0 steps into type 2, kind 1 into type 1
    let mut hist = [[0u64; 3]; 2];
    while hist.iter().flatten().sum::<u64>() < 100_000 {
        let c = sample_conditioned_ttree(200, RootType::One, &mut rng, TSamplerOptions::default()).unwrap();
        let theta = sample_admissible_tlabels(c.shape, &mut rng);
        let tree = theta.tree();
        for v in 1..tree.len() {
            let mid = tree.parent(v).unwrap();
            let kind = match (theta.ttype(v), theta.ttype(mid)) {
                (TType::Two, TType::Three) => 0,
                (TType::One, TType::Four) => 1,
                _ => continue,
            };
            let d = theta.label(v) - theta.label(tree.parent(mid).unwrap());
            hist[kind][(d + 1) as usize] += 1;
        }
    }
    for (kind, h) in hist.iter().enumerate() {
        let total = h.iter().sum::<u64>() as f64;
        let xs = [-1.0, 0.0, 1.0];
        let mean: f64 = (0..3).map(|i| xs[i] * h[i] as f64).sum::<f64>() / total;
        let var: f64 = (0..3).map(|i| (xs[i] - mean).powi(2) * h[i] as f64).sum::<f64>() / total;
        assert!((var - 0.25).abs() < 0.01, "kind {kind}: variance {var}");
        let support = if kind == 0 { [1, 2] } else { [0, 1] };
        assert_eq!(h[support[0]] + h[support[1]], total as u64);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]
    #[test]
    fn extended_distance_is_a_metric(seed in any::<u64>(), n in 3usize..60, null in any::<bool>()) {
        let mut rng = from_seed(seed);
        let root = if null { RootType::Two } else { RootType::One };
        let c = sample_conditioned_ttree(n, root, &mut rng, TSamplerOptions::default()).unwrap();
        let t = ttree_to_triangulation(&sample_admissible_tlabels(c.shape, &mut rng)).unwrap();
        let h = HalfDistance::new(&t);
        let plain = randmaps::maps::bfs_distances(&t.map, 0);
        for v in 0..h.map_vertex_count() {
            prop_assert_eq!(h.doubled(0, v), 2 * plain.get(v as u32));
        }
        for _ in 0..400 {
            let (a, b, c) = (rng.gen_range(0..h.len()), rng.gen_range(0..h.len()), rng.gen_range(0..h.len()));
            prop_assert_eq!(h.doubled(a, b), h.doubled(b, a));
            prop_assert!(h.doubled(a, c) <= h.doubled(a, b) + h.doubled(b, c));
            prop_assert_eq!(h.doubled(a, a), 0);
        }
    }
}

fn shape_chi_square(n: usize, root: RootType, draws: usize, exact: bool, seed: u64) -> f64 {
    use statrs::distribution::{ChiSquared, ContinuousCDF};
    use std::collections::HashMap;
    let shapes = ttree_shapes(n, root);
    let weights: Vec<f64> = shapes.iter().map(|s| 2f64.powi(s.label_degrees_of_freedom() as i32)).collect();
    let total: f64 = weights.iter().sum();
    let index: HashMap<_, _> = shapes.iter().enumerate().map(|(i, s)| (s.word(), i)).collect();
    let mut counts = vec![0u64; shapes.len()];
    let mut rng = from_seed(seed);
    for _ in 0..draws {
        let s = if exact {
            sample_uniform_ttree_exact(n, root, &mut rng).unwrap()
        } else {
            sample_conditioned_ttree(n, root, &mut rng, TSamplerOptions::default()).unwrap().shape
        };
        counts[index[&s.word()]] += 1;
    }
    let stat: f64 = counts
        .iter()
        .zip(&weights)
        .map(|(&c, w)| {
            let e = draws as f64 * w / total;
            (c as f64 - e).powi(2) / e
        })
        .sum();
    1.0 - ChiSquared::new((shapes.len() - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn both_samplers_weight_shapes_by_labelings() {
    for (n, root) in [(5, RootType::One), (6, RootType::One), (5, RootType::Two), (6, RootType::Two)] {
        for exact in [false, true] {
            let p = shape_chi_square(n, root, 20_000, exact, 40 + n as u64);
            assert!(p > 0.001, "n = {n}, {root:?}, exact = {exact}: p = {p}");
        }
    }
}

/// Acceptance per draw of the conditioned sampler against n: exact size
/// conditioning decays like the local size probability, n^{-3/2}; a window
/// of width n accepts a mass that decays like n^{-1/2}.
fn acceptance_slope(sizes: &[usize], window: impl Fn(usize) -> usize, accepted: u64, seed: u64) -> f64 {
    let mut rng = from_seed(seed);
    let rates: Vec<f64> = sizes
        .iter()
        .map(|&n| {
            let opts = TSamplerOptions { max_attempts: u64::MAX, window: window(n) };
            let tries: u64 = (0..accepted)
                .map(|_| sample_conditioned_ttree(n, RootType::One, &mut rng, opts).unwrap().attempts)
                .sum();
            accepted as f64 / tries as f64
        })
        .collect();
    let x: Vec<f64> = sizes.iter().map(|&n| (n as f64).ln()).collect();
    let y: Vec<f64> = rates.iter().map(|r| r.ln()).collect();
    randmaps::experiments::fit_line(&x, &y).slope
}

#[test]
fn acceptance_rate_scaling() {
    let exact = acceptance_slope(&[50, 200, 800], |_| 0, 300, 21);
    assert!((exact + 1.5).abs() < 0.15, "exact-size slope {exact}");
    let windowed = acceptance_slope(&[100, 1000, 10_000], |n| n, 400, 22);
    assert!((windowed + 0.5).abs() < 0.15, "windowed slope {windowed}");
}
