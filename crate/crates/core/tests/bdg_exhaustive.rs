use std::collections::HashSet;

use randmaps::maps::{
    bdg_forward, bfs_distances, canonical_hash, simple_geodesic, verify_distance_formula, CactusOracle,
};
use randmaps::trees::{for_each_labeled_ptree, DEFAULT_ENUMERATION_CAP};

fn check_all(p: usize, n: usize) -> usize {
    let mut codes = HashSet::new();
    let mut count = 0;
    for_each_labeled_ptree(p, n, DEFAULT_ENUMERATION_CAP, |theta| {
        for eps in [0u8, 1] {
            let b = bdg_forward(theta, eps).unwrap();
            let m = &b.map;
            assert_eq!(m.vertex_count(), (p - 1) * n + 2);
            assert_eq!(m.edge_count(), p * n);
            let degrees = m.face_degrees();
            assert_eq!(degrees, vec![2 * p; n], "p={p} n={n} labels={:?}", theta.labels());
            assert_eq!(m.euler_characteristic(), 2);
            assert!(verify_distance_formula(&b).is_empty());
            assert!(codes.insert(canonical_hash(m)), "duplicate map");
            count += 1;
        }
        let b = bdg_forward(theta, 1).unwrap();
        let pn = b.pn();
        let oracle = CactusOracle::new(&b.coding.lambda);
        for i in 0..pn {
            let d = bfs_distances(&b.map, b.corner_vertex(i));
            for j in i + 1..=pn {
                assert!(oracle.bound(i, j) >= d.get(b.corner_vertex(j)) as i64);
            }
            let g = simple_geodesic(&b, i);
            assert_eq!(g.len() as u32, d.get(b.map.pointed()));
            assert!(g.vertices.windows(2).all(|w| b.map.are_adjacent(w[0], w[1])));
        }
    })
    .unwrap();
    assert_eq!(codes.len(), count);
    count
}

#[test]
fn bijection_small_p2() {
    for n in 1..=4 {
        check_all(2, n);
    }
}

#[test]
fn bijection_small_p3() {
    for n in 1..=3 {
        check_all(3, n);
    }
}

mod dmgb {
    use randmaps::dmgb::{
        build_dmgb, check_inequality_chain, dmgb_simple_geodesic, glue_boundary, verify_dmgb_properties, Sources,
    };
    use randmaps::maps::{bfs_distances, isomorphic};
    use randmaps::trees::{for_each_labeled_ptree, DEFAULT_ENUMERATION_CAP};

    #[test]
    fn exhaustive_small() {
        for (p, nmax) in [(2, 4), (3, 3)] {
            for n in 1..=nmax {
                for_each_labeled_ptree(p, n, DEFAULT_ENUMERATION_CAP, |theta| {
                    let d = build_dmgb(theta, 1).unwrap();
                    let rep = verify_dmgb_properties(&d, &Sources::All);
                    assert!(rep.is_clean(), "{:?} {:?}", rep.violations, theta.labels());
                    let mut degs = d.map.face_degrees();
                    if d.delta >= 2 {
                        let pos = degs.iter().position(|&x| x == 2 * d.delta).expect("boundary face");
                        degs.remove(pos);
                    }
                    assert_eq!(degs, vec![2 * p; n]);
                    assert_eq!(d.map.euler_characteristic(), 2);
                    assert!(isomorphic(&glue_boundary(&d).unwrap(), &d.bdg.map));
                    let pn = p * n;
                    let pairs: Vec<_> = (0..pn).flat_map(|i| (0..pn).map(move |j| (i, j))).collect();
                    assert!(check_inequality_chain(&d, &pairs).is_empty());
                    let to_p = bfs_distances(&d.map, d.pointed());
                    for i in 0..pn {
                        let g = dmgb_simple_geodesic(&d, i);
                        assert_eq!(g.len() as u32, to_p.get(g.vertices[0]));
                        assert!(g.vertices.windows(2).all(|w| d.map.are_adjacent(w[0], w[1])));
                    }
                })
                .unwrap();
            }
        }
    }
}
