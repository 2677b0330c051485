use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use super::planar::PlanarMap;

/// Canonical code of a rooted pointed map.
///
/// Half-edges are numbered in breadth-first order from the root, exploring
/// `σ(h)` then `α(h)`; the code lists, in that order, the numbers of `σ(h)`
/// and `α(h)` and whether `h` sits at the pointed vertex. Two rooted pointed
/// maps are isomorphic iff their codes are equal.
pub fn canonical_code(map: &PlanarMap) -> Vec<u32> {
    let h = map.half_edge_count();
    let mut num = vec![u32::MAX; h];
    let mut order = Vec::with_capacity(h);
    num[map.root() as usize] = 0;
    order.push(map.root());
    let mut i = 0;
    while i < order.len() {
        let x = order[i];
        i += 1;
        for y in [map.sigma(x), map.alpha(x)] {
            if num[y as usize] == u32::MAX {
                num[y as usize] = order.len() as u32;
                order.push(y);
            }
        }
    }
    let mut code = Vec::with_capacity(3 * h + 1);
    code.push(h as u32);
    for &x in &order {
        code.push(num[map.sigma(x) as usize]);
        code.push(num[map.alpha(x) as usize]);
        code.push(u32::from(map.vertex_of(x) == map.pointed()));
    }
    code
}

/// 128-bit digest of the canonical code. Equal maps always collide; a
/// collision between different maps is astronomically unlikely and can only
/// produce a false alarm in injectivity checks.
pub fn canonical_hash(map: &PlanarMap) -> u128 {
    let code = canonical_code(map);
    let mut a = DefaultHasher::new();
    0xa5u8.hash(&mut a);
    code.hash(&mut a);
    let mut b = DefaultHasher::new();
    0x5au8.hash(&mut b);
    code.hash(&mut b);
    ((a.finish() as u128) << 64) | b.finish() as u128
}

/// Isomorphism of rooted pointed maps.
pub fn isomorphic(a: &PlanarMap, b: &PlanarMap) -> bool {
    a.half_edge_count() == b.half_edge_count() && canonical_code(a) == canonical_code(b)
}
