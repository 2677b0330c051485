//! Cutting a map along the simple geodesic from its root, and gluing it
//! back.
//!
//! `cargo run --release --example geodesic_boundaries`

use rand::Rng;
use randmaps::dmgb::{build_dmgb, check_inequality_chain, glue_boundary, verify_dmgb_properties, Sources};
use randmaps::maps::isomorphic;
use randmaps::rng::from_seed;
use randmaps::trees::sample_labeled_ptree;

fn main() -> randmaps::Result<()> {
    let mut rng = from_seed(5);
    let theta = sample_labeled_ptree(2, 5_000, &mut rng)?;
    let d = build_dmgb(&theta, 1)?;
    println!(
        "cut map: V = {}, E = {}, boundary length 2δ = {}",
        d.map.vertex_count(),
        d.map.edge_count(),
        d.boundary_degree()
    );
    println!("γ  = {:?}", d.gamma);
    println!("γ̃ = {:?}", d.gamma_tilde);

    let report = verify_dmgb_properties(&d, &Sources::Only(vec![0, 17, 400]));
    println!("boundary properties: {} violations over {} pairs", report.violations.len(), report.pairs_checked);

    let pn = d.bdg.pn();
    let pairs: Vec<(usize, usize)> = (0..1000).map(|_| (rng.gen_range(0..pn), rng.gen_range(0..pn))).collect();
    println!("d ≤ d̃ ≤ d° violations on 1000 corner pairs: {}", check_inequality_chain(&d, &pairs).len());

    let glued = glue_boundary(&d)?;
    println!("gluing restores the original map: {}", isomorphic(&glued, &d.bdg.map));
    Ok(())
}
