//! Triangulations from four-type labeled trees, and the constants of their
//! distance scaling.
//!
//! `cargo run --release --example triangulations`

use randmaps::rng::from_seed;
use randmaps::tri::{
    root_class, sample_admissible_tlabels, sample_uniform_ttree, ttree_to_triangulation, verify_tri_constants,
    verify_tri_distance_formula, RootType,
};

fn main() -> randmaps::Result<()> {
    let mut rng = from_seed(3);
    for root in [RootType::One, RootType::Two] {
        let shape = sample_uniform_ttree(10_000, root, &mut rng)?;
        let counts = shape.type_counts();
        let t = ttree_to_triangulation(&sample_admissible_tlabels(shape, &mut rng))?;
        println!(
            "{root:?}: type counts {counts:?}, V = {}, F = {}, root class {:?}, label mismatches {}",
            t.map.vertex_count(),
            t.map.face_count(),
            root_class(&t.map),
            verify_tri_distance_formula(&t).len()
        );
    }
    let c = verify_tri_constants();
    println!("spectral radius {:.15}", c.spectral_radius);
    println!("κ = {:.15}, c_3 = {:.15}", c.kappa, c.c_3);
    for b in &c.bipartite {
        println!("q = {}: c_q = {:.15}", 2 * b.p, b.c_q);
    }
    Ok(())
}
