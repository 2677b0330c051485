//! Uniform 2p-angulations through the labeled-tree bijection: labels are
//! distances to the pointed vertex, and simple geodesics follow successors.
//!
//! `cargo run --release --example quadrangulations`

use randmaps::maps::{bdg_forward, bfs_distances, simple_geodesic, verify_distance_formula, write_edge_list};
use randmaps::rng::from_seed;
use randmaps::trees::sample_labeled_ptree;

fn main() -> randmaps::Result<()> {
    let mut rng = from_seed(11);
    let theta = sample_labeled_ptree(2, 20_000, &mut rng)?;
    let b = bdg_forward(&theta, 1)?;
    let m = &b.map;
    m.check_planar()?;
    println!("quadrangulation: V = {}, E = {}, F = {}", m.vertex_count(), m.edge_count(), m.face_count());

    let bad = verify_distance_formula(&b);
    println!("label/distance mismatches: {}", bad.len());

    let d = bfs_distances(m, m.pointed());
    let radius = (0..m.vertex_count() as u32).map(|v| d.get(v)).max().unwrap_or(0);
    let mut profile = vec![0usize; radius as usize + 1];
    for v in 0..m.vertex_count() as u32 {
        profile[d.get(v) as usize] += 1;
    }
    println!("vertices by distance from the pointed vertex: {profile:?}");

    let g = simple_geodesic(&b, 0);
    println!("simple geodesic from the root corner: {} steps, geodesic: {}", g.len() - 1, g.is_geodesic(m));

    let mut text = Vec::new();
    write_edge_list(m, 2, theta.n(), &mut text).expect("in-memory write");
    println!("edge list: {} bytes", text.len());
    Ok(())
}
