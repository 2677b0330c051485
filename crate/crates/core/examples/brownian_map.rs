//! The Brownian snake on a grid and the chain distance built from it.
//!
//! `cargo run --release --example brownian_map`

use randmaps::continuum::{check_metric_identities, metric_sample, sample_snake, simple_geodesic_continuum, FastDstar};
use randmaps::rng::from_seed;

fn main() -> randmaps::Result<()> {
    let mut rng = from_seed(2);
    let g = sample_snake(400, &mut rng)?;
    println!("m = {}, Δ = {:.4}, minimum at t = {:.4}", g.m, g.delta, g.t(g.s_star));

    let s = metric_sample(&g);
    println!("identity violations: {}", check_metric_identities(&g, &s).len());
    let (u, v) = (g.m / 5, 3 * g.m / 5);
    println!("D°(u, v) = {:.4}, D*(u, v) = {:.4}", s.dcirc(u, v), s.dstar(u, v));

    // Dijkstra over corners gives the same chain distance at any m
    let big = sample_snake(1 << 16, &mut rng)?;
    let fast = FastDstar::new(&big);
    let k = big.m / 3;
    println!("m = {}: D*(k, s*) = {:.6}, Z_k + Δ = {:.6}", big.m, fast.between(k, big.s_star), big.z[k] + big.delta);
    println!("simple geodesic from k: {} grid points", simple_geodesic_continuum(&big, k).len());
    Ok(())
}
