//! Labeled p-trees: counting, sampling and the contour coding.
//!
//! `cargo run --release --example labeled_trees`

use randmaps::rng::from_seed;
use randmaps::trees::{
    contour_and_labels, decode_contour, labeled_ptree_count, read_contour, sample_labeled_ptree, write_contour,
};

fn main() -> randmaps::Result<()> {
    for p in 2..=3 {
        let counts: Vec<u128> = (1..=5).map(|n| labeled_ptree_count(p, n)).collect::<Result<_, _>>()?;
        println!("p = {p}: labeled trees with n = 1..5 black vertices: {counts:?}");
    }

    let mut rng = from_seed(7);
    let theta = sample_labeled_ptree(2, 10_000, &mut rng)?;
    let coding = contour_and_labels(&theta);
    let height = coding.c.iter().max().copied().unwrap_or(0);
    println!(
        "uniform 2-tree: {} vertices, {} white, contour height {height}, min label {}",
        theta.tree().len(),
        theta.white_count(),
        theta.min_label()
    );

    // the coding determines the tree, in memory and on disk
    let back = decode_contour(&coding.c, &coding.lambda, 2)?;
    assert_eq!(back, theta);
    let mut bytes = Vec::new();
    write_contour(&coding, &mut bytes).expect("in-memory write");
    assert_eq!(read_contour(&bytes[..])?, theta);
    println!("contour file: {} bytes for {} steps", bytes.len(), coding.len());
    Ok(())
}
