//! A small universality run end to end: configuration, ensemble, checks
//! and report files.
//!
//! `cargo run --release --example experiment`

use randmaps::experiments::{emit_report, run_experiment, ExperimentConfig};

fn main() -> randmaps::Result<()> {
    let config: ExperimentConfig = "experiment = universality
q = 4, 6, 3
n = 200, 1000, 3000
samples = 300
continuum_samples = 1000
m = 512
seed = 42
"
    .parse()?;
    let rec = run_experiment(&config)?;
    for c in &rec.checks {
        println!("{} {} = {:.4}", if c.passed { "pass" } else { "FAIL" }, c.name, c.value);
    }
    let dir = std::env::temp_dir().join("randmaps-example");
    for path in emit_report(std::slice::from_ref(&rec), &dir)? {
        println!("wrote {}", path.display());
    }
    Ok(())
}
