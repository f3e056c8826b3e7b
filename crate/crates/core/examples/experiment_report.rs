//! Run a seeded sweep from a TOML config and print the aggregated report.
//!
//! ```bash
//! cargo run --release --example experiment_report -- crates/core/examples/configs/noise_sweep.toml
//! ```

use tangles::eval::{run_experiment, ExperimentConfig};

fn main() -> tangles::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/examples/configs/noise_sweep.toml").into());
    let cfg = ExperimentConfig::from_toml(&std::fs::read_to_string(&path)?)?;
    let report = run_experiment(&cfg)?;
    println!("{:>8} {:>6} {:>8} {:>8} {:>8}", "x", "a", "nmi", "std", "tangles");
    for p in &report.points {
        println!(
            "{:>8} {:>6} {:>8.4} {:>8.4} {:>8}",
            p.x, p.agreement, p.mean_nmi, p.std_nmi, p.modal_tangle_count
        );
    }
    Ok(())
}
