//! Accuracy and cost as the number of diffraction rays per event grows,
//! averaged over several seeds of the hidden static source.
//!
//! cargo run --release --example nd_sweep [seeds]

use std::path::Path;

use diffloc::experiment::{sweep_nd, RunConfig};

fn main() -> diffloc::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let mut config = RunConfig::load(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/assets/nlos_static.toml"
    )))?;
    let nd = [0, 1, 2, 3, 5, 8];
    let mut error = vec![0.0; nd.len()];
    let mut ms = vec![0.0; nd.len()];
    let mut rays = vec![0.0; nd.len()];
    for seed in 0..seeds {
        config.seed = seed;
        for (i, row) in sweep_nd(&config, &nd)?.iter().enumerate() {
            error[i] += row.mean_nlos_error_m.unwrap_or(f64::NAN) / seeds as f64;
            ms[i] += row.mean_frame_ms / seeds as f64;
            rays[i] += row.mean_diffraction_rays / seeds as f64;
        }
    }
    println!("n_d  error m  diffraction rays  frame ms");
    for i in 0..nd.len() {
        println!(
            "{:>3}  {:7.3}  {:16.1}  {:8.2}",
            nd[i], error[i], rays[i], ms[i]
        );
    }
    Ok(())
}
