//! Visible static source with noiseless observations, repeated over seeds:
//! how often the filter reports an estimate within 10 cm in 20 frames.
//!
//! cargo run --release --example localize_los [seeds]

use std::path::Path;

use diffloc::experiment::{run_frames, synthesize, RunConfig, Scene};

fn main() -> diffloc::Result<()> {
    let seeds: u64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(50);
    let mut config = RunConfig::load(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/assets/los_static.toml"
    )))?;
    let scene = Scene::load(&config)?;
    let mut hits = 0;
    for seed in 0..seeds {
        config.seed = seed;
        let frames = synthesize(&config, &scene)?;
        let report = run_frames(&config, &scene, &frames[..20.min(frames.len())])?;
        let first = report
            .rows
            .iter()
            .find(|r| r.error.is_some_and(|e| e < 0.1));
        let last = report.rows.last().and_then(|r| r.error);
        match first {
            Some(r) => {
                hits += 1;
                println!(
                    "seed {seed:>3}: within 10 cm at frame {:>2}, final error {:.3} m",
                    r.frame,
                    last.unwrap_or(f64::NAN)
                );
            }
            None => println!("seed {seed:>3}: not within 10 cm, final error {:?}", last),
        }
    }
    println!("{hits}/{seeds} seeds localized within 10 cm in 20 frames");
    Ok(())
}
