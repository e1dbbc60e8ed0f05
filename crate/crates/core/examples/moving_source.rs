//! Source walking a loop around the block. Prints the error over time for
//! both modes, marking the frames where the block hides the source.
//!
//! cargo run --release --example moving_source [seed]

use std::path::Path;

use diffloc::experiment::{run_frames, synthesize, Mode, RunConfig, Scene};

fn main() -> diffloc::Result<()> {
    let mut config = RunConfig::load(Path::new(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/assets/moving.toml"
    )))?;
    if let Some(seed) = std::env::args().nth(1).and_then(|s| s.parse().ok()) {
        config.seed = seed;
    }
    let scene = Scene::load(&config)?;
    let frames = synthesize(&config, &scene)?;
    let mut reports = Vec::new();
    for mode in [Mode::Full, Mode::NoDiffraction] {
        config.mode = mode;
        reports.push(run_frames(&config, &scene, &frames)?);
    }
    let show = |e: Option<f64>| e.map_or("     -".to_string(), |e| format!("{e:6.2}"));
    println!("  time  nlos    full  no-diff");
    for (a, b) in reports[0].rows.iter().zip(&reports[1].rows).step_by(10) {
        println!(
            "{:6.1}  {:>4}  {}  {}",
            a.time,
            if a.nlos { "yes" } else { "" },
            show(a.error),
            show(b.error)
        );
    }
    for r in &reports {
        println!(
            "{:<15} mean {} m, over hidden frames {} m",
            r.mode.as_str(),
            show(r.summary.mean_error),
            show(r.summary.mean_nlos_error)
        );
    }
    Ok(())
}
