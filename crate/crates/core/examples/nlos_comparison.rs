//! Static source hidden behind the block: full tracing against the
//! reflection-only baseline on the same synthesized observations.
//!
//! cargo run --release --example nlos_comparison [config.toml]

use std::path::PathBuf;

use diffloc::experiment::{run_frames, synthesize, Mode, RunConfig, Scene};

fn main() -> diffloc::Result<()> {
    let path = std::env::args()
        .nth(1)
        .map(PathBuf::from)
        .unwrap_or_else(|| {
            PathBuf::from(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/assets/nlos_static.toml"
            ))
        });
    let mut config = RunConfig::load(&path)?;
    let scene = Scene::load(&config)?;
    let frames = synthesize(&config, &scene)?;
    println!(
        "{:<16} {:>10} {:>10} {:>12} {:>10}",
        "mode", "estimates", "mean err", "nlos err", "diff rays"
    );
    for mode in [Mode::Full, Mode::NoDiffraction] {
        config.mode = mode;
        let report = run_frames(&config, &scene, &frames)?;
        let s = &report.summary;
        let show = |v: Option<f64>| v.map_or("-".to_string(), |e| format!("{e:.3} m"));
        println!(
            "{:<16} {:>10} {:>10} {:>12} {:>10.1}",
            mode.as_str(),
            format!("{}/{}", s.estimated_frames, s.frames),
            show(s.mean_error),
            show(s.mean_nlos_error),
            s.mean_rays[2]
        );
    }
    Ok(())
}
