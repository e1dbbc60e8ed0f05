//! Forward oracle: every path from the hidden source to the listener in the
//! desk room, then one noisy frame written in the observation CSV format.
//!
//! cargo run --example synth_observations [noise_deg]

use diffloc::geometry::{extract_wedges, Vec3, DEFAULT_WEDGE_THRESHOLD_DEG};
use diffloc::scene;
use diffloc::synth::{emit_frames, forward_paths, write_observations, Scenario};

fn main() -> diffloc::Result<()> {
    let noise_deg: f64 = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(3.0);
    let mesh = scene::desk_room();
    let wedges = extract_wedges(&mesh, DEFAULT_WEDGE_THRESHOLD_DEG.to_radians())?;
    let listener = Vec3::from(scene::DESK_LISTENER);
    let source = Vec3::from(scene::DESK_NLOS_SOURCE);

    let paths = forward_paths(&source, &listener, &mesh, &wedges, 2, true);
    println!("{} paths, none direct:", paths.len());
    for p in &paths {
        let kinds: Vec<&str> = p.leg_kinds().iter().map(|k| k.as_str()).collect();
        println!("  {:6.3} m  {}", p.length, kinds.join(" > "));
    }

    let mut scenario = Scenario::stationary(listener, source, 1.0);
    scenario.max_reflection_order = 2;
    scenario.noise = noise_deg.to_radians();
    scenario.seed = 7;
    let frames = emit_frames(&scenario, &mesh, &wedges)?;
    println!();
    write_observations(&frames[0].observations, std::io::stdout().lock())
}
