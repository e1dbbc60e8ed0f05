//! Traces a single direction of arrival backwards through the desk room and
//! prints the resulting ray-path tree.
//!
//! The default direction points from the listener at the hidden side of the
//! block, so the primary ray grazes an edge and fans out into diffraction
//! rays.
//!
//! cargo run --example trace_observation [dx dy dz]

use diffloc::geometry::{extract_wedges, Vec3};
use diffloc::raytrace::{trace_observation, Observation, SegmentKind, TraceConfig};
use diffloc::scene;

fn main() -> diffloc::Result<()> {
    let args: Vec<f64> = std::env::args()
        .skip(1)
        .filter_map(|s| s.parse().ok())
        .collect();
    let listener = Vec3::from(scene::DESK_LISTENER);
    let direction = match args.as_slice() {
        [x, y, z] => Vec3::new(*x, *y, *z),
        // Just over the top edge of the block's near face.
        _ => Vec3::new(3.0, 3.5, 2.03) - listener,
    };
    let mesh = scene::desk_room();
    let config = TraceConfig::default();
    let wedges = extract_wedges(&mesh, config.wedge_threshold())?;
    let obs = Observation::new(0, 0.0, listener, direction);
    let tree = trace_observation(0, &obs, &mesh, &wedges, &config);

    for (id, node) in tree.nodes.iter().enumerate() {
        let s = &node.segment;
        let indent = "  ".repeat(s.order);
        println!(
            "{indent}#{id} {:<11} from ({:.2}, {:.2}, {:.2}) len {:.2}{}",
            s.kind.as_str(),
            s.origin.x,
            s.origin.y,
            s.origin.z,
            s.length,
            node.diffracting_wedge.map_or(String::new(), |w| format!(
                "  -> {} rays off wedge {w}",
                node.diffraction.len()
            ))
        );
    }
    println!(
        "{} segments: {} direct, {} reflection, {} diffraction",
        tree.nodes.len(),
        tree.count(SegmentKind::Direct),
        tree.count(SegmentKind::Reflection),
        tree.count(SegmentKind::Diffraction)
    );
    Ok(())
}
