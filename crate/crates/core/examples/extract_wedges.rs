//! Loads an OBJ mesh and lists its diffracting edges.
//!
//! cargo run --example extract_wedges [mesh.obj] [threshold_deg]

use std::path::PathBuf;

use diffloc::geometry::{extract_wedges, load_mesh, write_wedges_csv, DEFAULT_WEDGE_THRESHOLD_DEG};

fn main() -> diffloc::Result<()> {
    let mut args = std::env::args().skip(1);
    let path = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/assets/desk_room.obj"))
    });
    let threshold: f64 = args
        .next()
        .and_then(|s| s.parse().ok())
        .unwrap_or(DEFAULT_WEDGE_THRESHOLD_DEG);
    let mesh = load_mesh(&path)?;
    let wedges = extract_wedges(&mesh, threshold.to_radians())?;
    eprintln!(
        "{}: {} triangles, {} wedges below {threshold} deg",
        path.display(),
        mesh.len(),
        wedges.len()
    );
    write_wedges_csv(&wedges, std::io::stdout().lock())
}
