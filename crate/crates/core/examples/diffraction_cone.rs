//! Diffraction directions around one cube edge for a few incident rays:
//! every generated ray keeps the incident angle to the edge and points into
//! the shadow behind the lit face.
//!
//! cargo run --example diffraction_cone [n_d]

use diffloc::geometry::{angle_between, extract_wedges, Vec3, DEFAULT_WEDGE_THRESHOLD_DEG};
use diffloc::raytrace::{diffraction_directions, shadow_region_test, shadow_sector};
use diffloc::scene;

fn main() -> diffloc::Result<()> {
    let n_d: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(5);
    let wedges = extract_wedges(
        &scene::unit_cube(),
        DEFAULT_WEDGE_THRESHOLD_DEG.to_radians(),
    )?;
    // The vertical edge at x = y = 1.
    let wedge = wedges
        .iter()
        .find(|w| {
            w.ez.z.abs() > 0.99 && (w.start.xy() - Vec3::new(1.0, 1.0, 0.0).xy()).norm() < 1e-9
        })
        .expect("cube edge");
    println!(
        "edge {:?} -> {:?}, dihedral {:.1} deg",
        wedge.start,
        wedge.end,
        wedge.angle.to_degrees()
    );

    for incident in [
        Vec3::new(-2.0, 1.0, 0.0),
        Vec3::new(-2.0, 1.0, -0.8),
        Vec3::new(-1.0, 3.0, 0.5),
        Vec3::new(1.0, -1.0, 0.0),
    ] {
        let incident = incident.normalize();
        let theta_d = angle_between(&incident, &wedge.ez).to_degrees();
        print!(
            "incident {:>+.2?}, edge angle {theta_d:.1} deg: ",
            incident.as_slice()
        );
        match shadow_sector(wedge, &incident) {
            None => {
                println!("no shadow sector");
                continue;
            }
            Some(s) => println!(
                "shadow {:.1}..{:.1} deg",
                s.lo.to_degrees(),
                s.hi.to_degrees()
            ),
        }
        for d in diffraction_directions(wedge, &incident, n_d) {
            println!(
                "    {:>+.3?}  azimuth {:6.1}  edge angle {:.6}  in shadow {}",
                d.as_slice(),
                wedge.azimuth(&d).unwrap_or(f64::NAN).to_degrees(),
                angle_between(&d, &wedge.ez).to_degrees(),
                shadow_region_test(wedge, &incident, &d)
            );
        }
    }
    Ok(())
}
