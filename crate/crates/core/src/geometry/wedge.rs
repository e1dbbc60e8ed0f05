use std::f64::consts::{PI, TAU};
use std::io::Write;

use super::mesh::TriangleMesh;
use super::{angle_between, Vec3};
use crate::error::{Error, Result};

pub const DEFAULT_WEDGE_THRESHOLD_DEG: f64 = 170.0;

/// A diffracting edge between two triangles.
///
/// The local frame has `ez` along the edge (from `start` to `end`), `ex`
/// bisecting the solid between the two faces and `ey = ez x ex`. Face
/// `faces[0]` lies at azimuth `+angle/2` around `ez`, `faces[1]` at
/// `-angle/2`, so the open air sector spans azimuths
/// `[angle/2, 2*pi - angle/2]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Wedge {
    pub start: Vec3,
    pub end: Vec3,
    pub faces: [usize; 2],
    /// Interior dihedral angle through the solid, radians.
    pub angle: f64,
    pub ex: Vec3,
    pub ey: Vec3,
    pub ez: Vec3,
}

impl Wedge {
    pub fn length(&self) -> f64 {
        (self.end - self.start).norm()
    }

    pub fn point_at(&self, t: f64) -> Vec3 {
        self.start + (self.end - self.start) * t
    }

    pub fn to_world(&self, local: &Vec3) -> Vec3 {
        self.ex * local.x + self.ey * local.y + self.ez * local.z
    }

    pub fn to_local(&self, world: &Vec3) -> Vec3 {
        Vec3::new(
            world.dot(&self.ex),
            world.dot(&self.ey),
            world.dot(&self.ez),
        )
    }

    /// Azimuth of a direction around the edge axis in `[0, 2*pi)`, measured
    /// from `ex` towards `ey`. `None` when the direction is along the edge.
    pub fn azimuth(&self, direction: &Vec3) -> Option<f64> {
        let x = direction.dot(&self.ex);
        let y = direction.dot(&self.ey);
        if x.hypot(y) < 1e-12 * direction.norm().max(1.0) {
            return None;
        }
        Some(y.atan2(x).rem_euclid(TAU))
    }

    /// Azimuth of a point as seen from the edge line.
    pub fn azimuth_of_point(&self, p: &Vec3) -> Option<f64> {
        self.azimuth(&(p - self.start))
    }

    /// Whether an azimuth lies in the open air around the wedge (faces
    /// included).
    pub fn in_air(&self, azimuth: f64) -> bool {
        const SLACK: f64 = 1e-12;
        azimuth >= self.angle / 2.0 - SLACK && azimuth <= TAU - self.angle / 2.0 + SLACK
    }
}

/// Extracts one wedge per interior edge whose dihedral angle through the
/// solid is below `threshold` (radians). Boundary edges are skipped.
pub fn extract_wedges(mesh: &TriangleMesh, threshold: f64) -> Result<Vec<Wedge>> {
    if !(threshold > 0.0 && threshold < PI) {
        return Err(Error::Config(format!(
            "wedge threshold must be in (0, pi), got {threshold}"
        )));
    }
    let mut wedges = Vec::new();
    for ((a, b), tris) in mesh.edges() {
        match tris.len() {
            1 => continue,
            2 => {}
            count => return Err(Error::NonManifoldEdge { a, b, count }),
        }
        let pa = mesh.vertices()[a];
        let pb = mesh.vertices()[b];
        let axis = (pb - pa).normalize();

        // In-plane unit vectors pointing from the edge into each face.
        let inward = |tri: usize| {
            let opposite = mesh.triangles()[tri]
                .iter()
                .map(|&v| mesh.vertices()[v])
                .find(|p| *p != pa && *p != pb)
                .expect("non-degenerate triangle has a third vertex");
            let r = opposite - pa;
            (r - axis * r.dot(&axis)).normalize()
        };
        let (t0, t1) = (tris[0], tris[1]);
        let u0 = inward(t0);
        let u1 = inward(t1);

        let opening = angle_between(&u0, &u1);
        // Face 1 folding behind face 0's outward normal means the solid side
        // is the narrow one.
        let convex = mesh.normal(t0).dot(&u1) < 0.0;
        let angle = if convex { opening } else { TAU - opening };
        if angle >= threshold {
            continue;
        }

        let ex = (u0 + u1).normalize();
        let mut ez = axis;
        let mut ey = ez.cross(&ex);
        let (mut start, mut end) = (pa, pb);
        if u0.dot(&ey) < 0.0 {
            ez = -ez;
            ey = -ey;
            std::mem::swap(&mut start, &mut end);
        }
        wedges.push(Wedge {
            start,
            end,
            faces: [t0, t1],
            angle,
            ex,
            ey,
            ez,
        });
    }
    Ok(wedges)
}

/// Writes wedges as CSV: endpoints, dihedral angle in degrees, adjacent
/// triangle ids.
pub fn write_wedges_csv<W: Write>(wedges: &[Wedge], out: W) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    writer.write_record([
        "x0",
        "y0",
        "z0",
        "x1",
        "y1",
        "z1",
        "angle_deg",
        "face_a",
        "face_b",
    ])?;
    for w in wedges {
        writer.write_record(&[
            w.start.x.to_string(),
            w.start.y.to_string(),
            w.start.z.to_string(),
            w.end.x.to_string(),
            w.end.y.to_string(),
            w.end.z.to_string(),
            w.angle.to_degrees().to_string(),
            w.faces[0].to_string(),
            w.faces[1].to_string(),
        ])?;
    }
    writer.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scene;

    fn deg(d: f64) -> f64 {
        d.to_radians()
    }

    #[test]
    fn cube_has_twelve_right_angle_wedges() {
        let cube = scene::unit_cube();
        let wedges = extract_wedges(&cube, deg(170.0)).unwrap();
        assert_eq!(wedges.len(), 12);
        for w in &wedges {
            assert!((w.angle - PI / 2.0).abs() < 1e-12);
            assert!((w.length() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn coplanar_quad_has_no_wedges() {
        let quad = TriangleMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(1.0, 1.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap();
        for t in [10.0, 90.0, 179.0] {
            assert!(extract_wedges(&quad, deg(t)).unwrap().is_empty());
        }
    }

    #[test]
    fn folded_wall_has_one_right_angle_wedge() {
        // Two quads meeting along the y axis, normals pointing away from the
        // solid quadrant x < 0, z < 0.
        let mesh = TriangleMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(-1.0, 1.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.0),
                Vec3::new(0.0, 0.0, -1.0),
                Vec3::new(0.0, 1.0, -1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3], [0, 4, 5], [0, 5, 1]],
        )
        .unwrap();
        assert_eq!(mesh.normal(0), Vec3::z());
        assert_eq!(mesh.normal(2), Vec3::x());
        let wedges = extract_wedges(&mesh, deg(170.0)).unwrap();
        assert_eq!(wedges.len(), 1);
        let w = &wedges[0];
        assert!((w.angle - PI / 2.0).abs() < 1e-12);
        // ex points into the solid quadrant.
        assert!((w.ex - Vec3::new(-1.0, 0.0, -1.0).normalize()).norm() < 1e-12);
    }

    #[test]
    fn frames_are_orthonormal_and_bisect() {
        let mesh = scene::desk_room();
        let wedges = extract_wedges(&mesh, deg(170.0)).unwrap();
        assert!(!wedges.is_empty());
        for w in &wedges {
            let basis = [w.ex, w.ey, w.ez];
            for i in 0..3 {
                for j in 0..3 {
                    let expect = if i == j { 1.0 } else { 0.0 };
                    assert!((basis[i].dot(&basis[j]) - expect).abs() < 1e-9);
                }
            }
            assert!(w.ex.cross(&w.ey).dot(&w.ez) > 0.0);
            assert!(w.ez.cross(&(w.end - w.start)).norm() < 1e-9);
            // Each face half-plane sits at angle/2 from ex.
            for (k, &face) in w.faces.iter().enumerate() {
                let pts = mesh.triangle_points(face);
                let third = pts.iter().find(|p| **p != w.start && **p != w.end).unwrap();
                let az = w.azimuth_of_point(third).unwrap();
                let expect = if k == 0 {
                    w.angle / 2.0
                } else {
                    TAU - w.angle / 2.0
                };
                assert!((az - expect).abs() < 1e-9, "{az} vs {expect}");
            }
        }
    }

    #[test]
    fn non_manifold_edge_is_rejected() {
        let mesh = TriangleMesh::new(
            vec![
                Vec3::new(0.0, 0.0, 0.0),
                Vec3::new(0.0, 1.0, 0.0),
                Vec3::new(1.0, 0.0, 0.0),
                Vec3::new(-1.0, 0.0, 0.0),
                Vec3::new(0.0, 0.0, 1.0),
            ],
            vec![[0, 1, 2], [1, 0, 3], [0, 1, 4]],
        )
        .unwrap();
        let err = extract_wedges(&mesh, deg(170.0)).unwrap_err();
        assert!(matches!(
            err,
            Error::NonManifoldEdge {
                a: 0,
                b: 1,
                count: 3
            }
        ));
    }

    #[test]
    fn reversed_triangle_order_gives_same_wedges() {
        let mesh = scene::desk_room();
        let reversed = TriangleMesh::new(
            mesh.vertices().to_vec(),
            mesh.triangles().iter().rev().copied().collect(),
        )
        .unwrap();
        let key = |w: &Wedge| {
            let mut ends = [w.start, w.end].map(|p| [p.x, p.y, p.z].map(f64::to_bits));
            ends.sort();
            (ends, w.angle.to_bits())
        };
        let mut a: Vec<_> = extract_wedges(&mesh, deg(170.0))
            .unwrap()
            .iter()
            .map(key)
            .collect();
        let mut b: Vec<_> = extract_wedges(&reversed, deg(170.0))
            .unwrap()
            .iter()
            .map(key)
            .collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_export() {
        let wedges = extract_wedges(&scene::unit_cube(), deg(170.0)).unwrap();
        let mut buf = Vec::new();
        write_wedges_csv(&wedges, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        assert_eq!(text.lines().count(), 13);
        assert!(text.lines().nth(1).unwrap().contains(",90,"));
    }
}
