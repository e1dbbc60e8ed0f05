use std::f64::consts::PI;

use crate::geometry::{angle_between, closest_approach, Vec3, Wedge};

use super::RaySegment;

/// Inset of generated diffraction rays from the shadow sector boundaries.
pub const SHADOW_MARGIN: f64 = PI / 180.0;

const AZIMUTH_TOL: f64 = 1e-9;

/// Specular reflection of `incident` about a surface with unit `normal`.
pub fn reflect(incident: &Vec3, normal: &Vec3) -> Vec3 {
    (incident - normal * (2.0 * incident.dot(normal))).normalize()
}

/// Cosine of the angle between a segment's direction and the ray from its
/// origin to the closest edge point `m_d`. Returns `(v_d, m_d)`.
pub fn diffractability(segment: &RaySegment, wedge: &Wedge) -> (f64, Vec3) {
    let approach = closest_approach(
        &segment.origin,
        &segment.direction,
        &wedge.start,
        &wedge.end,
    );
    let ideal = approach.edge_point - segment.origin;
    let dist = ideal.norm();
    if dist < 1e-12 {
        return (1.0, approach.edge_point);
    }
    (segment.direction.dot(&ideal) / dist, approach.edge_point)
}

/// A unit direction on the diffraction cone around the wedge edge: azimuth
/// around `ez` from `ex`, and `cone_angle` measured from `-ez`.
pub fn cone_direction(wedge: &Wedge, azimuth: f64, cone_angle: f64) -> Vec3 {
    let (sin_c, cos_c) = cone_angle.sin_cos();
    let local = Vec3::new(azimuth.cos() * sin_c, azimuth.sin() * sin_c, -cos_c);
    wedge.to_world(&local)
}

/// Azimuth interval `[lo, hi]` around a wedge edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShadowSector {
    pub lo: f64,
    pub hi: f64,
}

impl ShadowSector {
    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    pub fn contains(&self, azimuth: f64) -> bool {
        azimuth >= self.lo - AZIMUTH_TOL && azimuth <= self.hi + AZIMUTH_TOL
    }
}

/// Sector of air azimuths that a ray travelling along `incident` past the
/// edge cannot reach in a straight line: from its straight continuation to
/// the occluding face. `None` when the ray comes from behind the solid or both
/// faces are lit.
pub fn shadow_sector(wedge: &Wedge, incident: &Vec3) -> Option<ShadowSector> {
    let onward = wedge.azimuth(incident)?;
    let from = (onward + PI).rem_euclid(2.0 * PI);
    if !wedge.in_air(from) {
        return None;
    }
    let half = wedge.angle / 2.0;
    let sector = if from < PI {
        ShadowSector {
            lo: from + PI,
            hi: 2.0 * PI - half,
        }
    } else {
        ShadowSector {
            lo: half,
            hi: from - PI,
        }
    };
    (sector.width() > AZIMUTH_TOL).then_some(sector)
}

/// True when `candidate` points into the shadow sector of a ray travelling
/// along `incident`. The straight continuation counts as shadow.
pub fn shadow_region_test(wedge: &Wedge, incident: &Vec3, candidate: &Vec3) -> bool {
    let Some(azimuth) = wedge.azimuth(candidate) else {
        return false;
    };
    shadow_sector(wedge, incident).is_some_and(|s| s.contains(azimuth))
}

/// `n_d` backward diffraction directions for a ray travelling along
/// `incident` past the wedge edge.
///
/// The directions keep the incident ray's angle to the edge axis and are
/// spread evenly over the shadow sector, inset by [`SHADOW_MARGIN`] from its
/// boundaries.
pub fn diffraction_directions(wedge: &Wedge, incident: &Vec3, n_d: usize) -> Vec<Vec3> {
    if n_d == 0 {
        return Vec::new();
    }
    let Some(sector) = shadow_sector(wedge, incident) else {
        return Vec::new();
    };
    let edge_angle = angle_between(incident, &wedge.ez);
    if edge_angle < 1e-9 || PI - edge_angle < 1e-9 {
        return Vec::new();
    }
    let margin = if sector.width() > 4.0 * SHADOW_MARGIN {
        SHADOW_MARGIN
    } else {
        0.0
    };
    let start = sector.lo + margin;
    let offset = (sector.width() - 2.0 * margin) / (n_d + 1) as f64;
    (1..=n_d)
        .map(|p| cone_direction(wedge, start + p as f64 * offset, PI - edge_angle))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::extract_wedges;
    use crate::raytrace::SegmentKind;
    use crate::scene;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn right_wedge() -> Wedge {
        // Solid quadrant x < 0, y < 0 around the z axis. Face 0 runs along
        // -y (azimuth 45 deg), face 1 along -x (azimuth 315 deg).
        Wedge {
            start: Vec3::zeros(),
            end: Vec3::z(),
            faces: [0, 1],
            angle: PI / 2.0,
            ex: Vec3::new(-1.0, -1.0, 0.0).normalize(),
            ey: Vec3::z().cross(&Vec3::new(-1.0, -1.0, 0.0).normalize()),
            ez: Vec3::z(),
        }
    }

    fn segment(origin: Vec3, direction: Vec3) -> RaySegment {
        RaySegment {
            origin,
            direction: direction.normalize(),
            length: 10.0,
            order: 0,
            kind: SegmentKind::Direct,
        }
    }

    #[test]
    fn reflect_examples() {
        let up = reflect(&Vec3::new(0.0, 0.0, -1.0), &Vec3::z());
        assert!((up - Vec3::z()).norm() < 1e-15);
        let d = Vec3::new(1.0, 0.0, -1.0).normalize();
        let r = reflect(&d, &Vec3::z());
        assert!((r - Vec3::new(FRAC_1_SQRT_2, 0.0, FRAC_1_SQRT_2)).norm() < 1e-15);
    }

    #[test]
    fn cone_direction_local_frame() {
        let w = right_wedge();
        // azimuth 45 deg, cone angle 90 deg.
        let d = cone_direction(&w, PI / 4.0, PI / 2.0);
        let local = w.to_local(&d);
        assert!((local - Vec3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn cone_identity() {
        let w = right_wedge();
        for &(az, c) in &[(0.3, 0.4), (2.0, 1.2), (4.0, 2.9)] {
            let d = cone_direction(&w, az, c);
            assert!((d.norm() - 1.0).abs() < 1e-12);
            assert!((d.dot(&w.ez) + c.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn diffractability_through_edge_is_one() {
        let w = right_wedge();
        let s = segment(Vec3::new(2.0, 1.0, 0.5), Vec3::new(-2.0, -1.0, 0.1));
        let (v, m) = diffractability(&s, &w);
        assert!((v - 1.0).abs() < 1e-12);
        assert!(m.x.abs() < 1e-12 && m.y.abs() < 1e-12);
    }

    #[test]
    fn diffractability_perpendicular_is_zero() {
        let w = right_wedge();
        // Ray from (1, 0, 0.5) heading +y: the edge point closest to the ray
        // is straight across at (0, 0, 0.5), perpendicular to the ray.
        let s = segment(Vec3::new(1.0, 0.0, 0.5), Vec3::y());
        let (v, _) = diffractability(&s, &w);
        assert!(v.abs() < 1e-12);
    }

    #[test]
    fn diffractability_origin_on_edge() {
        let w = right_wedge();
        let s = segment(Vec3::new(0.0, 0.0, 0.3), Vec3::x());
        assert_eq!(diffractability(&s, &w).0, 1.0);
    }

    #[test]
    fn diffractability_near_miss_matches_scan() {
        // A ray from 2 m away passing 5 cm beside the middle of a 1 m edge.
        let w = right_wedge();
        let origin = Vec3::new(2.0, -0.3, 0.2);
        let aim = Vec3::new(0.05 * FRAC_1_SQRT_2, 0.05 * FRAC_1_SQRT_2, 0.6);
        let s = segment(origin, aim - origin);
        let (v_d, m_d) = diffractability(&s, &w);

        // Nested scan of edge and ray parameters for the closest pair.
        let (mut best, mut best_t) = (f64::INFINITY, 0.0);
        for i in 0..=2000 {
            let t = i as f64 / 2000.0;
            let e = w.point_at(t);
            let along = (e - origin).dot(&s.direction).max(0.0);
            let gap = (origin + s.direction * along - e).norm();
            if gap < best {
                best = gap;
                best_t = t;
            }
        }
        let (mut lo, mut hi) = ((best_t - 1e-3).max(0.0), (best_t + 1e-3).min(1.0));
        for _ in 0..200 {
            let gap = |t: f64| {
                let e = w.point_at(t);
                let along = (e - origin).dot(&s.direction).max(0.0);
                (origin + s.direction * along - e).norm()
            };
            let (a, b) = (lo + (hi - lo) / 3.0, hi - (hi - lo) / 3.0);
            if gap(a) < gap(b) {
                hi = b;
            } else {
                lo = a;
            }
        }
        let edge_point = w.point_at(0.5 * (lo + hi));
        let ideal = (edge_point - origin).normalize();
        assert!((m_d - edge_point).norm() < 1e-6);
        assert!((v_d - s.direction.dot(&ideal)).abs() < 1e-6);
        assert!(v_d < 1.0 && v_d > 0.99);
    }

    #[test]
    fn shadow_examples_right_wedge() {
        let w = right_wedge();
        // Air spans azimuths [45, 315] deg around the edge.
        // Ray grazing the y = 0 face towards +x, then a candidate on the lit
        // (y > 0) side of that face.
        let along_face = Vec3::x();
        let same_side = Vec3::new(1.0, 0.5, 0.0).normalize();
        assert!(!shadow_region_test(&w, &along_face, &same_side));
        // Straight continuation is on the shadow boundary.
        let incident = Vec3::new(1.0, -0.5, 0.0).normalize();
        assert!(shadow_region_test(&w, &incident, &incident));
        // Candidate wrapping behind the -y face relative to the incident.
        let behind = Vec3::new(0.2, -1.0, 0.0).normalize();
        assert!(shadow_region_test(&w, &incident, &behind));
        // Candidate back towards where the ray came from is lit.
        assert!(!shadow_region_test(&w, &incident, &-incident));
        // Along the edge: no azimuth.
        assert!(!shadow_region_test(&w, &incident, &Vec3::z()));
    }

    #[test]
    fn directions_uniform_inside_shadow() {
        let w = right_wedge();
        let incident = Vec3::new(1.0, -0.5, 0.3).normalize();
        let dirs = diffraction_directions(&w, &incident, 5);
        assert_eq!(dirs.len(), 5);
        let sector = shadow_sector(&w, &incident).unwrap();
        let azimuths: Vec<f64> = dirs.iter().map(|d| w.azimuth(d).unwrap()).collect();
        for (d, az) in dirs.iter().zip(&azimuths) {
            assert!(shadow_region_test(&w, &incident, d));
            assert!(*az > sector.lo && *az < sector.hi);
            assert!((angle_between(d, &w.ez) - angle_between(&incident, &w.ez)).abs() < 1e-9);
        }
        let gaps: Vec<f64> = azimuths.windows(2).map(|p| p[1] - p[0]).collect();
        for g in &gaps {
            assert!((g - gaps[0]).abs() < 1e-12 && *g > 0.0);
        }
        assert!(diffraction_directions(&w, &incident, 0).is_empty());
    }

    #[test]
    fn cube_wedges_give_shadow_fans() {
        let cube = scene::unit_cube();
        let wedges = extract_wedges(&cube, 170f64.to_radians()).unwrap();
        let incident = Vec3::new(-1.0, 0.3, -0.2).normalize();
        let mut fans = 0;
        for w in &wedges {
            for d in diffraction_directions(w, &incident, 5) {
                assert!(shadow_region_test(w, &incident, &d));
                fans += 1;
            }
        }
        assert!(fans > 0);
    }
}
