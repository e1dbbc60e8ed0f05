//! Forward propagation paths from a source to a listener.

use crate::geometry::{TriangleMesh, Vec3, Wedge};
use crate::raytrace::SegmentKind;

/// What happens at an interior vertex of a forward path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathEvent {
    Reflection { triangle: usize },
    Diffraction { wedge: usize },
}

/// A polyline from source to listener.
#[derive(Debug, Clone, PartialEq)]
pub struct ForwardPath {
    /// Source first, listener last.
    pub points: Vec<Vec3>,
    /// One event per interior point.
    pub events: Vec<PathEvent>,
    pub length: f64,
}

impl ForwardPath {
    fn new(points: Vec<Vec3>, events: Vec<PathEvent>) -> Self {
        let length = points.windows(2).map(|w| (w[1] - w[0]).norm()).sum();
        ForwardPath {
            points,
            events,
            length,
        }
    }

    /// Kind of each leg: the first leg is direct, later legs take the kind
    /// of the event they start from.
    pub fn leg_kinds(&self) -> Vec<SegmentKind> {
        std::iter::once(SegmentKind::Direct)
            .chain(self.events.iter().map(|e| match e {
                PathEvent::Reflection { .. } => SegmentKind::Reflection,
                PathEvent::Diffraction { .. } => SegmentKind::Diffraction,
            }))
            .collect()
    }

    pub fn has_diffraction(&self) -> bool {
        self.events
            .iter()
            .any(|e| matches!(e, PathEvent::Diffraction { .. }))
    }

    pub fn reflection_count(&self) -> usize {
        self.events
            .iter()
            .filter(|e| matches!(e, PathEvent::Reflection { .. }))
            .count()
    }

    /// Direction of arrival at the listener: from the listener back along
    /// the final leg.
    pub fn arrival_direction(&self) -> Vec3 {
        let n = self.points.len();
        (self.points[n - 2] - self.points[n - 1]).normalize()
    }

    fn same_points(&self, other: &ForwardPath) -> bool {
        self.points.len() == other.points.len()
            && self
                .points
                .iter()
                .zip(&other.points)
                .all(|(a, b)| (a - b).norm() < 1e-9)
    }
}

/// Straight path if nothing blocks the segment between source and listener.
pub fn direct_path(source: &Vec3, listener: &Vec3, mesh: &TriangleMesh) -> Option<ForwardPath> {
    (!mesh.occluded(source, listener))
        .then(|| ForwardPath::new(vec![*source, *listener], Vec::new()))
}

#[derive(Debug, Clone, Copy)]
struct Plane {
    normal: Vec3,
    point: Vec3,
}

impl Plane {
    fn of(mesh: &TriangleMesh, triangle: usize) -> Self {
        Plane {
            normal: mesh.normal(triangle),
            point: mesh.triangle_points(triangle)[0],
        }
    }

    fn signed_distance(&self, p: &Vec3) -> f64 {
        (p - self.point).dot(&self.normal)
    }

    fn mirror(&self, p: &Vec3) -> Vec3 {
        p - self.normal * (2.0 * self.signed_distance(p))
    }

    fn coincides(&self, other: &Plane) -> bool {
        self.normal.dot(&other.normal) > 1.0 - 1e-12
            && other.signed_distance(&self.point).abs() < 1e-9
    }

    /// Point where the segment `from -> to` crosses the plane, strictly
    /// between the endpoints.
    fn crossing(&self, from: &Vec3, to: &Vec3) -> Option<Vec3> {
        let a = self.signed_distance(from);
        let b = self.signed_distance(to);
        if a * b >= 0.0 {
            return None;
        }
        let u = a / (a - b);
        Some(from + (to - from) * u)
    }
}

fn inside_triangle(p: &Vec3, [a, b, c]: [Vec3; 3]) -> bool {
    const TOL: f64 = 1e-9;
    let n = (b - a).cross(&(c - a));
    let area2 = n.norm_squared();
    let w_a = (c - b).cross(&(p - b)).dot(&n) / area2;
    let w_b = (a - c).cross(&(p - c)).dot(&n) / area2;
    let w_c = 1.0 - w_a - w_b;
    w_a >= -TOL && w_b >= -TOL && w_c >= -TOL
}

/// All specular paths with up to `max_order` bounces, including the direct
/// path, found by mirroring the source across triangle planes.
///
/// Triangle normals must face the air: a mirror is only taken across a plane
/// whose front side holds the previous image.
pub fn image_source_paths(
    source: &Vec3,
    listener: &Vec3,
    mesh: &TriangleMesh,
    max_order: usize,
) -> Vec<ForwardPath> {
    let mut paths: Vec<ForwardPath> = direct_path(source, listener, mesh).into_iter().collect();
    let planes: Vec<Plane> = (0..mesh.len()).map(|t| Plane::of(mesh, t)).collect();
    let mut sequence = Vec::with_capacity(max_order);
    let mut images = vec![*source];
    extend_images(
        mesh,
        &planes,
        listener,
        max_order,
        &mut sequence,
        &mut images,
        &mut paths,
    );
    paths
}

fn extend_images(
    mesh: &TriangleMesh,
    planes: &[Plane],
    listener: &Vec3,
    max_order: usize,
    sequence: &mut Vec<usize>,
    images: &mut Vec<Vec3>,
    paths: &mut Vec<ForwardPath>,
) {
    if sequence.len() == max_order {
        return;
    }
    let previous = *images.last().expect("source is always present");
    for (t, plane) in planes.iter().enumerate() {
        if let Some(&last) = sequence.last() {
            if planes[last].coincides(plane) {
                continue;
            }
        }
        if plane.signed_distance(&previous) <= 1e-9 {
            continue;
        }
        sequence.push(t);
        images.push(plane.mirror(&previous));
        if let Some(path) = validate_image_chain(mesh, planes, listener, sequence, images) {
            if !paths.iter().any(|p| p.same_points(&path)) {
                paths.push(path);
            }
        }
        extend_images(mesh, planes, listener, max_order, sequence, images, paths);
        sequence.pop();
        images.pop();
    }
}

/// Unfolds an image chain back from the listener, checking every bounce
/// lands inside its triangle and every leg is clear.
fn validate_image_chain(
    mesh: &TriangleMesh,
    planes: &[Plane],
    listener: &Vec3,
    sequence: &[usize],
    images: &[Vec3],
) -> Option<ForwardPath> {
    let mut points = vec![*listener];
    let mut current = *listener;
    for (k, &t) in sequence.iter().enumerate().rev() {
        let image = images[k + 1];
        let bounce = planes[t].crossing(&current, &image)?;
        if !inside_triangle(&bounce, mesh.triangle_points(t)) || mesh.occluded(&current, &bounce) {
            return None;
        }
        points.push(bounce);
        current = bounce;
    }
    if mesh.occluded(&current, &images[0]) {
        return None;
    }
    points.push(images[0]);
    points.reverse();
    let events = sequence
        .iter()
        .map(|&triangle| PathEvent::Reflection { triangle })
        .collect();
    Some(ForwardPath::new(points, events))
}

/// Minimizes `|source - e| + |e - listener|` over edge points `e`.
/// Returns the edge parameter in `[0, 1]`.
///
/// The path length is convex along the edge, so the minimizer is the root of
/// its derivative, found by bisection. Bracketing on the derivative resolves
/// the point to a few ulps, where comparing path lengths stalls near
/// `sqrt(eps)`.
pub fn fermat_point(source: &Vec3, listener: &Vec3, wedge: &Wedge) -> f64 {
    let axis = wedge.end - wedge.start;
    let pull = |from: &Vec3, e: &Vec3| {
        let d = e - from;
        let n = d.norm();
        if n > 0.0 {
            d.dot(&axis) / n
        } else {
            0.0
        }
    };
    let slope = |t: f64| {
        let e = wedge.point_at(t);
        pull(source, &e) + pull(listener, &e)
    };
    if slope(0.0) >= 0.0 {
        return 0.0;
    }
    if slope(1.0) <= 0.0 {
        return 1.0;
    }
    let (mut lo, mut hi) = (0.0_f64, 1.0_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if slope(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// True when the listener sits in the wedge's shadow as seen from the
/// source: both are in open air and the straight line between them passes
/// the edge on the solid's side.
pub fn in_shadow_of(wedge: &Wedge, source: &Vec3, listener: &Vec3) -> bool {
    match (
        wedge.azimuth_of_point(source),
        wedge.azimuth_of_point(listener),
    ) {
        (Some(s), Some(l)) => {
            wedge.in_air(s) && wedge.in_air(l) && (s - l).abs() >= std::f64::consts::PI
        }
        _ => false,
    }
}

/// Edge parameters clamped to an endpoint describe a path bent around a
/// corner, which has no diffraction cone; those are dropped.
fn interior(t: f64) -> Option<f64> {
    (t > 1e-9 && t < 1.0 - 1e-9).then_some(t)
}

/// First-order edge-diffraction paths through the shortest edge point.
pub fn diffraction_paths(
    source: &Vec3,
    listener: &Vec3,
    wedges: &[Wedge],
    mesh: &TriangleMesh,
) -> Vec<ForwardPath> {
    wedges
        .iter()
        .enumerate()
        .filter(|(_, w)| in_shadow_of(w, source, listener))
        .filter_map(|(i, w)| {
            let edge_point = w.point_at(interior(fermat_point(source, listener, w))?);
            if mesh.occluded(source, &edge_point) || mesh.occluded(&edge_point, listener) {
                return None;
            }
            Some(ForwardPath::new(
                vec![*source, edge_point, *listener],
                vec![PathEvent::Diffraction { wedge: i }],
            ))
        })
        .collect()
}

/// Paths that reflect once and then diffract: source, bounce, edge point,
/// listener. Found by diffracting from the source image of each plane.
pub fn reflected_diffraction_paths(
    source: &Vec3,
    listener: &Vec3,
    wedges: &[Wedge],
    mesh: &TriangleMesh,
) -> Vec<ForwardPath> {
    let mut paths: Vec<ForwardPath> = Vec::new();
    for t in 0..mesh.len() {
        let plane = Plane::of(mesh, t);
        if plane.signed_distance(source) <= 1e-9 {
            continue;
        }
        let image = plane.mirror(source);
        for (i, w) in wedges.iter().enumerate() {
            if w.faces.contains(&t) || !in_shadow_of(w, &image, listener) {
                continue;
            }
            let Some(along) = interior(fermat_point(&image, listener, w)) else {
                continue;
            };
            let edge_point = w.point_at(along);
            let Some(bounce) = plane.crossing(&image, &edge_point) else {
                continue;
            };
            if !inside_triangle(&bounce, mesh.triangle_points(t))
                || mesh.occluded(source, &bounce)
                || mesh.occluded(&bounce, &edge_point)
                || mesh.occluded(&edge_point, listener)
            {
                continue;
            }
            let path = ForwardPath::new(
                vec![*source, bounce, edge_point, *listener],
                vec![
                    PathEvent::Reflection { triangle: t },
                    PathEvent::Diffraction { wedge: i },
                ],
            );
            if !paths.iter().any(|p| p.same_points(&path)) {
                paths.push(path);
            }
        }
    }
    paths
}
