//! Scene geometry: triangle meshes, diffracting wedges and ray queries.

mod bvh;
mod closest;
mod mesh;
mod obj;
mod wedge;

pub use bvh::Bvh;
pub use closest::{closest_approach, ClosestApproach};
pub use mesh::{Aabb, RayHit, TriangleMesh};
pub use obj::{load_mesh, parse_obj, write_obj};
pub use wedge::{extract_wedges, write_wedges_csv, Wedge, DEFAULT_WEDGE_THRESHOLD_DEG};

/// Points and directions, in meters or unitless for directions.
pub type Vec3 = nalgebra::Vector3<f64>;

/// Minimum hit distance accepted by ray queries, so a ray leaving a surface
/// does not immediately hit that same surface again.
pub const SELF_INTERSECTION_EPS: f64 = 1e-4;

/// Angle between two vectors in `[0, pi]`, robust near 0 and pi.
pub fn angle_between(a: &Vec3, b: &Vec3) -> f64 {
    a.cross(b).norm().atan2(a.dot(b))
}
