use crate::geometry::Vec3;
use crate::raytrace::{RayPathTree, RaySegment};

/// Gaussian weight of a particle's perpendicular distance to a segment, zero
/// when the perpendicular foot falls outside the segment.
pub fn distance_weight(particle: &Vec3, segment: &RaySegment, sigma_d: f64) -> f64 {
    let rel = particle - segment.origin;
    let along = rel.dot(&segment.direction);
    if along < 0.0 || along > segment.length {
        return 0.0;
    }
    let gap_sq = (rel - segment.direction * along).norm_squared();
    (-gap_sq / (2.0 * sigma_d * sigma_d)).exp()
}

/// Sum over trees of the best segment weight within each tree.
pub fn particle_likelihood(particle: &Vec3, trees: &[RayPathTree], sigma_d: f64) -> f64 {
    trees
        .iter()
        .map(|tree| {
            tree.segments()
                .map(|s| distance_weight(particle, s, sigma_d))
                .fold(0.0, f64::max)
        })
        .sum()
}
