use std::collections::{BTreeMap, HashMap};

use super::bvh::Bvh;
use super::{Vec3, SELF_INTERSECTION_EPS};
use crate::error::{Error, Result};

/// Twice-area below which a triangle is rejected as degenerate (m^2).
const DEGENERATE_AREA: f64 = 1e-12;

/// Hits whose distances differ by less than this are treated as ties and
/// resolved by the lowest triangle id.
const TIE_EPS: f64 = 1e-9;

/// Barycentric slack so that rays through a shared edge hit at least one of
/// the two triangles.
const BARY_EPS: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Aabb {
    pub min: Vec3,
    pub max: Vec3,
}

impl Aabb {
    pub fn empty() -> Self {
        Aabb {
            min: Vec3::repeat(f64::INFINITY),
            max: Vec3::repeat(f64::NEG_INFINITY),
        }
    }

    pub fn new(min: Vec3, max: Vec3) -> Self {
        Aabb { min, max }
    }

    pub fn from_points<'a>(points: impl IntoIterator<Item = &'a Vec3>) -> Self {
        let mut bounds = Aabb::empty();
        for p in points {
            bounds.grow(p);
        }
        bounds
    }

    pub fn grow(&mut self, p: &Vec3) {
        self.min = self.min.inf(p);
        self.max = self.max.sup(p);
    }

    pub fn union(&self, other: &Aabb) -> Aabb {
        Aabb {
            min: self.min.inf(&other.min),
            max: self.max.sup(&other.max),
        }
    }

    pub fn expanded(&self, margin: f64) -> Aabb {
        Aabb {
            min: self.min.add_scalar(-margin),
            max: self.max.add_scalar(margin),
        }
    }

    pub fn size(&self) -> Vec3 {
        self.max - self.min
    }

    pub fn center(&self) -> Vec3 {
        (self.min + self.max) * 0.5
    }

    pub fn contains(&self, p: &Vec3) -> bool {
        (0..3).all(|i| p[i] >= self.min[i] && p[i] <= self.max[i])
    }

    pub fn clamp(&self, p: &Vec3) -> Vec3 {
        p.sup(&self.min).inf(&self.max)
    }

    /// Entry distance of the ray into the box, if it enters within `max_dist`.
    pub(crate) fn ray_entry(&self, origin: &Vec3, inv_dir: &Vec3, max_dist: f64) -> Option<f64> {
        let mut t0 = 0.0_f64;
        let mut t1 = max_dist;
        for i in 0..3 {
            let mut near = (self.min[i] - origin[i]) * inv_dir[i];
            let mut far = (self.max[i] - origin[i]) * inv_dir[i];
            if near > far {
                std::mem::swap(&mut near, &mut far);
            }
            // NaN from 0 * inf means the ray lies in the slab plane: keep bounds.
            if !near.is_nan() {
                t0 = t0.max(near);
            }
            if !far.is_nan() {
                t1 = t1.min(far);
            }
            if t0 > t1 {
                return None;
            }
        }
        Some(t0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayHit {
    pub triangle: usize,
    pub point: Vec3,
    pub distance: f64,
    pub normal: Vec3,
}

/// A validated triangle mesh with per-triangle unit normals and a BVH.
///
/// Normals follow the counter-clockwise winding of each triangle and are
/// expected to point away from solid material (into the air).
#[derive(Debug, Clone)]
pub struct TriangleMesh {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Vec3>,
    /// Vertex id after merging bit-identical positions; used for adjacency.
    welded: Vec<usize>,
    bvh: Bvh,
}

impl TriangleMesh {
    pub fn new(vertices: Vec<Vec3>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let out_of_range: Vec<usize> = triangles
            .iter()
            .enumerate()
            .filter(|(_, t)| t.iter().any(|&i| i >= vertices.len()))
            .map(|(i, _)| i)
            .collect();
        if !out_of_range.is_empty() {
            return Err(Error::IndexOutOfRange(out_of_range));
        }

        let mut normals = Vec::with_capacity(triangles.len());
        let mut degenerate = Vec::new();
        for (i, t) in triangles.iter().enumerate() {
            let [a, b, c] = t.map(|k| vertices[k]);
            let n = (b - a).cross(&(c - a));
            let len = n.norm();
            if len < DEGENERATE_AREA || t[0] == t[1] || t[1] == t[2] || t[0] == t[2] {
                degenerate.push(i);
                normals.push(Vec3::zeros());
            } else {
                normals.push(n / len);
            }
        }
        if !degenerate.is_empty() {
            return Err(Error::DegenerateTriangles(degenerate));
        }

        let mut first_seen: HashMap<[u64; 3], usize> = HashMap::new();
        let welded = vertices
            .iter()
            .enumerate()
            .map(|(i, v)| {
                *first_seen
                    .entry([v.x, v.y, v.z].map(f64::to_bits))
                    .or_insert(i)
            })
            .collect();

        let bvh = Bvh::build(&vertices, &triangles);
        Ok(TriangleMesh {
            vertices,
            triangles,
            normals,
            welded,
            bvh,
        })
    }

    pub fn vertices(&self) -> &[Vec3] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn normal(&self, triangle: usize) -> Vec3 {
        self.normals[triangle]
    }

    pub fn triangle_points(&self, triangle: usize) -> [Vec3; 3] {
        self.triangles[triangle].map(|i| self.vertices[i])
    }

    pub fn bounds(&self) -> Aabb {
        Aabb::from_points(&self.vertices)
    }

    /// Undirected edges keyed by (lower, higher) welded vertex id, with the
    /// triangles that use each edge in ascending order.
    pub fn edges(&self) -> BTreeMap<(usize, usize), Vec<usize>> {
        let mut edges: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (ti, t) in self.triangles.iter().enumerate() {
            for k in 0..3 {
                let a = self.welded[t[k]];
                let b = self.welded[t[(k + 1) % 3]];
                edges.entry((a.min(b), a.max(b))).or_default().push(ti);
            }
        }
        edges
    }

    /// Nearest hit with distance in `(SELF_INTERSECTION_EPS, max_dist]`.
    pub fn intersect(&self, origin: &Vec3, direction: &Vec3, max_dist: f64) -> Option<RayHit> {
        let mut candidates = Vec::new();
        self.bvh
            .traverse(origin, direction, max_dist + TIE_EPS, |tri, best| {
                let t = self.hit_distance(tri, origin, direction, max_dist)?;
                if t <= best + TIE_EPS {
                    candidates.push((t, tri));
                }
                Some(t)
            });
        self.resolve(candidates, origin, direction)
    }

    /// Same contract as [`TriangleMesh::intersect`], testing every triangle.
    pub fn intersect_exhaustive(
        &self,
        origin: &Vec3,
        direction: &Vec3,
        max_dist: f64,
    ) -> Option<RayHit> {
        let candidates = (0..self.triangles.len())
            .filter_map(|tri| Some((self.hit_distance(tri, origin, direction, max_dist)?, tri)))
            .collect();
        self.resolve(candidates, origin, direction)
    }

    /// True if something blocks the open segment between `a` and `b`.
    pub fn occluded(&self, a: &Vec3, b: &Vec3) -> bool {
        let delta = b - a;
        let len = delta.norm();
        if len <= 2.0 * SELF_INTERSECTION_EPS {
            return false;
        }
        self.intersect(a, &(delta / len), len - SELF_INTERSECTION_EPS)
            .is_some()
    }

    fn resolve(
        &self,
        candidates: Vec<(f64, usize)>,
        origin: &Vec3,
        direction: &Vec3,
    ) -> Option<RayHit> {
        let nearest = candidates.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        let (distance, triangle) = candidates
            .into_iter()
            .filter(|c| c.0 <= nearest + TIE_EPS)
            .min_by_key(|c| c.1)?;
        Some(RayHit {
            triangle,
            point: origin + direction * distance,
            distance,
            normal: self.normals[triangle],
        })
    }

    /// Two-sided Moller-Trumbore test.
    fn hit_distance(
        &self,
        tri: usize,
        origin: &Vec3,
        direction: &Vec3,
        max_dist: f64,
    ) -> Option<f64> {
        let [a, b, c] = self.triangle_points(tri);
        let e1 = b - a;
        let e2 = c - a;
        let p = direction.cross(&e2);
        let det = e1.dot(&p);
        if det.abs() < 1e-15 {
            return None;
        }
        let inv = 1.0 / det;
        let s = origin - a;
        let u = s.dot(&p) * inv;
        if !(-BARY_EPS..=1.0 + BARY_EPS).contains(&u) {
            return None;
        }
        let q = s.cross(&e1);
        let v = direction.dot(&q) * inv;
        if v < -BARY_EPS || u + v > 1.0 + BARY_EPS {
            return None;
        }
        let t = e2.dot(&q) * inv;
        (t > SELF_INTERSECTION_EPS && t <= max_dist).then_some(t)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn wall_x2() -> TriangleMesh {
        TriangleMesh::new(
            vec![
                Vec3::new(2.0, -1.0, -1.0),
                Vec3::new(2.0, 1.0, -1.0),
                Vec3::new(2.0, 1.0, 1.0),
                Vec3::new(2.0, -1.0, 1.0),
            ],
            vec![[0, 1, 2], [0, 2, 3]],
        )
        .unwrap()
    }

    #[test]
    fn ray_into_wall() {
        let mesh = wall_x2();
        let hit = mesh
            .intersect(&Vec3::zeros(), &Vec3::x(), 10.0)
            .expect("hit");
        assert!((hit.distance - 2.0).abs() < 1e-12);
        assert!((hit.point - Vec3::new(2.0, 0.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn ray_away_misses() {
        let mesh = wall_x2();
        assert!(mesh.intersect(&Vec3::zeros(), &-Vec3::x(), 10.0).is_none());
        assert!(mesh.intersect(&Vec3::zeros(), &Vec3::x(), 1.5).is_none());
    }

    #[test]
    fn shared_edge_hit_goes_to_lowest_id() {
        // The diagonal from (2,-1,-1) to (2,1,1) is shared by both triangles.
        let mesh = wall_x2();
        let origin = Vec3::new(0.0, 0.25, 0.25);
        let hit = mesh.intersect(&origin, &Vec3::x(), 10.0).unwrap();
        let brute = mesh
            .intersect_exhaustive(&origin, &Vec3::x(), 10.0)
            .unwrap();
        assert_eq!(hit.triangle, 0);
        assert_eq!(brute.triangle, 0);
        assert_eq!(hit.distance, brute.distance);
    }

    #[test]
    fn degenerate_triangle_rejected() {
        let err = TriangleMesh::new(
            vec![Vec3::zeros(), Vec3::x(), Vec3::x() * 2.0, Vec3::y()],
            vec![[0, 1, 3], [0, 1, 2]],
        )
        .unwrap_err();
        assert!(matches!(err, Error::DegenerateTriangles(ref ids) if ids == &vec![1]));
    }

    #[test]
    fn out_of_range_index_rejected() {
        let err = TriangleMesh::new(vec![Vec3::zeros(), Vec3::x()], vec![[0, 1, 2]]).unwrap_err();
        assert!(matches!(err, Error::IndexOutOfRange(_)));
    }

    #[test]
    fn occlusion_is_strict() {
        let mesh = wall_x2();
        assert!(mesh.occluded(&Vec3::zeros(), &Vec3::new(3.0, 0.0, 0.0)));
        assert!(!mesh.occluded(&Vec3::zeros(), &Vec3::new(1.9, 0.0, 0.0)));
        // Segment ending on the wall is not occluded.
        assert!(!mesh.occluded(&Vec3::zeros(), &Vec3::new(2.0, 0.0, 0.0)));
    }
}
