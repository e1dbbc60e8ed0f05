use rayon::prelude::*;

use crate::geometry::{closest_approach, TriangleMesh, Vec3, Wedge, SELF_INTERSECTION_EPS};

use super::diffraction::{diffraction_directions, reflect, shadow_sector};
use super::{Observation, RayNode, RayPathTree, RaySegment, SegmentKind, TraceConfig};

/// Traces one tree per observation. Trees come back in observation order and
/// are identical whether or not the work runs on several threads.
pub fn trace_frame(
    observations: &[Observation],
    mesh: &TriangleMesh,
    wedges: &[Wedge],
    config: &TraceConfig,
) -> Vec<RayPathTree> {
    observations
        .par_iter()
        .enumerate()
        .map(|(i, obs)| trace_observation(i, obs, mesh, wedges, config))
        .collect()
}

/// Builds the tree for a single observation, starting with a primary ray
/// from the listener along the direction of arrival.
pub fn trace_observation(
    id: usize,
    observation: &Observation,
    mesh: &TriangleMesh,
    wedges: &[Wedge],
    config: &TraceConfig,
) -> RayPathTree {
    let mut tree = trace_ray(
        observation.listener,
        observation.direction,
        0,
        SegmentKind::Direct,
        mesh,
        wedges,
        config,
    );
    tree.observation = id;
    tree
}

/// Traces a ray and all of its reflection and diffraction descendants up to
/// `config.max_order`.
pub fn trace_ray(
    origin: Vec3,
    direction: Vec3,
    order: usize,
    kind: SegmentKind,
    mesh: &TriangleMesh,
    wedges: &[Wedge],
    config: &TraceConfig,
) -> RayPathTree {
    let tracer = Tracer {
        mesh,
        wedges,
        config,
    };
    let mut nodes = Vec::new();
    tracer.grow(&mut nodes, None, origin, direction, order, kind, None);
    RayPathTree {
        observation: 0,
        nodes,
    }
}

struct Tracer<'a> {
    mesh: &'a TriangleMesh,
    wedges: &'a [Wedge],
    config: &'a TraceConfig,
}

struct DiffractionEvent {
    wedge: usize,
    v_d: f64,
    edge_point: Vec3,
    ray_param: f64,
}

impl Tracer<'_> {
    #[allow(clippy::too_many_arguments)]
    fn grow(
        &self,
        nodes: &mut Vec<RayNode>,
        parent: Option<usize>,
        origin: Vec3,
        direction: Vec3,
        order: usize,
        kind: SegmentKind,
        from_wedge: Option<usize>,
    ) -> usize {
        let hit = self
            .mesh
            .intersect(&origin, &direction, self.config.max_ray_length);
        let length = hit.map_or(self.config.max_ray_length, |h| h.distance);
        let id = nodes.len();
        nodes.push(RayNode {
            segment: RaySegment {
                origin,
                direction,
                length,
                order,
                kind,
            },
            parent,
            reflection: None,
            diffraction: Vec::new(),
            diffracting_wedge: None,
            edge_distance: None,
            hit_triangle: hit.map(|h| h.triangle),
        });
        if order >= self.config.max_order {
            return id;
        }

        if let Some(hit) = hit {
            let bounced = reflect(&direction, &hit.normal);
            let child = self.grow(
                nodes,
                Some(id),
                hit.point,
                bounced,
                order + 1,
                SegmentKind::Reflection,
                None,
            );
            nodes[id].reflection = Some(child);
        }

        if self.config.n_d > 0 {
            if let Some(event) = self.detect_diffraction(&origin, &direction, length, from_wedge) {
                // The edge point acts as a new source. The parent keeps its
                // full length since the sound may equally have arrived
                // straight along it.
                nodes[id].diffracting_wedge = Some(event.wedge);
                nodes[id].edge_distance = Some(event.ray_param);
                let wedge = &self.wedges[event.wedge];
                for dir in diffraction_directions(wedge, &direction, self.config.n_d) {
                    let child = self.grow(
                        nodes,
                        Some(id),
                        event.edge_point,
                        dir,
                        order + 1,
                        SegmentKind::Diffraction,
                        Some(event.wedge),
                    );
                    nodes[id].diffraction.push(child);
                }
            }
        }
        id
    }

    /// Best wedge with diffractability above the threshold whose closest
    /// approach lies on the segment before its surface hit. Ties go to the
    /// edge point nearest the segment origin.
    fn detect_diffraction(
        &self,
        origin: &Vec3,
        direction: &Vec3,
        reach: f64,
        skip: Option<usize>,
    ) -> Option<DiffractionEvent> {
        let mut best: Option<DiffractionEvent> = None;
        for (i, wedge) in self.wedges.iter().enumerate() {
            if Some(i) == skip {
                continue;
            }
            let approach = closest_approach(origin, direction, &wedge.start, &wedge.end);
            if approach.ray_param <= SELF_INTERSECTION_EPS
                || approach.ray_param > reach + SELF_INTERSECTION_EPS
            {
                continue;
            }
            let to_edge = approach.edge_point - origin;
            let v_d = direction.dot(&to_edge) / to_edge.norm();
            if v_d <= self.config.v_th || shadow_sector(wedge, direction).is_none() {
                continue;
            }
            let better = match &best {
                None => true,
                Some(b) => {
                    v_d > b.v_d || (v_d == b.v_d && to_edge.norm() < (b.edge_point - origin).norm())
                }
            };
            if better {
                best = Some(DiffractionEvent {
                    wedge: i,
                    v_d,
                    edge_point: approach.edge_point,
                    ray_param: approach.ray_param,
                });
            }
        }
        best
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{extract_wedges, Aabb};
    use crate::scene::{self, MeshBuilder};

    fn config(max_order: usize) -> TraceConfig {
        TraceConfig {
            max_order,
            ..TraceConfig::default()
        }
    }

    fn count_kinds(tree: &RayPathTree) -> [usize; 3] {
        [
            tree.count(SegmentKind::Direct),
            tree.count(SegmentKind::Reflection),
            tree.count(SegmentKind::Diffraction),
        ]
    }

    #[test]
    fn open_sky_single_segment() {
        let mesh = MeshBuilder::new().build();
        let obs = Observation::new(0, 0.0, Vec3::zeros(), Vec3::z());
        let trees = trace_frame(&[obs], &mesh, &[], &config(3));
        assert_eq!(trees.len(), 1);
        assert_eq!(trees[0].nodes.len(), 1);
        assert_eq!(trees[0].root().segment.length, 30.0);
        assert_eq!(trees[0].root().segment.direction, Vec3::z());
    }

    #[test]
    fn single_wall_bounce() {
        let mesh = MeshBuilder::new()
            .quad([
                Vec3::new(2.0, -5.0, -5.0),
                Vec3::new(2.0, -5.0, 5.0),
                Vec3::new(2.0, 5.0, 5.0),
                Vec3::new(2.0, 5.0, -5.0),
            ])
            .build();
        // Sound arriving from the wall side.
        let obs = Observation::new(0, 0.0, Vec3::zeros(), Vec3::new(1.0, 0.2, 0.0));
        let tree = trace_observation(0, &obs, &mesh, &[], &config(2));
        assert_eq!(count_kinds(&tree), [1, 1, 0]);
        let child = &tree.nodes[tree.root().reflection.unwrap()].segment;
        assert_eq!(child.order, 1);
        assert!(child.direction.x < 0.0);
    }

    #[test]
    fn grazing_cube_edge_spawns_fan() {
        let cube = MeshBuilder::new()
            .solid_box(Aabb::new(Vec3::zeros(), Vec3::repeat(1.0)), true)
            .build();
        let wedges = extract_wedges(&cube, 170f64.to_radians()).unwrap();
        // Rising ray passing 1 cm above the top edge x = 1, z = 1 at y = 0.5.
        let origin = Vec3::new(3.0, 0.5, 0.5);
        let target = Vec3::new(1.0, 0.5, 1.0 + 0.01);
        let dir = (target - origin).normalize();
        let obs = Observation::new(0, 0.0, origin, dir);
        let tree = trace_observation(0, &obs, &cube, &wedges, &config(1));
        let root = tree.root();
        assert_eq!(root.diffraction.len(), 5);
        let wedge = &wedges[root.diffracting_wedge.unwrap()];
        assert!((wedge.start.z - 1.0).abs() < 1e-12 && (wedge.end.z - 1.0).abs() < 1e-12);
        assert!((wedge.start.x - 1.0).abs() < 1e-12 && (wedge.end.x - 1.0).abs() < 1e-12);
        // The ray clears the cube: no reflection child.
        assert!(root.reflection.is_none());
        assert_eq!(tree.nodes.len(), 6);

        // Aimed just below the edge it hits the side face. The face is lit,
        // so the edge casts no shadow and only the reflection remains.
        let target = Vec3::new(1.0, 0.5, 0.99);
        let dir = (target - origin).normalize();
        let obs = Observation::new(0, 0.0, origin, dir);
        let tree = trace_observation(0, &obs, &cube, &wedges, &config(1));
        assert!(tree.root().diffraction.is_empty());
        assert!(tree.root().reflection.is_some());
        assert_eq!(tree.nodes.len(), 2);
    }

    #[test]
    fn structure_and_cone_invariants_in_desk_room() {
        let mesh = scene::desk_room();
        let wedges = extract_wedges(&mesh, 170f64.to_radians()).unwrap();
        let cfg = TraceConfig::default();
        let listener = Vec3::from(scene::DESK_LISTENER);
        let mut diffracted = 0;
        for k in 0..64 {
            let phi = k as f64 * 0.7;
            let theta = 0.3 + (k as f64 * 0.37) % 2.5;
            let dir = Vec3::new(
                theta.sin() * phi.cos(),
                theta.sin() * phi.sin(),
                theta.cos(),
            );
            let tree = trace_observation(
                k,
                &Observation::new(0, 0.0, listener, dir),
                &mesh,
                &wedges,
                &cfg,
            );
            assert!(tree.depth() <= cfg.max_order);
            assert_eq!(tree.root().segment.kind, SegmentKind::Direct);
            for node in &tree.nodes {
                assert!(node.segment.length > 0.0);
                assert!(node.diffraction.is_empty() || node.diffraction.len() == cfg.n_d);
                let children = node.reflection.iter().chain(&node.diffraction);
                for &c in children {
                    assert_eq!(tree.nodes[c].segment.order, node.segment.order + 1);
                    assert_eq!(
                        tree.nodes[c].parent,
                        Some(tree.nodes.iter().position(|n| n == node).unwrap())
                    );
                }
                if let Some(w) = node.diffracting_wedge {
                    diffracted += 1;
                    let wedge = &wedges[w];
                    let theta_d =
                        crate::geometry::angle_between(&node.segment.direction, &wedge.ez);
                    for &c in &node.diffraction {
                        let d = tree.nodes[c].segment.direction;
                        assert!(
                            (crate::geometry::angle_between(&d, &wedge.ez) - theta_d).abs() < 1e-9
                        );
                        assert!(crate::raytrace::shadow_region_test(
                            wedge,
                            &node.segment.direction,
                            &d
                        ));
                    }
                }
            }
        }
        assert!(diffracted > 0);
    }

    fn vertical_edge(x: f64, y: f64, solid: Vec3) -> Wedge {
        let ez = Vec3::z();
        Wedge {
            start: Vec3::new(x, y, -1.0),
            end: Vec3::new(x, y, 1.0),
            faces: [0, 0],
            angle: std::f64::consts::FRAC_PI_2,
            ex: solid,
            ey: ez.cross(&solid),
            ez,
        }
    }

    #[test]
    fn best_wedge_wins() {
        // Two free-standing edges; the ray passes 2 cm from the first and
        // 10 cm from the second.
        let mesh = MeshBuilder::new().build();
        let wedges = vec![
            vertical_edge(1.0, -0.1, -Vec3::y()),
            vertical_edge(1.0, 0.02, Vec3::y()),
        ];
        let obs = Observation::new(0, 0.0, Vec3::new(-2.0, 0.0, 0.0), Vec3::x());
        let tree = trace_observation(0, &obs, &mesh, &wedges, &config(1));
        let root = tree.root();
        assert_eq!(root.diffracting_wedge, Some(1));
        assert_eq!(root.diffraction.len(), 5);
        assert!((root.edge_distance.unwrap() - 3.0).abs() < 1e-12);
        assert_eq!(root.segment.length, 30.0);
        for &c in &root.diffraction {
            let child = &tree.nodes[c].segment;
            assert!((child.origin - Vec3::new(1.0, 0.02, 0.0)).norm() < 1e-12);
        }
    }

    #[test]
    fn deterministic() {
        let mesh = scene::desk_room();
        let wedges = extract_wedges(&mesh, 170f64.to_radians()).unwrap();
        let obs: Vec<_> = (0..16)
            .map(|k| {
                let a = k as f64 * 0.4;
                Observation::new(
                    0,
                    0.0,
                    Vec3::from(scene::DESK_LISTENER),
                    Vec3::new(a.cos(), a.sin(), 0.1),
                )
            })
            .collect();
        let a = trace_frame(&obs, &mesh, &wedges, &TraceConfig::default());
        let b = trace_frame(&obs, &mesh, &wedges, &TraceConfig::default());
        assert_eq!(a, b);
    }
}
