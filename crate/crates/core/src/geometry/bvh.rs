use super::mesh::Aabb;
use super::Vec3;

const LEAF_SIZE: usize = 4;

/// Slack added to the running best distance when pruning nodes, so that
/// near-equal hits in other subtrees still reach the tie-break.
const PRUNE_SLACK: f64 = 1e-9;

#[derive(Debug, Clone)]
enum NodeKind {
    Leaf { start: usize, count: usize },
    Inner { left: usize, right: usize },
}

#[derive(Debug, Clone)]
struct Node {
    bounds: Aabb,
    kind: NodeKind,
}

/// Axis-aligned bounding-volume hierarchy over triangles, split at the
/// centroid median of the longest axis.
#[derive(Debug, Clone)]
pub struct Bvh {
    nodes: Vec<Node>,
    order: Vec<usize>,
}

impl Bvh {
    pub fn build(vertices: &[Vec3], triangles: &[[usize; 3]]) -> Self {
        let bounds: Vec<Aabb> = triangles
            .iter()
            .map(|t| Aabb::from_points(t.iter().map(|&i| &vertices[i])))
            .collect();
        let centroids: Vec<Vec3> = bounds.iter().map(Aabb::center).collect();
        let mut bvh = Bvh {
            nodes: Vec::new(),
            order: (0..triangles.len()).collect(),
        };
        if !triangles.is_empty() {
            bvh.build_node(&bounds, &centroids, 0, triangles.len());
        }
        bvh
    }

    fn build_node(
        &mut self,
        bounds: &[Aabb],
        centroids: &[Vec3],
        start: usize,
        end: usize,
    ) -> usize {
        let node_bounds = self.order[start..end]
            .iter()
            .fold(Aabb::empty(), |acc, &i| acc.union(&bounds[i]));
        let id = self.nodes.len();
        self.nodes.push(Node {
            bounds: node_bounds,
            kind: NodeKind::Leaf {
                start,
                count: end - start,
            },
        });
        if end - start <= LEAF_SIZE {
            return id;
        }

        let centroid_bounds =
            Aabb::from_points(self.order[start..end].iter().map(|&i| &centroids[i]));
        let axis = centroid_bounds.size().imax();
        if centroid_bounds.size()[axis] <= 0.0 {
            return id;
        }
        let mid = start + (end - start) / 2;
        self.order[start..end].sort_by(|&a, &b| {
            centroids[a][axis]
                .total_cmp(&centroids[b][axis])
                .then(a.cmp(&b))
        });
        let left = self.build_node(bounds, centroids, start, mid);
        let right = self.build_node(bounds, centroids, mid, end);
        self.nodes[id].kind = NodeKind::Inner { left, right };
        id
    }

    /// Visits candidate triangles along the ray. `test` returns the hit
    /// distance for a triangle (if any) and receives the best distance so far;
    /// subtrees entered beyond the best distance are skipped.
    pub fn traverse<F>(&self, origin: &Vec3, direction: &Vec3, max_dist: f64, mut test: F)
    where
        F: FnMut(usize, f64) -> Option<f64>,
    {
        if self.nodes.is_empty() {
            return;
        }
        let inv_dir = direction.map(|d| 1.0 / d);
        let mut best = max_dist;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node
                .bounds
                .ray_entry(origin, &inv_dir, best + PRUNE_SLACK)
                .is_none()
            {
                continue;
            }
            match node.kind {
                NodeKind::Leaf { start, count } => {
                    for &tri in &self.order[start..start + count] {
                        if let Some(t) = test(tri, best) {
                            best = best.min(t);
                        }
                    }
                }
                NodeKind::Inner { left, right } => {
                    let dl =
                        self.nodes[left]
                            .bounds
                            .ray_entry(origin, &inv_dir, best + PRUNE_SLACK);
                    let dr =
                        self.nodes[right]
                            .bounds
                            .ray_entry(origin, &inv_dir, best + PRUNE_SLACK);
                    match (dl, dr) {
                        (Some(a), Some(b)) => {
                            // Push the farther child first so the nearer is visited next.
                            if a <= b {
                                stack.push(right);
                                stack.push(left);
                            } else {
                                stack.push(left);
                                stack.push(right);
                            }
                        }
                        (Some(_), None) => stack.push(left),
                        (None, Some(_)) => stack.push(right),
                        (None, None) => {}
                    }
                }
            }
        }
    }
}
