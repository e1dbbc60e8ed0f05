//! Procedural test scenes: shoebox rooms and box obstacles.
//!
//! All builders orient triangle normals towards the air, which is what the
//! wedge extractor and the image-source oracle expect.

use crate::geometry::{Aabb, TriangleMesh, Vec3};

/// Room dimensions of the benchmark scene (meters).
pub const ROOM_SIZE: [f64; 3] = [7.0, 7.0, 3.0];

/// Obstacle of the benchmark scene: a 1 x 2 x 2 m block standing on the floor.
pub const DESK_OBSTACLE: ([f64; 3], [f64; 3]) = ([3.0, 2.5, 0.0], [4.0, 4.5, 2.0]);

/// Listener position used by the benchmark scenarios.
pub const DESK_LISTENER: [f64; 3] = [1.5, 5.5, 1.2];

/// A static source hidden behind the obstacle, seen from [`DESK_LISTENER`].
pub const DESK_NLOS_SOURCE: [f64; 3] = [5.0, 2.2, 1.0];

/// A static source in plain view of [`DESK_LISTENER`].
pub const DESK_LOS_SOURCE: [f64; 3] = [2.3, 1.8, 1.4];

#[derive(Debug, Default, Clone)]
pub struct MeshBuilder {
    vertices: Vec<Vec3>,
    triangles: Vec<[usize; 3]>,
}

impl MeshBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    /// Adds a planar quad given counter-clockwise (seen from the normal side).
    pub fn quad(&mut self, corners: [Vec3; 4]) -> &mut Self {
        let base = self.vertex_ids(&corners);
        self.triangles.push([base[0], base[1], base[2]]);
        self.triangles.push([base[0], base[2], base[3]]);
        self
    }

    pub fn triangle(&mut self, corners: [Vec3; 3]) -> &mut Self {
        let ids = self.vertex_ids(&corners);
        self.triangles.push([ids[0], ids[1], ids[2]]);
        self
    }

    /// Closed or open-bottomed box with outward normals.
    pub fn solid_box(&mut self, bounds: Aabb, with_bottom: bool) -> &mut Self {
        let c = box_corners(&bounds);
        // Corner index bits: x = 1, y = 2, z = 4.
        if with_bottom {
            self.quad([c[0], c[2], c[3], c[1]]);
        }
        self.quad([c[4], c[5], c[7], c[6]])
            .quad([c[0], c[1], c[5], c[4]])
            .quad([c[1], c[3], c[7], c[5]])
            .quad([c[3], c[2], c[6], c[7]])
            .quad([c[2], c[0], c[4], c[6]])
    }

    /// Shoebox room with normals pointing into the room.
    pub fn room(&mut self, bounds: Aabb) -> &mut Self {
        let c = box_corners(&bounds);
        self.quad([c[0], c[1], c[3], c[2]])
            .quad([c[4], c[6], c[7], c[5]])
            .quad([c[0], c[4], c[5], c[1]])
            .quad([c[1], c[5], c[7], c[3]])
            .quad([c[3], c[7], c[6], c[2]])
            .quad([c[2], c[6], c[4], c[0]])
    }

    pub fn build(&self) -> TriangleMesh {
        TriangleMesh::new(self.vertices.clone(), self.triangles.clone())
            .expect("builder produces valid triangles")
    }

    fn vertex_ids<const N: usize>(&mut self, corners: &[Vec3; N]) -> [usize; N] {
        corners.map(|p| match self.vertices.iter().position(|v| *v == p) {
            Some(i) => i,
            None => {
                self.vertices.push(p);
                self.vertices.len() - 1
            }
        })
    }
}

fn box_corners(b: &Aabb) -> [Vec3; 8] {
    std::array::from_fn(|i| {
        Vec3::new(
            if i & 1 == 0 { b.min.x } else { b.max.x },
            if i & 2 == 0 { b.min.y } else { b.max.y },
            if i & 4 == 0 { b.min.z } else { b.max.z },
        )
    })
}

pub fn unit_cube() -> TriangleMesh {
    MeshBuilder::new()
        .solid_box(Aabb::new(Vec3::zeros(), Vec3::repeat(1.0)), true)
        .build()
}

pub fn room_bounds() -> Aabb {
    Aabb::new(Vec3::zeros(), Vec3::from(ROOM_SIZE))
}

/// Empty shoebox room of the given size.
pub fn shoebox(size: [f64; 3]) -> TriangleMesh {
    MeshBuilder::new()
        .room(Aabb::new(Vec3::zeros(), Vec3::from(size)))
        .build()
}

/// The 7 x 7 x 3 m benchmark room with one block obstacle on the floor.
pub fn desk_room() -> TriangleMesh {
    let (lo, hi) = DESK_OBSTACLE;
    MeshBuilder::new()
        .room(room_bounds())
        .solid_box(Aabb::new(Vec3::from(lo), Vec3::from(hi)), false)
        .build()
}
