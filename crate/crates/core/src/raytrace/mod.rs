//! Backward acoustic ray tracing from direction-of-arrival observations.
//!
//! Each observation seeds a primary ray from the listener towards where the
//! sound came from. Surface hits spawn one specular reflection; rays that pass close
//! enough to a wedge edge spawn a fan of diffraction rays on the diffraction
//! cone, restricted to the wedge's shadow sector. The result for one
//! observation is a [`RayPathTree`].

mod diffraction;
mod dump;
mod tracer;

use nalgebra::UnitQuaternion;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{Vec3, DEFAULT_WEDGE_THRESHOLD_DEG};

pub use diffraction::{
    cone_direction, diffractability, diffraction_directions, reflect, shadow_region_test,
    shadow_sector, ShadowSector, SHADOW_MARGIN,
};
pub use dump::{read_ray_dump, write_ray_dump, DumpRow};
pub use tracer::{trace_frame, trace_observation, trace_ray};

/// One direction-of-arrival measurement.
#[derive(Debug, Clone, PartialEq)]
pub struct Observation {
    pub frame: usize,
    pub time: f64,
    pub listener: Vec3,
    pub orientation: UnitQuaternion<f64>,
    /// Direction of arrival: unit vector from the listener towards where the
    /// sound came from, world frame.
    pub direction: Vec3,
}

impl Observation {
    pub fn new(frame: usize, time: f64, listener: Vec3, direction: Vec3) -> Self {
        Observation {
            frame,
            time,
            listener,
            orientation: UnitQuaternion::identity(),
            direction: direction.normalize(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SegmentKind {
    Direct,
    Reflection,
    Diffraction,
}

impl SegmentKind {
    pub fn as_str(self) -> &'static str {
        match self {
            SegmentKind::Direct => "direct",
            SegmentKind::Reflection => "reflection",
            SegmentKind::Diffraction => "diffraction",
        }
    }
}

impl std::str::FromStr for SegmentKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(SegmentKind::Direct),
            "reflection" => Ok(SegmentKind::Reflection),
            "diffraction" => Ok(SegmentKind::Diffraction),
            other => Err(Error::Config(format!("unknown segment kind '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RaySegment {
    pub origin: Vec3,
    pub direction: Vec3,
    pub length: f64,
    pub order: usize,
    pub kind: SegmentKind,
}

impl RaySegment {
    pub fn end(&self) -> Vec3 {
        self.origin + self.direction * self.length
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RayNode {
    pub segment: RaySegment,
    pub parent: Option<usize>,
    pub reflection: Option<usize>,
    pub diffraction: Vec<usize>,
    /// Wedge that produced this node's diffraction children.
    pub diffracting_wedge: Option<usize>,
    /// Distance along the segment to its closest approach with that wedge's
    /// edge. The segment itself keeps its full length.
    pub edge_distance: Option<f64>,
    /// Triangle where the segment ends, if it hit the scene.
    pub hit_triangle: Option<usize>,
}

/// All ray segments traced back from one observation. Node 0 is the root;
/// nodes are stored depth-first in creation order.
#[derive(Debug, Clone, PartialEq)]
pub struct RayPathTree {
    pub observation: usize,
    pub nodes: Vec<RayNode>,
}

impl RayPathTree {
    pub fn root(&self) -> &RayNode {
        &self.nodes[0]
    }

    pub fn segments(&self) -> impl Iterator<Item = &RaySegment> {
        self.nodes.iter().map(|n| &n.segment)
    }

    pub fn depth(&self) -> usize {
        self.segments().map(|s| s.order).max().unwrap_or(0)
    }

    pub fn count(&self, kind: SegmentKind) -> usize {
        self.segments().filter(|s| s.kind == kind).count()
    }

    /// Follows reflection children from the root.
    pub fn reflection_chain(&self) -> Vec<&RayNode> {
        let mut chain = vec![self.root()];
        while let Some(next) = chain.last().and_then(|n| n.reflection) {
            chain.push(&self.nodes[next]);
        }
        chain
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TraceConfig {
    /// Diffraction rays generated per diffraction event.
    pub n_d: usize,
    /// Diffractability threshold in (0, 1).
    pub v_th: f64,
    /// Highest segment order (reflections and diffractions combined).
    pub max_order: usize,
    /// Length of a segment that escapes the scene, meters.
    pub max_ray_length: f64,
    /// Dihedral angle below which an edge counts as a wedge, degrees.
    pub wedge_threshold_deg: f64,
}

impl Default for TraceConfig {
    fn default() -> Self {
        TraceConfig {
            n_d: 5,
            v_th: 0.95,
            max_order: 3,
            max_ray_length: 30.0,
            wedge_threshold_deg: DEFAULT_WEDGE_THRESHOLD_DEG,
        }
    }
}

impl TraceConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.v_th > 0.0 && self.v_th < 1.0) {
            return Err(Error::Config(format!(
                "v_th must be in (0, 1), got {}",
                self.v_th
            )));
        }
        if !(self.max_ray_length > 0.0) {
            return Err(Error::Config("max_ray_length must be positive".into()));
        }
        if !(self.wedge_threshold_deg > 0.0 && self.wedge_threshold_deg < 180.0) {
            return Err(Error::Config(format!(
                "wedge_threshold_deg must be in (0, 180), got {}",
                self.wedge_threshold_deg
            )));
        }
        Ok(())
    }

    pub fn wedge_threshold(&self) -> f64 {
        self.wedge_threshold_deg.to_radians()
    }
}
