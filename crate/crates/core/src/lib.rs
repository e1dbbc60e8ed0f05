//! Diffraction-aware sound source localization.
//!
//! The pipeline has four stages:
//!
//! * [`geometry`] loads a triangle mesh, extracts diffracting wedges and
//!   answers ray queries through a bounding-volume hierarchy.
//! * [`raytrace`] turns direction-of-arrival observations into trees of
//!   backward acoustic rays (direct, specular reflection, edge diffraction).
//! * [`localize`] runs a particle filter that converges on the region where
//!   the traced rays meet.
//! * [`synth`] is the forward oracle: it computes the arrival directions a
//!   listener would observe for a known source, so the rest of the pipeline
//!   can be verified end to end.
//!
//! [`experiment`] binds these together into reproducible batch runs, and
//! [`scene`] builds the shoebox-with-obstacle rooms used by the examples and
//! tests.

// Negated comparisons are how validation rejects NaN along with bad values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod experiment;
pub mod geometry;
pub mod localize;
pub mod raytrace;
pub mod scene;
pub mod synth;

pub use error::{Error, Result};
pub use geometry::{TriangleMesh, Vec3, Wedge};
