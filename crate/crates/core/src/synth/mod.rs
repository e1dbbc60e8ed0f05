//! Forward-propagation oracle.
//!
//! Given a source and a listener, [`forward_paths`] finds the direct path,
//! specular paths by the image-source method, and edge-diffraction paths
//! through the shortest point on each shadowing edge. [`emit_frames`] turns
//! those paths into noisy direction-of-arrival observations at a fixed frame
//! rate.

mod frames;
mod io;
mod paths;
mod scenario;

pub use frames::{emit_frames, forward_paths, perturb, Frame};
pub use io::{group_by_frame, read_observations, write_observations};
pub use paths::{
    diffraction_paths, direct_path, fermat_point, image_source_paths, in_shadow_of,
    reflected_diffraction_paths, ForwardPath, PathEvent,
};
pub use scenario::Scenario;
