//! Monte-Carlo localization over candidate source positions.
//!
//! Particles are weighted by how close they lie to the traced acoustic rays,
//! resampled, and reported as an estimate once the cloud's generalized
//! variance (determinant of the position covariance) drops below `sigma_c`.

mod filter;
mod weight;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;

pub use filter::{
    generalized_variance, init_particles, step, systematic_resample, FilterState, StepReport,
};
pub use weight::{distance_weight, particle_likelihood};

/// Extra room around the scene bounds that particles may wander into.
pub const BOUNDS_MARGIN: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterParams {
    pub particles: usize,
    /// Standard deviation of the distance weight, meters.
    pub sigma_d: f64,
    /// Standard deviation of the per-step random walk, meters.
    pub sigma_s: f64,
    /// Generalized-variance threshold below which an estimate is emitted.
    pub sigma_c: f64,
    /// Radius around the listener where particles get zero likelihood.
    /// Every primary ray starts at the listener, so without it a particle
    /// sitting on the listener matches all of them at once.
    pub listener_clearance: f64,
}

impl Default for FilterParams {
    fn default() -> Self {
        FilterParams {
            particles: 100,
            sigma_d: 0.3,
            sigma_s: 0.3,
            sigma_c: 0.5,
            listener_clearance: 0.75,
        }
    }
}

impl FilterParams {
    pub fn validate(&self) -> Result<()> {
        if self.particles < 2 {
            return Err(Error::Config(format!(
                "particle count must be at least 2, got {}",
                self.particles
            )));
        }
        if !(self.sigma_d > 0.0 && self.sigma_s > 0.0) {
            return Err(Error::Config("sigma_d and sigma_s must be positive".into()));
        }
        if !(self.listener_clearance >= 0.0) {
            return Err(Error::Config(
                "listener_clearance must be non-negative".into(),
            ));
        }
        if !(self.sigma_c > 0.0) {
            return Err(Error::Config("sigma_c must be positive".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Particle {
    pub position: Vec3,
    pub weight: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Estimate {
    pub position: Vec3,
    pub generalized_variance: f64,
    pub frame: usize,
}
