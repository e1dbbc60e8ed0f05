use std::path::PathBuf;

use nalgebra::UnitQuaternion;

use crate::error::{Error, Result};
use crate::geometry::Vec3;

/// A listener, a moving (or static) source and the noise applied to the
/// synthesized directions.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mesh: PathBuf,
    pub listener: Vec3,
    pub orientation: UnitQuaternion<f64>,
    /// `(time s, position)` knots, times strictly increasing.
    pub trajectory: Vec<(f64, Vec3)>,
    /// Frames per second.
    pub frame_rate: f64,
    /// Standard deviation of the angular noise, radians.
    pub noise: f64,
    pub max_reflection_order: usize,
    pub include_diffraction: bool,
    pub seed: u64,
}

impl Scenario {
    /// Source parked at one position for `duration` seconds.
    pub fn stationary(listener: Vec3, source: Vec3, duration: f64) -> Self {
        Scenario {
            mesh: PathBuf::new(),
            listener,
            orientation: UnitQuaternion::identity(),
            trajectory: vec![(0.0, source), (duration, source)],
            frame_rate: 5.0,
            noise: 0.0,
            max_reflection_order: 1,
            include_diffraction: true,
            seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.trajectory.is_empty() {
            return Err(Error::Config("trajectory needs at least one point".into()));
        }
        if self.trajectory.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::Config(
                "trajectory times must be strictly increasing".into(),
            ));
        }
        if !(self.frame_rate > 0.0 && self.frame_rate.is_finite()) {
            return Err(Error::Config(format!(
                "frame rate must be positive, got {}",
                self.frame_rate
            )));
        }
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            return Err(Error::Config(
                "noise must be a finite non-negative angle".into(),
            ));
        }
        Ok(())
    }

    /// Frame times from the first knot at `1 / frame_rate` spacing, up to and
    /// including the last knot.
    pub fn frame_times(&self) -> Vec<f64> {
        let t0 = self.trajectory[0].0;
        let t1 = self.trajectory[self.trajectory.len() - 1].0;
        let count = ((t1 - t0) * self.frame_rate + 1e-9).floor() as usize + 1;
        (0..count)
            .map(|k| t0 + k as f64 / self.frame_rate)
            .collect()
    }

    /// Piecewise-linear source position, held constant outside the knots.
    pub fn source_at(&self, t: f64) -> Vec3 {
        let knots = &self.trajectory;
        if t <= knots[0].0 {
            return knots[0].1;
        }
        for w in knots.windows(2) {
            let ((ta, a), (tb, b)) = (w[0], w[1]);
            if t <= tb {
                let u = (t - ta) / (tb - ta);
                return a + (b - a) * u;
            }
        }
        knots[knots.len() - 1].1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn validation() {
        let mut s = Scenario::stationary(Vec3::zeros(), Vec3::x(), 2.0);
        assert!(s.validate().is_ok());
        s.trajectory.push((2.0, Vec3::y()));
        assert!(matches!(s.validate(), Err(Error::Config(_))));
        s.trajectory.pop();
        s.frame_rate = 0.0;
        assert!(s.validate().is_err());
    }

    #[test]
    fn frame_times_at_five_hertz() {
        let s = Scenario::stationary(Vec3::zeros(), Vec3::x(), 2.0);
        let times = s.frame_times();
        assert_eq!(times.len(), 11);
        assert_eq!(times[0], 0.0);
        assert!((times[10] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation() {
        let mut s = Scenario::stationary(Vec3::zeros(), Vec3::zeros(), 1.0);
        s.trajectory = vec![
            (0.0, Vec3::zeros()),
            (2.0, Vec3::new(2.0, 0.0, 0.0)),
            (3.0, Vec3::new(2.0, 1.0, 0.0)),
        ];
        assert_eq!(s.source_at(1.0), Vec3::new(1.0, 0.0, 0.0));
        assert_eq!(s.source_at(2.5), Vec3::new(2.0, 0.5, 0.0));
        assert_eq!(s.source_at(-1.0), Vec3::zeros());
        assert_eq!(s.source_at(9.0), Vec3::new(2.0, 1.0, 0.0));
    }
}
