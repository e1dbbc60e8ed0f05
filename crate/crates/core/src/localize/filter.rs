use nalgebra::Matrix3;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal, UnitSphere};
use rayon::prelude::*;

use super::weight::particle_likelihood;
use super::{Estimate, FilterParams, Particle, BOUNDS_MARGIN};
use crate::error::{Error, Result};
use crate::geometry::{Aabb, Vec3};
use crate::raytrace::RayPathTree;

/// Particle cloud plus the random stream that drives it.
#[derive(Debug, Clone)]
pub struct FilterState {
    pub particles: Vec<Particle>,
    /// Region used for (re)initialization.
    pub bounds: Aabb,
    rng: ChaCha8Rng,
}

/// Per-step diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepReport {
    pub estimate: Option<Estimate>,
    pub generalized_variance: f64,
    /// `1 / sum(w^2)` of the normalized weights before resampling.
    pub effective_sample_size: f64,
    pub mean: Vec3,
    pub reinitialized: bool,
}

/// `count` particles drawn uniformly in `bounds` with equal weights.
pub fn init_particles(bounds: Aabb, count: usize, seed: u64) -> Result<FilterState> {
    if count < 2 {
        return Err(Error::Config(format!(
            "particle count must be at least 2, got {count}"
        )));
    }
    if (0..3).any(|i| !(bounds.max[i] > bounds.min[i])) {
        return Err(Error::Config("particle bounds are degenerate".into()));
    }
    let mut state = FilterState {
        particles: Vec::with_capacity(count),
        bounds,
        rng: ChaCha8Rng::seed_from_u64(seed),
    };
    state.scatter(count);
    Ok(state)
}

/// Functional form of [`FilterState::step`].
pub fn step(
    mut state: FilterState,
    frame: usize,
    trees: &[RayPathTree],
    params: &FilterParams,
) -> (FilterState, Option<Estimate>) {
    let report = state.step(frame, trees, params);
    (state, report.estimate)
}

impl FilterState {
    pub fn positions(&self) -> impl Iterator<Item = &Vec3> {
        self.particles.iter().map(|p| &p.position)
    }

    pub fn mean(&self) -> Vec3 {
        self.positions().sum::<Vec3>() / self.particles.len() as f64
    }

    fn scatter(&mut self, count: usize) {
        let lo = self.bounds.min;
        let size = self.bounds.size();
        let weight = 1.0 / count as f64;
        self.particles.clear();
        for _ in 0..count {
            let u = Vec3::new(
                self.rng.random::<f64>(),
                self.rng.random::<f64>(),
                self.rng.random::<f64>(),
            );
            self.particles.push(Particle {
                position: lo + size.component_mul(&u),
                weight,
            });
        }
    }

    /// One filter iteration: random walk, reweight against the traced rays,
    /// resample, then test convergence.
    pub fn step(
        &mut self,
        frame: usize,
        trees: &[RayPathTree],
        params: &FilterParams,
    ) -> StepReport {
        let count = self.particles.len();
        let limits = self.bounds.expanded(BOUNDS_MARGIN);
        let walk = Normal::new(0.0, params.sigma_s).expect("sigma_s validated positive");
        for p in &mut self.particles {
            let magnitude: f64 = walk.sample(&mut self.rng).abs();
            let dir: [f64; 3] = UnitSphere.sample(&mut self.rng);
            p.position = limits.clamp(&(p.position + Vec3::from(dir) * magnitude));
        }

        let mut reinitialized = false;
        let mut ess = count as f64;
        if !trees.is_empty() {
            let likelihoods: Vec<f64> = self
                .particles
                .par_iter()
                .map(|p| {
                    let near = trees.iter().any(|t| {
                        t.nodes.first().is_some_and(|n| {
                            (p.position - n.segment.origin).norm() < params.listener_clearance
                        })
                    });
                    if near {
                        0.0
                    } else {
                        particle_likelihood(&p.position, trees, params.sigma_d)
                    }
                })
                .collect();
            let total: f64 = likelihoods.iter().sum();
            if total > 0.0 {
                for (p, l) in self.particles.iter_mut().zip(&likelihoods) {
                    p.weight = l / total;
                }
                ess = 1.0
                    / self
                        .particles
                        .iter()
                        .map(|p| p.weight * p.weight)
                        .sum::<f64>();
                let weights: Vec<f64> = self.particles.iter().map(|p| p.weight).collect();
                let picks = systematic_resample(&weights, self.rng.random::<f64>());
                let uniform = 1.0 / count as f64;
                self.particles = picks
                    .into_iter()
                    .map(|i| Particle {
                        position: self.particles[i].position,
                        weight: uniform,
                    })
                    .collect();
            } else {
                self.scatter(count);
                reinitialized = true;
            }
        }

        let positions: Vec<Vec3> = self.positions().copied().collect();
        let gv = generalized_variance(&positions);
        let mean = self.mean();
        StepReport {
            estimate: (gv < params.sigma_c).then_some(Estimate {
                position: mean,
                generalized_variance: gv,
                frame,
            }),
            generalized_variance: gv,
            effective_sample_size: ess,
            mean,
            reinitialized,
        }
    }
}

/// Low-variance resampling: one offset `u0 in [0, 1)` picks `n` evenly
/// spaced points on the cumulative weight distribution.
pub fn systematic_resample(weights: &[f64], u0: f64) -> Vec<usize> {
    let n = weights.len();
    let total: f64 = weights.iter().sum();
    let step = total / n as f64;
    let mut picks = Vec::with_capacity(n);
    let mut cumulative = weights[0];
    let mut i = 0;
    for k in 0..n {
        let target = (u0 + k as f64) * step;
        while target >= cumulative && i + 1 < n {
            i += 1;
            cumulative += weights[i];
        }
        picks.push(i);
    }
    picks
}

/// Determinant of the population covariance of the positions.
pub fn generalized_variance(positions: &[Vec3]) -> f64 {
    let n = positions.len() as f64;
    let mean = positions.iter().sum::<Vec3>() / n;
    let cov = positions
        .iter()
        .map(|p| {
            let d = p - mean;
            d * d.transpose()
        })
        .sum::<Matrix3<f64>>()
        / n;
    cov.determinant()
}
