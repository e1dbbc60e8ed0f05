use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use super::paths::{
    diffraction_paths, direct_path, image_source_paths, reflected_diffraction_paths, ForwardPath,
};
use super::Scenario;
use crate::error::Result;
use crate::geometry::{TriangleMesh, Vec3, Wedge};
use crate::raytrace::Observation;

/// Everything the oracle knows about one frame.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    pub index: usize,
    pub time: f64,
    pub source: Vec3,
    /// Whether the direct path exists.
    pub line_of_sight: bool,
    pub paths: Vec<ForwardPath>,
    /// One observation per path, same order.
    pub observations: Vec<Observation>,
}

/// All forward paths from `source` to `listener` the oracle synthesizes.
pub fn forward_paths(
    source: &Vec3,
    listener: &Vec3,
    mesh: &TriangleMesh,
    wedges: &[Wedge],
    max_reflection_order: usize,
    include_diffraction: bool,
) -> Vec<ForwardPath> {
    let mut paths = image_source_paths(source, listener, mesh, max_reflection_order);
    if include_diffraction {
        paths.extend(diffraction_paths(source, listener, wedges, mesh));
        if max_reflection_order > 0 {
            paths.extend(reflected_diffraction_paths(source, listener, wedges, mesh));
        }
    }
    paths
}

/// Rotates `direction` by `|N(0, sigma)|` about a uniformly random axis
/// perpendicular to it.
pub fn perturb<R: Rng + ?Sized>(direction: &Vec3, sigma: f64, rng: &mut R) -> Vec3 {
    let d = direction.normalize();
    if sigma == 0.0 {
        return d;
    }
    let angle = Normal::new(0.0, sigma)
        .expect("sigma validated")
        .sample(rng)
        .abs();
    let helper = if d.x.abs() < 0.9 {
        Vec3::x()
    } else {
        Vec3::y()
    };
    let u = d.cross(&helper).normalize();
    let v = d.cross(&u);
    let phi = rng.random::<f64>() * std::f64::consts::TAU;
    let axis = u * phi.cos() + v * phi.sin();
    (d * angle.cos() + axis.cross(&d) * angle.sin()).normalize()
}

/// Synthesizes the observation stream of a scenario. Each frame draws its
/// noise from its own random stream, so frames can be computed in any order.
pub fn emit_frames(
    scenario: &Scenario,
    mesh: &TriangleMesh,
    wedges: &[Wedge],
) -> Result<Vec<Frame>> {
    scenario.validate()?;
    let frames = scenario
        .frame_times()
        .into_par_iter()
        .enumerate()
        .map(|(index, time)| emit_frame(scenario, mesh, wedges, index, time))
        .collect();
    Ok(frames)
}

fn emit_frame(
    scenario: &Scenario,
    mesh: &TriangleMesh,
    wedges: &[Wedge],
    index: usize,
    time: f64,
) -> Frame {
    let source = scenario.source_at(time);
    let listener = scenario.listener;
    let paths = forward_paths(
        &source,
        &listener,
        mesh,
        wedges,
        scenario.max_reflection_order,
        scenario.include_diffraction,
    );
    let line_of_sight = direct_path(&source, &listener, mesh).is_some();
    let mut rng = ChaCha8Rng::seed_from_u64(scenario.seed);
    rng.set_stream(index as u64);
    let observations = paths
        .iter()
        .map(|p| Observation {
            frame: index,
            time,
            listener,
            orientation: scenario.orientation,
            direction: perturb(&p.arrival_direction(), scenario.noise, &mut rng),
        })
        .collect();
    Frame {
        index,
        time,
        source,
        line_of_sight,
        paths,
        observations,
    }
}
