use std::io::Write;
use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{Mode, RunConfig};
use crate::error::{Error, Result};
use crate::geometry::{extract_wedges, load_mesh, TriangleMesh, Vec3, Wedge};
use crate::localize::init_particles;
use crate::raytrace::{trace_frame, SegmentKind};
use crate::synth::{emit_frames, Frame};

/// Per-frame wall-clock budget for tracing plus one filter step.
pub const FRAME_BUDGET_MS: f64 = 200.0;

#[derive(Debug, Clone, PartialEq)]
pub struct FrameRow {
    pub frame: usize,
    pub time: f64,
    pub truth: Vec3,
    pub estimate: Option<Vec3>,
    /// L2 distance between estimate and truth.
    pub error: Option<f64>,
    pub generalized_variance: f64,
    pub effective_sample_size: f64,
    /// No direct path from source to listener in this frame.
    pub nlos: bool,
    pub observations: usize,
    /// Traced segments by kind: direct, reflection, diffraction.
    pub rays: [usize; 3],
    pub ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub frames: usize,
    pub estimated_frames: usize,
    pub nlos_frames: usize,
    pub mean_error: Option<f64>,
    pub mean_nlos_error: Option<f64>,
    /// Mean traced segments per frame by kind: direct, reflection, diffraction.
    pub mean_rays: [f64; 3],
    pub mean_frame_ms: f64,
    pub median_frame_ms: f64,
    pub over_budget_frames: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub mode: Mode,
    pub n_d: usize,
    pub rows: Vec<FrameRow>,
    pub summary: Summary,
}

/// Mesh and wedges shared by every run on one config.
pub struct Scene {
    pub mesh: TriangleMesh,
    pub wedges: Vec<Wedge>,
}

impl Scene {
    pub fn load(config: &RunConfig) -> Result<Self> {
        let mesh = load_mesh(config.mesh_path())?;
        let wedges = extract_wedges(&mesh, config.trace.wedge_threshold())?;
        Ok(Scene { mesh, wedges })
    }
}

/// Independent seeds for the oracle and the filter, both derived from the
/// run seed.
pub fn derive_seeds(seed: u64) -> (u64, u64) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (rng.random(), rng.random())
}

/// Synthesizes the scenario's frames for a run seed.
pub fn synthesize(config: &RunConfig, scene: &Scene) -> Result<Vec<Frame>> {
    let (synth_seed, _) = derive_seeds(config.seed);
    emit_frames(&config.scenario(synth_seed), &scene.mesh, &scene.wedges)
}

/// Runs synth, trace and localize on every frame, using the config's thread
/// count.
pub fn run(config: &RunConfig) -> Result<RunReport> {
    let scene = Scene::load(config)?;
    with_threads(config.threads, || {
        let frames = synthesize(config, &scene)?;
        run_frames(config, &scene, &frames)
    })
}

/// Runs `f` on a pool of `threads` workers (0: rayon's default).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    if threads == 0 {
        return f();
    }
    match rayon::ThreadPoolBuilder::new().num_threads(threads).build() {
        Ok(pool) => pool.install(f),
        Err(e) => {
            log::warn!("could not build a {threads}-thread pool ({e}); using the default");
            f()
        }
    }
}

/// Traces and localizes pre-synthesized frames. Frames run in order since the
/// filter carries state from one to the next.
pub fn run_frames(config: &RunConfig, scene: &Scene, frames: &[Frame]) -> Result<RunReport> {
    let (_, filter_seed) = derive_seeds(config.seed);
    let trace = config.effective_trace();
    let bounds = scene.mesh.bounds();
    let mut state = init_particles(bounds, config.filter.particles, filter_seed)?;
    let mut rows = Vec::with_capacity(frames.len());
    for frame in frames {
        let start = Instant::now();
        let trees = trace_frame(&frame.observations, &scene.mesh, &scene.wedges, &trace);
        let report = state.step(frame.index, &trees, &config.filter);
        let ms = start.elapsed().as_secs_f64() * 1e3;
        if ms > FRAME_BUDGET_MS {
            log::warn!(
                "frame {} took {ms:.1} ms, over the {FRAME_BUDGET_MS} ms budget",
                frame.index
            );
        }
        let count = |kind| trees.iter().map(|t| t.count(kind)).sum();
        let estimate = report.estimate.map(|e| e.position);
        rows.push(FrameRow {
            frame: frame.index,
            time: frame.time,
            truth: frame.source,
            estimate,
            error: estimate.map(|e| (e - frame.source).norm()),
            generalized_variance: report.generalized_variance,
            effective_sample_size: report.effective_sample_size,
            nlos: !frame.line_of_sight,
            observations: frame.observations.len(),
            rays: [
                count(SegmentKind::Direct),
                count(SegmentKind::Reflection),
                count(SegmentKind::Diffraction),
            ],
            ms,
        });
    }
    let summary = summarize(&rows);
    Ok(RunReport {
        mode: config.mode,
        n_d: trace.n_d,
        rows,
        summary,
    })
}

fn mean(values: impl Iterator<Item = f64>) -> Option<f64> {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    (n > 0).then(|| sum / n as f64)
}

pub fn summarize(rows: &[FrameRow]) -> Summary {
    let n = rows.len().max(1) as f64;
    let mut times: Vec<f64> = rows.iter().map(|r| r.ms).collect();
    times.sort_by(f64::total_cmp);
    let median_frame_ms = match times.len() {
        0 => 0.0,
        k if k % 2 == 1 => times[k / 2],
        k => 0.5 * (times[k / 2 - 1] + times[k / 2]),
    };
    Summary {
        frames: rows.len(),
        estimated_frames: rows.iter().filter(|r| r.estimate.is_some()).count(),
        nlos_frames: rows.iter().filter(|r| r.nlos).count(),
        mean_error: mean(rows.iter().filter_map(|r| r.error)),
        mean_nlos_error: mean(rows.iter().filter(|r| r.nlos).filter_map(|r| r.error)),
        mean_rays: std::array::from_fn(|k| rows.iter().map(|r| r.rays[k] as f64).sum::<f64>() / n),
        mean_frame_ms: mean(times.iter().copied()).unwrap_or(0.0),
        median_frame_ms,
        over_budget_frames: rows.iter().filter(|r| r.ms > FRAME_BUDGET_MS).count(),
    }
}

#[derive(Serialize)]
struct FrameCsv {
    frame: usize,
    time_s: f64,
    true_x: f64,
    true_y: f64,
    true_z: f64,
    est_x: Option<f64>,
    est_y: Option<f64>,
    est_z: Option<f64>,
    error_m: Option<f64>,
    gv: f64,
    ess: f64,
    nlos: bool,
    observations: usize,
    direct_rays: usize,
    reflection_rays: usize,
    diffraction_rays: usize,
}

#[derive(Serialize)]
struct SummaryCsv {
    mode: Mode,
    n_d: usize,
    frames: usize,
    estimated_frames: usize,
    nlos_frames: usize,
    mean_error_m: Option<f64>,
    mean_nlos_error_m: Option<f64>,
    mean_direct_rays: f64,
    mean_reflection_rays: f64,
    mean_diffraction_rays: f64,
}

#[derive(Serialize)]
struct TimingCsv {
    frame: usize,
    ms: f64,
    over_budget: bool,
}

#[derive(Serialize)]
struct ErrorVsTimeCsv {
    time_s: f64,
    error_m: Option<f64>,
    nlos: bool,
}

fn csv_file(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    Ok(csv::Writer::from_path(path)?)
}

impl RunReport {
    pub fn write_frames<W: Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        for r in &self.rows {
            w.serialize(FrameCsv {
                frame: r.frame,
                time_s: r.time,
                true_x: r.truth.x,
                true_y: r.truth.y,
                true_z: r.truth.z,
                est_x: r.estimate.map(|e| e.x),
                est_y: r.estimate.map(|e| e.y),
                est_z: r.estimate.map(|e| e.z),
                error_m: r.error,
                gv: r.generalized_variance,
                ess: r.effective_sample_size,
                nlos: r.nlos,
                observations: r.observations,
                direct_rays: r.rays[0],
                reflection_rays: r.rays[1],
                diffraction_rays: r.rays[2],
            })?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_summary<W: Write>(&self, out: W) -> Result<()> {
        let s = &self.summary;
        let mut w = csv::Writer::from_writer(out);
        w.serialize(SummaryCsv {
            mode: self.mode,
            n_d: self.n_d,
            frames: s.frames,
            estimated_frames: s.estimated_frames,
            nlos_frames: s.nlos_frames,
            mean_error_m: s.mean_error,
            mean_nlos_error_m: s.mean_nlos_error,
            mean_direct_rays: s.mean_rays[0],
            mean_reflection_rays: s.mean_rays[1],
            mean_diffraction_rays: s.mean_rays[2],
        })?;
        w.flush()?;
        Ok(())
    }

    /// Writes `frames.csv`, `summary.csv`, `error_vs_time.csv` and
    /// `timing.csv` into `dir`. Only the timing file depends on the machine;
    /// the other three are a pure function of the config.
    pub fn write_dir(&self, dir: &Path) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        self.write_frames(std::fs::File::create(dir.join("frames.csv"))?)?;
        self.write_summary(std::fs::File::create(dir.join("summary.csv"))?)?;
        let mut plot = csv_file(&dir.join("error_vs_time.csv"))?;
        for r in &self.rows {
            plot.serialize(ErrorVsTimeCsv {
                time_s: r.time,
                error_m: r.error,
                nlos: r.nlos,
            })?;
        }
        plot.flush()?;
        let mut timing = csv_file(&dir.join("timing.csv"))?;
        for r in &self.rows {
            timing.serialize(TimingCsv {
                frame: r.frame,
                ms: r.ms,
                over_budget: r.ms > FRAME_BUDGET_MS,
            })?;
        }
        timing.flush()?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub n_d: usize,
    pub estimated_frames: usize,
    pub mean_error_m: Option<f64>,
    pub mean_nlos_error_m: Option<f64>,
    pub mean_diffraction_rays: f64,
    pub mean_frame_ms: f64,
}

/// One full-mode run per `n_d` value on the same synthesized frames.
pub fn sweep_nd(config: &RunConfig, values: &[usize]) -> Result<Vec<SweepRow>> {
    if values.is_empty() {
        return Err(Error::Config("sweep needs at least one n_d value".into()));
    }
    let scene = Scene::load(config)?;
    with_threads(config.threads, || {
        let frames = synthesize(config, &scene)?;
        values
            .iter()
            .map(|&n_d| {
                let mut c = config.clone();
                c.mode = Mode::Full;
                c.trace.n_d = n_d;
                let report = run_frames(&c, &scene, &frames)?;
                let s = report.summary;
                Ok(SweepRow {
                    n_d,
                    estimated_frames: s.estimated_frames,
                    mean_error_m: s.mean_error,
                    mean_nlos_error_m: s.mean_nlos_error,
                    mean_diffraction_rays: s.mean_rays[2],
                    mean_frame_ms: s.mean_frame_ms,
                })
            })
            .collect()
    })
}

pub fn write_sweep<W: Write>(rows: &[SweepRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rows {
        w.serialize(r)?;
    }
    w.flush()?;
    Ok(())
}

/// Loads a mesh and writes its wedges as CSV.
pub fn cmd_wedges<W: Write>(mesh: &Path, threshold_deg: f64, out: W) -> Result<usize> {
    if !(threshold_deg > 0.0 && threshold_deg < 180.0) {
        return Err(Error::Config(format!(
            "wedge threshold must be in (0, 180) degrees, got {threshold_deg}"
        )));
    }
    let mesh = load_mesh(mesh)?;
    let wedges = extract_wedges(&mesh, threshold_deg.to_radians())?;
    crate::geometry::write_wedges_csv(&wedges, out)?;
    Ok(wedges.len())
}
