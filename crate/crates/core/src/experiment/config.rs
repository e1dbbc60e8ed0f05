use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use nalgebra::{Quaternion, UnitQuaternion};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::Vec3;
use crate::localize::FilterParams;
use crate::raytrace::TraceConfig;
use crate::synth::Scenario;

/// Whether the tracer may spawn diffraction rays.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    #[default]
    Full,
    /// Reflection-only baseline: forces `n_d = 0`.
    NoDiffraction,
}

impl Mode {
    pub fn as_str(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::NoDiffraction => "no-diffraction",
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "no-diffraction" => Ok(Mode::NoDiffraction),
            other => Err(Error::Config(format!(
                "unknown mode `{other}` (expected `full` or `no-diffraction`)"
            ))),
        }
    }
}

/// `[scenario]` section of a run file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioSpec {
    /// OBJ file, relative to the config file.
    pub mesh: PathBuf,
    pub listener: [f64; 3],
    /// Listener orientation as `[w, x, y, z]`.
    #[serde(default = "identity_quaternion")]
    pub orientation: [f64; 4],
    /// `[time s, x, y, z]` knots.
    pub trajectory: Vec<[f64; 4]>,
    #[serde(default = "default_frame_rate")]
    pub frame_rate: f64,
    /// Angular noise standard deviation in degrees.
    #[serde(default = "default_noise_deg")]
    pub noise_deg: f64,
    #[serde(default = "default_reflection_order")]
    pub max_reflection_order: usize,
    #[serde(default = "default_true")]
    pub include_diffraction: bool,
}

fn identity_quaternion() -> [f64; 4] {
    [1.0, 0.0, 0.0, 0.0]
}

fn default_frame_rate() -> f64 {
    5.0
}

fn default_noise_deg() -> f64 {
    3.0
}

fn default_reflection_order() -> usize {
    3
}

fn default_true() -> bool {
    true
}

/// Everything that determines a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub mode: Mode,
    /// Worker threads for tracing and weighting; 0 uses all cores.
    #[serde(default)]
    pub threads: usize,
    pub scenario: ScenarioSpec,
    #[serde(default)]
    pub trace: TraceConfig,
    #[serde(default)]
    pub filter: FilterParams,
    /// Directory relative paths are resolved against.
    #[serde(skip)]
    pub base_dir: PathBuf,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| match e.kind() {
            std::io::ErrorKind::NotFound => Error::FileNotFound(path.to_path_buf()),
            _ => Error::Io(e),
        })?;
        let mut config = Self::parse(&text)?;
        config.base_dir = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(config)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.trace.validate()?;
        self.filter.validate()?;
        self.scenario(0).validate()
    }

    pub fn mesh_path(&self) -> PathBuf {
        self.base_dir.join(&self.scenario.mesh)
    }

    /// Tracer settings with the mode applied.
    pub fn effective_trace(&self) -> TraceConfig {
        let mut trace = self.trace;
        if self.mode == Mode::NoDiffraction {
            trace.n_d = 0;
        }
        trace
    }

    /// The oracle scenario, seeded with `seed`.
    pub fn scenario(&self, seed: u64) -> Scenario {
        let s = &self.scenario;
        let [w, x, y, z] = s.orientation;
        Scenario {
            mesh: self.mesh_path(),
            listener: Vec3::from(s.listener),
            orientation: UnitQuaternion::from_quaternion(Quaternion::new(w, x, y, z)),
            trajectory: s
                .trajectory
                .iter()
                .map(|[t, x, y, z]| (*t, Vec3::new(*x, *y, *z)))
                .collect(),
            frame_rate: s.frame_rate,
            noise: s.noise_deg.to_radians(),
            max_reflection_order: s.max_reflection_order,
            include_diffraction: s.include_diffraction,
            seed,
        }
    }
}
