use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use diffloc::experiment::{self, Mode, RunConfig, Scene};
use diffloc::raytrace::{trace_frame, write_ray_dump};
use diffloc::synth::{group_by_frame, read_observations, write_observations};
use diffloc::{Error, Result};

#[derive(Parser)]
#[command(
    name = "diffloc",
    version,
    about = "Diffraction-aware sound source localization"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Extract wedges from an OBJ mesh as CSV.
    Wedges {
        mesh: PathBuf,
        /// Dihedral angle (degrees) below which an edge counts as a wedge.
        #[arg(long, default_value_t = diffloc::geometry::DEFAULT_WEDGE_THRESHOLD_DEG)]
        threshold: f64,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Synthesize, trace and localize every frame of a scenario.
    Run {
        #[command(flatten)]
        common: Common,
        /// Report directory.
        #[arg(long, default_value = "results")]
        out: PathBuf,
    },
    /// Repeat a full-mode run for several diffraction ray counts.
    SweepNd {
        #[command(flatten)]
        common: Common,
        /// Comma-separated n_d values.
        #[arg(long, value_delimiter = ',', default_values_t = [0usize, 1, 2, 3, 5])]
        nd: Vec<usize>,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the scenario's synthesized observation stream.
    Synth {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Trace an observation stream and dump every ray segment.
    Trace {
        #[command(flatten)]
        common: Common,
        /// Observation CSV; synthesized from the config when omitted.
        #[arg(long)]
        observations: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    /// Overrides the config's seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config's mode: full or no-diffraction.
    #[arg(long)]
    mode: Option<Mode>,
    /// Worker threads; 0 uses all cores.
    #[arg(long)]
    threads: Option<usize>,
}

impl Common {
    fn load(&self) -> Result<RunConfig> {
        let mut config = RunConfig::load(&self.config)?;
        if let Some(seed) = self.seed {
            config.seed = seed;
        }
        if let Some(mode) = self.mode {
            config.mode = mode;
        }
        if let Some(threads) = self.threads {
            config.threads = threads;
        }
        Ok(config)
    }
}

fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => {
            if let Some(dir) = p.parent().filter(|d| !d.as_os_str().is_empty()) {
                std::fs::create_dir_all(dir)?;
            }
            Box::new(BufWriter::new(File::create(p)?))
        }
        None => Box::new(io::stdout().lock()),
    })
}

fn fmt_m(v: Option<f64>) -> String {
    v.map_or_else(|| "n/a".into(), |e| format!("{e:.3} m"))
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Wedges {
            mesh,
            threshold,
            out,
        } => {
            let count = experiment::cmd_wedges(&mesh, threshold, output(out.as_deref())?)?;
            log::info!("{count} wedges");
        }
        Command::Run { common, out } => {
            let config = common.load()?;
            let report = experiment::run(&config)?;
            report.write_dir(&out)?;
            let s = &report.summary;
            println!(
                "{} frames, {} estimates, mean error {}, NLOS error {} over {} frames, median frame {:.1} ms",
                s.frames,
                s.estimated_frames,
                fmt_m(s.mean_error),
                fmt_m(s.mean_nlos_error),
                s.nlos_frames,
                s.median_frame_ms
            );
            if s.over_budget_frames > 0 {
                eprintln!(
                    "warning: {} frames over the frame budget",
                    s.over_budget_frames
                );
            }
        }
        Command::SweepNd { common, nd, out } => {
            let config = common.load()?;
            let rows = experiment::sweep_nd(&config, &nd)?;
            experiment::write_sweep(&rows, output(out.as_deref())?)?;
        }
        Command::Synth { common, out } => {
            let config = common.load()?;
            let scene = Scene::load(&config)?;
            let frames = experiment::synthesize(&config, &scene)?;
            write_observations(
                frames.iter().flat_map(|f| &f.observations),
                output(out.as_deref())?,
            )?;
        }
        Command::Trace {
            common,
            observations,
            out,
        } => {
            let config = common.load()?;
            let scene = Scene::load(&config)?;
            let stream = match observations {
                Some(path) => {
                    let file = File::open(&path).map_err(|e| match e.kind() {
                        io::ErrorKind::NotFound => Error::FileNotFound(path.clone()),
                        _ => Error::Io(e),
                    })?;
                    read_observations(file)?
                }
                None => experiment::synthesize(&config, &scene)?
                    .into_iter()
                    .flat_map(|f| f.observations)
                    .collect(),
            };
            let trace = config.effective_trace();
            let traced: Vec<_> = experiment::with_threads(config.threads, || {
                group_by_frame(stream)
                    .into_iter()
                    .map(|(frame, obs)| {
                        (frame, trace_frame(&obs, &scene.mesh, &scene.wedges, &trace))
                    })
                    .collect()
            });
            write_ray_dump(
                traced.iter().map(|(f, trees)| (*f, trees.as_slice())),
                output(out.as_deref())?,
            )?;
        }
    }
    Ok(())
}

fn broken_pipe(e: &Error) -> bool {
    let io = match e {
        Error::Io(e) => e,
        Error::Csv(e) => match e.kind() {
            csv::ErrorKind::Io(e) => e,
            _ => return false,
        },
        _ => return false,
    };
    io.kind() == io::ErrorKind::BrokenPipe
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        // Output piped into `head` and friends.
        Err(e) if broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_usage() { 2 } else { 1 })
        }
    }
}
