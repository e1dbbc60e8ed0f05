//! Batch runs binding the pipeline together: one config file fully
//! determines the synthesized observations, the traced rays and the filter's
//! random stream.

mod config;
mod run;

pub use config::{Mode, RunConfig, ScenarioSpec};
pub use run::{
    cmd_wedges, derive_seeds, run, run_frames, summarize, sweep_nd, synthesize, with_threads,
    write_sweep, FrameRow, RunReport, Scene, Summary, SweepRow, FRAME_BUDGET_MS,
};
