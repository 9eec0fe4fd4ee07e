//! End-to-end runs driven by a system file.

mod config;
mod pipeline;
mod report;

pub use config::{parse_system, ConfigError, Mode, RunOptions, SystemFile, MAX_DEGREE};
pub use pipeline::{interior_points, kukles_template, run_pipeline, DEFAULT_GRID, DEFAULT_TOL, DEFAULT_Z_MAX};
pub use report::{format_sig, AveragedEntry, LimitCycle, Report, SampleTable, SolutionSummary, StageFailure};
