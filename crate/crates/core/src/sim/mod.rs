//! Simulation harness: seeded episodes, Monte-Carlo estimates, the three
//! experiments, lower-bound scenario checks and their file outputs.

mod config;
mod episode;
mod experiment;
mod lowerbound;
mod report;

pub use config::{RunConfig, DEFAULT_REPS, DEFAULT_SEED};
pub use episode::{monte_carlo, run_episode, run_episode_at, EpisodeResult, MonteCarlo};
pub use experiment::{experiment, ExperimentConfig, ExperimentReport, ExperimentRow, Policy};
pub use lowerbound::{lower_bound_check, LowerBoundKind, LowerBoundReport, ReducedCheck};
pub use report::{
    emit_benchmark_csv, emit_csv, emit_svg, emit_trajectory_csv, format_sig, BenchmarkRow,
    CSV_HEADER,
};
