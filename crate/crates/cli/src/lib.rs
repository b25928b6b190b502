//! Experiment harness for the `wglgmres` solvers: configuration, single
//! runs with history output, and side-by-side variant comparisons.

pub mod config;
pub mod experiment;

pub use config::{ExperimentConfig, Partial, ProblemSource, Variant};
pub use experiment::{compare_variants, run_experiment, ComparisonRow, RunResult, HISTORY_HEADER};
