//! Restarted weighted global GMRES and its deflated variant.

mod config;
mod driver;
mod harmonic;
mod report;
mod restart;

pub use config::SolverConfig;
pub use driver::{wglgmres, wglgmres_dr, wglgmres_dr_observed, CycleSnapshot};
pub use harmonic::{
    collinearity_check, harmonic_pairs, harmonic_residual, select_and_realify, HarmonicSet,
};
pub use report::{CycleRecord, SolveReport, SolverEvent};
pub use restart::{restart_relation_residual, restart_subspace, RestartSubspace};
