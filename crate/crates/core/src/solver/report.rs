use std::fmt;

use crate::la::BlockVector;

/// One row of the convergence history.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleRecord<T> {
    pub cycle: usize,
    /// Arnoldi steps taken so far, over all cycles.
    pub cumulative_iter: usize,
    /// `‖c − H̄y‖₂ / ‖C‖_D`.
    pub est_resnorm: T,
    /// `‖R‖_D / ‖C‖_D` with the weight of the cycle.
    pub weighted_resnorm: T,
    /// `‖R‖_F / ‖C‖_F`.
    pub true_resnorm: T,
    /// Number of harmonic blocks the cycle started from.
    pub deflated: usize,
    /// Seconds since the start of the solve.
    pub wall_s: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum SolverEvent {
    /// `h_{j+1,j}` vanished at step `step`; the projected solve was exact.
    Breakdown { cycle: usize, step: usize },
    /// The restart fell back to a plain restart.
    DeflationSkipped { cycle: usize, reason: String },
    /// The weight data were zero and the identity was used.
    WeightFallback { cycle: usize },
    /// The projected least-squares problem was rank deficient.
    DegenerateProjection { cycle: usize },
}

impl fmt::Display for SolverEvent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Breakdown { cycle, step } => write!(f, "cycle {cycle}: breakdown at step {step}"),
            Self::DeflationSkipped { cycle, reason } => {
                write!(f, "cycle {cycle}: deflation skipped ({reason})")
            }
            Self::WeightFallback { cycle } => {
                write!(f, "cycle {cycle}: zero weight data, identity weight used")
            }
            Self::DegenerateProjection { cycle } => {
                write!(f, "cycle {cycle}: rank-deficient projected problem")
            }
        }
    }
}

#[derive(Clone, Debug)]
pub struct SolveReport<T> {
    pub x: BlockVector<T>,
    pub converged: bool,
    pub cycles: usize,
    /// Total Arnoldi steps.
    pub iterations: usize,
    pub history: Vec<CycleRecord<T>>,
    /// Final `‖C − AX − XB‖_F / ‖C‖_F`.
    pub true_resnorm: T,
    pub events: Vec<SolverEvent>,
    /// Restart relation residuals, filled when diagnostics are enabled.
    pub restart_residuals: Vec<T>,
    pub wall_time: f64,
}

impl<T: Copy> SolveReport<T> {
    /// Per-cycle estimated residuals `‖c − H̄y‖₂ / ‖C‖_D`.
    pub fn estimated_history(&self) -> Vec<T> {
        self.history.iter().map(|r| r.est_resnorm).collect()
    }

    pub fn breakdowns(&self) -> impl Iterator<Item = &SolverEvent> {
        self.events
            .iter()
            .filter(|e| matches!(e, SolverEvent::Breakdown { .. }))
    }
}
