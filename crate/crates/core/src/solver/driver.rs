use std::time::Instant;

use crate::arnoldi::{arnoldi_extend, ArnoldiDecomposition};
use crate::dense::{hessenberg_lsq, HessenbergLsq};
use crate::error::{Error, Result};
use crate::la::{basis_combine, BlockVector, SylvesterOperator, Weight};
use crate::scalar::Scalar;
use crate::solver::config::SolverConfig;
use crate::solver::harmonic::{harmonic_pairs, select_and_realify};
use crate::solver::report::{CycleRecord, SolveReport, SolverEvent};
use crate::solver::restart::{restart_relation_residual, restart_subspace, RestartSubspace};
use crate::weighting::make_weight;

/// State of a finished cycle, handed to the observer of
/// [`wglgmres_dr_observed`] before the restart is prepared.
pub struct CycleSnapshot<'a, T> {
    pub cycle: usize,
    pub decomposition: &'a ArnoldiDecomposition<T>,
    /// Right-hand side `c` of the projected least-squares problem.
    pub rhs: &'a [T],
    pub lsq: &'a HessenbergLsq<T>,
    /// Explicit residual `C − AX − XB` after the cycle's update.
    pub residual: &'a BlockVector<T>,
    /// Weight the cycle's new blocks were built under.
    pub weight: &'a Weight<T>,
    /// `‖C‖_D` under that weight.
    pub c_norm: T,
    /// Restart subspace the cycle started from, if it was deflated.
    pub prefix: Option<&'a RestartSubspace<T>>,
}

/// Restarted weighted global GMRES. `cfg.k` must be 0.
pub fn wglgmres<T: Scalar>(
    op: &SylvesterOperator<T>,
    c: &BlockVector<T>,
    x0: &BlockVector<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    if cfg.k != 0 {
        return Err(Error::InvalidArgument(
            "wglgmres does not deflate; use wglgmres_dr for k > 0".into(),
        ));
    }
    solve(op, c, x0, cfg, &mut |_| {})
}

/// Weighted global GMRES with deflated restarting. With `cfg.k = 0` this
/// is [`wglgmres`].
pub fn wglgmres_dr<T: Scalar>(
    op: &SylvesterOperator<T>,
    c: &BlockVector<T>,
    x0: &BlockVector<T>,
    cfg: &SolverConfig<T>,
) -> Result<SolveReport<T>> {
    solve(op, c, x0, cfg, &mut |_| {})
}

/// [`wglgmres_dr`] calling `observer` after every cycle.
pub fn wglgmres_dr_observed<T: Scalar>(
    op: &SylvesterOperator<T>,
    c: &BlockVector<T>,
    x0: &BlockVector<T>,
    cfg: &SolverConfig<T>,
    observer: &mut dyn FnMut(&CycleSnapshot<'_, T>),
) -> Result<SolveReport<T>> {
    solve(op, c, x0, cfg, observer)
}

fn deflate<T: Scalar>(
    dec: &ArnoldiDecomposition<T>,
    lsq: &HessenbergLsq<T>,
    cfg: &SolverConfig<T>,
) -> Result<RestartSubspace<T>> {
    let hbar = dec.hbar();
    let pairs = harmonic_pairs(&hbar)?;
    let hs = select_and_realify(&pairs, cfg.k, cfg.m - 2);
    restart_subspace(dec, &hs, &lsq.r)
}

fn solve<T: Scalar>(
    op: &SylvesterOperator<T>,
    c: &BlockVector<T>,
    x0: &BlockVector<T>,
    cfg: &SolverConfig<T>,
    observer: &mut dyn FnMut(&CycleSnapshot<'_, T>),
) -> Result<SolveReport<T>> {
    cfg.validate()?;
    op.check_block(c, "right-hand side")?;
    op.check_block(x0, "initial guess")?;
    if !c.is_finite() || !x0.is_finite() {
        return Err(Error::InvalidArgument(
            "right-hand side and initial guess must be finite".into(),
        ));
    }
    let clock = Instant::now();
    let (n, s) = op.block_shape();
    let c_fro = c.frobenius_norm();

    let mut report = SolveReport {
        x: x0.clone(),
        converged: false,
        cycles: 0,
        iterations: 0,
        history: Vec::new(),
        true_resnorm: T::zero(),
        events: Vec::new(),
        restart_residuals: Vec::new(),
        wall_time: 0.0,
    };
    if c_fro == T::zero() {
        report.x = BlockVector::zeros(n, s);
        report.converged = true;
        report.wall_time = clock.elapsed().as_secs_f64();
        return Ok(report);
    }

    let mut x = x0.clone();
    let mut r = op.residual(c, &x)?;
    let initial = make_weight(&cfg.strategy, &r, c)?;
    if initial.fell_back {
        report.events.push(SolverEvent::WeightFallback { cycle: 0 });
    }
    let mut weight = initial.weight;
    let mut pending: Option<RestartSubspace<T>> = None;

    for cycle in 1..=cfg.maxit {
        if r.frobenius_norm() == T::zero() {
            report.converged = true;
            break;
        }
        report.cycles = cycle;
        let c_norm = weight.norm_unchecked(c);
        let prefix = pending.take();

        let (dec, rhs, k_used) = match &prefix {
            None => {
                let (dec, beta) = ArnoldiDecomposition::start(&r, &weight)?;
                let dec = arnoldi_extend(dec, op, &weight, 1, cfg.m)?;
                let mut rhs = vec![T::zero(); dec.steps() + 1];
                rhs[0] = beta;
                (dec, rhs, 0)
            }
            Some(rs) => {
                let k = rs.k();
                let dec = ArnoldiDecomposition::from_prefix(rs.basis.clone(), rs.weight.clone(), &rs.h)?;
                let dec = arnoldi_extend(dec, op, &weight, k + 1, cfg.m)?;
                let mut rhs = rs.residual_coords.clone();
                rhs.resize(dec.steps() + 1, T::zero());
                (dec, rhs, k)
            }
        };
        report.iterations += dec.steps() - k_used;
        if let Some(step) = dec.breakdown() {
            report.events.push(SolverEvent::Breakdown { cycle, step });
        }

        let lsq = hessenberg_lsq(&dec.hbar(), &rhs)?;
        if lsq.degenerate {
            report.events.push(SolverEvent::DegenerateProjection { cycle });
        }
        let update = basis_combine(&dec.basis().prefix(dec.steps()), &lsq.y)?;
        x.axpy(T::one(), &update)?;
        r = op.residual(c, &x)?;

        let est = lsq.rho / c_norm;
        let weighted = weight.norm_unchecked(&r) / c_norm;
        report.history.push(CycleRecord {
            cycle,
            cumulative_iter: report.iterations,
            est_resnorm: est,
            weighted_resnorm: weighted,
            true_resnorm: r.frobenius_norm() / c_fro,
            deflated: k_used,
            wall_s: clock.elapsed().as_secs_f64(),
        });
        observer(&CycleSnapshot {
            cycle,
            decomposition: &dec,
            rhs: &rhs,
            lsq: &lsq,
            residual: &r,
            weight: &weight,
            c_norm,
            prefix: prefix.as_ref(),
        });

        if est <= cfg.tol && weighted <= cfg.tol {
            report.converged = true;
            break;
        }
        if !x.is_finite() || cycle == cfg.maxit {
            break;
        }

        if cfg.strategy.kind.updates_per_restart() {
            let up = make_weight(&cfg.strategy, &r, c)?;
            if up.fell_back {
                report.events.push(SolverEvent::WeightFallback { cycle });
            }
            weight = up.weight;
        }
        if cfg.k > 0 && dec.breakdown().is_none() {
            match deflate(&dec, &lsq, cfg) {
                Ok(rs) => {
                    if cfg.diagnostics {
                        report.restart_residuals.push(restart_relation_residual(op, &rs)?);
                    }
                    pending = Some(rs);
                }
                Err(e) => report.events.push(SolverEvent::DeflationSkipped {
                    cycle,
                    reason: e.to_string(),
                }),
            }
        }
    }

    report.true_resnorm = r.frobenius_norm() / c_fro;
    report.x = x;
    report.wall_time = clock.elapsed().as_secs_f64();
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::la::SparseMatrix;

    #[test]
    fn identity_operator_one_step() {
        let op = SylvesterOperator::new(SparseMatrix::identity(3), SparseMatrix::zeros(2));
        let c = BlockVector::from_fn(3, 2, |i, j| (i as f64 + 1.0) * (j as f64 - 0.5));
        let x0 = BlockVector::zeros(3, 2);
        let rep = wglgmres(&op, &c, &x0, &SolverConfig::new(4, 0)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.iterations, 1);
        assert!(rep.x.sub(&c).unwrap().frobenius_norm() < 1e-14);
    }

    #[test]
    fn hand_solved_system() {
        let op = SylvesterOperator::<f64>::new(
            SparseMatrix::from_diagonal(&[1.0, 2.0]),
            SparseMatrix::from_diagonal(&[3.0]),
        );
        let c = BlockVector::from_rows(&[&[1.0], &[1.0]]).unwrap();
        let rep = wglgmres(&op, &c, &BlockVector::zeros(2, 1), &SolverConfig::new(2, 0).with_tol(1e-12)).unwrap();
        assert!(rep.converged);
        assert!((rep.x[(0, 0)] - 0.25).abs() < 1e-12);
        assert!((rep.x[(1, 0)] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn zero_rhs_gives_zero_solution() {
        let op = SylvesterOperator::new(SparseMatrix::identity(2), SparseMatrix::identity(1));
        let x0 = BlockVector::from_rows(&[&[1.0], &[2.0]]).unwrap();
        let rep = wglgmres(&op, &BlockVector::zeros(2, 1), &x0, &SolverConfig::new(2, 0)).unwrap();
        assert!(rep.converged);
        assert_eq!(rep.x, BlockVector::zeros(2, 1));
    }

    #[test]
    fn plain_solver_rejects_deflation_count() {
        let op = SylvesterOperator::new(SparseMatrix::<f64>::identity(2), SparseMatrix::identity(1));
        let c = BlockVector::from_rows(&[&[1.0], &[2.0]]).unwrap();
        assert!(wglgmres(&op, &c, &c, &SolverConfig::new(4, 1)).is_err());
    }
}
