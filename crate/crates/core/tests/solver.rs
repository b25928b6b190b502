mod common;

use common::{oracle_solve, random_instance, rel_err, rotating_instance};
use num_complex::Complex64;
use wglgmres::problems::{kron_solve, FdmSpec, Preset, ProblemInstance};
use wglgmres::solver::{harmonic_pairs, select_and_realify, wglgmres_dr_observed};
use wglgmres::{
    arnoldi_run, weighted_inner, weighted_norm, wglgmres, wglgmres_dr, BlockVector, SolverConfig, StrategyKind,
    SylvesterOperator, Weight, WeightStrategy,
};

fn strategy(kind: StrategyKind) -> WeightStrategy<f64> {
    WeightStrategy::new(kind).with_seed(11)
}

#[test]
fn restarted_solves_match_dense_oracle() {
    for seed in 0..6 {
        let (op, c) = if seed % 2 == 0 {
            random_instance(seed, 24, 3)
        } else {
            rotating_instance(seed, 24, 3)
        };
        let exact = oracle_solve(&op, &c);
        for (k, kind) in [(0, StrategyKind::Identity), (0, StrategyKind::Mean), (3, StrategyKind::MaxCol), (3, StrategyKind::Hadamard)] {
            let cfg = SolverConfig::new(8, k).with_tol(1e-11).with_strategy(strategy(kind));
            let rep = wglgmres_dr(&op, &c, &BlockVector::zeros(24, 3), &cfg).unwrap();
            assert!(rep.converged, "seed {seed} k {k} {kind}");
            let err = rel_err(&rep.x, &exact);
            assert!(err < 1e-8, "seed {seed} k {k} {kind}: {err:e}");
        }
    }
}

#[test]
fn fdm_deflated_mean_matches_kronecker_solve() {
    let p = ProblemInstance::<f64>::fdm(&FdmSpec::preset(20, Preset::PaperA), &FdmSpec::preset(2, Preset::PaperB), 7, None)
        .unwrap();
    let cfg = SolverConfig::new(10, 5).with_strategy(strategy(StrategyKind::Mean));
    let rep = wglgmres_dr(&p.op, &p.c, &BlockVector::zeros(400, 4), &cfg).unwrap();
    assert!(rep.converged);
    let exact = kron_solve(&p.op, &p.c).unwrap();
    let err = rel_err(&rep.x, &exact);
    assert!(err <= 1e-5, "relative error {err:e}");
}

#[test]
fn zero_deflation_is_bitwise_plain_solver() {
    let (op, c) = rotating_instance(4, 30, 2);
    for kind in StrategyKind::ALL {
        let cfg = SolverConfig::new(6, 0).with_tol(1e-9).with_maxit(40).with_strategy(strategy(kind));
        let x0 = BlockVector::zeros(30, 2);
        let a = wglgmres(&op, &c, &x0, &cfg).unwrap();
        let b = wglgmres_dr(&op, &c, &x0, &cfg).unwrap();
        assert_eq!(a.x, b.x, "{kind}");
        assert_eq!(a.cycles, b.cycles);
        assert_eq!(a.estimated_history(), b.estimated_history());
    }
}

#[test]
fn first_cycle_convergence_ignores_deflation() {
    let (op, c) = random_instance(9, 12, 2);
    let x0 = BlockVector::zeros(12, 2);
    let plain = SolverConfig::new(24, 0).with_tol(1e-10);
    let deflated = SolverConfig::new(24, 4).with_tol(1e-10);
    let a = wglgmres(&op, &c, &x0, &plain).unwrap();
    let b = wglgmres_dr(&op, &c, &x0, &deflated).unwrap();
    assert_eq!(a.cycles, 1);
    assert_eq!(b.cycles, 1);
    assert_eq!(a.x, b.x);
    assert_eq!(a.iterations, b.iterations);
}

#[test]
fn single_precision_solve() {
    let (op64, c64) = random_instance(2, 20, 3);
    let exact = oracle_solve(&op64, &c64);
    let to32 = |m: &wglgmres::SparseMatrix<f64>| {
        let t: Vec<(usize, usize, f32)> = m.triplets().map(|(i, j, v)| (i, j, v as f32)).collect();
        wglgmres::SparseMatrix32::from_triplets(m.dim(), &t).unwrap()
    };
    let op = wglgmres::SylvesterOperator32::new(to32(op64.a()), to32(op64.b()));
    let c = wglgmres::BlockVector32::from_fn(20, 3, |i, j| c64[(i, j)] as f32);
    let cfg = wglgmres::SolverConfig32::new(8, 3).with_tol(1e-5).with_strategy(WeightStrategy::new(StrategyKind::Mean));
    let rep = wglgmres_dr(&op, &c, &BlockVector::zeros(20, 3), &cfg).unwrap();
    assert!(rep.converged);
    assert!(rep.true_resnorm <= 1e-4);
    let x = BlockVector::from_fn(20, 3, |i, j| rep.x[(i, j)] as f64);
    assert!(rel_err(&x, &exact) < 1e-3);
}

/// In cycles built under one weight the residual is `D`-orthogonal to
/// `𝒜𝒱_m` and the estimate equals the weighted residual norm.
#[test]
fn single_weight_cycles_are_petrov_galerkin() {
    let mut checked = 0;
    for seed in 0..4 {
        let (op, c) = rotating_instance(seed, 40, 3);
        for (k, kind) in [(0, StrategyKind::Hadamard), (4, StrategyKind::Random), (4, StrategyKind::Mean)] {
            let cfg = SolverConfig::new(9, k).with_tol(1e-10).with_maxit(30).with_strategy(strategy(kind));
            wglgmres_dr_observed(&op, &c, &BlockVector::zeros(40, 3), &cfg, &mut |snap| {
                let dec = snap.decomposition;
                if dec.is_mixed() {
                    return;
                }
                checked += 1;
                let w = snap.weight;
                let rn = weighted_norm(snap.residual, w).unwrap();
                for v in &dec.basis().blocks()[..dec.steps()] {
                    let av = op.apply(v).unwrap();
                    let ip = weighted_inner(snap.residual, &av, w).unwrap();
                    // the explicit residual carries rounding error of order eps·‖C‖
                    let scale = rn.max(1e-6 * snap.c_norm) * weighted_norm(&av, w).unwrap();
                    assert!(ip.abs() <= 1e-9 * scale, "cycle {}: {:e}", snap.cycle, ip / scale);
                }
                let gap = (snap.lsq.rho - rn).abs() / snap.c_norm;
                assert!(gap <= 1e-8, "estimate gap {gap:e}");
            })
            .unwrap();
        }
    }
    assert!(checked > 50, "{checked}");
}

#[test]
fn realified_columns_span_selected_vectors() {
    let (op, c) = rotating_instance(5, 30, 2);
    let dec = arnoldi_run(&op, &c, &Weight::Identity, 10).unwrap();
    let hbar = dec.hbar();
    let pairs = harmonic_pairs(&hbar).unwrap();
    let hs = select_and_realify(&pairs, 4, 8);
    assert!(hs.k_effective >= 4);
    assert!(hs.pairs.iter().any(|p| !p.is_real()), "instance should produce complex values");
    let g = &hs.g_real;
    for pair in &hs.pairs {
        // least squares of the complex vector on the real columns, via normal equations
        let cols = g.cols();
        let gram: Vec<Vec<f64>> = (0..cols)
            .map(|a| (0..cols).map(|b| g.col(a).iter().zip(g.col(b)).map(|(x, y)| x * y).sum()).collect())
            .collect();
        let rhs: Vec<Complex64> = (0..cols)
            .map(|a| g.col(a).iter().zip(&pair.vector).map(|(x, v)| v * x).sum())
            .collect();
        let re = common::dense_solve(gram.clone(), rhs.iter().map(|z| z.re).collect());
        let im = common::dense_solve(gram, rhs.iter().map(|z| z.im).collect());
        let mut resid = 0.0;
        let mut norm = 0.0;
        for i in 0..g.rows() {
            let fit: Complex64 = (0..cols).map(|j| Complex64::new(re[j], im[j]) * g[(i, j)]).sum();
            resid += (pair.vector[i] - fit).norm_sqr();
            norm += pair.vector[i].norm_sqr();
        }
        assert!((resid / norm).sqrt() <= 1e-10, "{:e}", (resid / norm).sqrt());
    }
}

#[test]
fn nonconvergence_is_reported_not_hidden() {
    let (op, c) = rotating_instance(1, 60, 2);
    let cfg = SolverConfig::new(3, 0).with_tol(1e-14).with_maxit(2);
    let rep = wglgmres(&op, &c, &BlockVector::zeros(60, 2), &cfg).unwrap();
    assert!(!rep.converged);
    assert_eq!(rep.cycles, 2);
    assert_eq!(rep.history.len(), 2);
    let r = op.residual(&c, &rep.x).unwrap();
    assert!((rep.true_resnorm - r.frobenius_norm() / c.frobenius_norm()).abs() < 1e-14);
}

#[test]
fn invalid_inputs_rejected() {
    let op = SylvesterOperator::new(wglgmres::SparseMatrix::<f64>::identity(3), wglgmres::SparseMatrix::identity(2));
    let c = BlockVector::from_fn(3, 2, |i, j| (i + j) as f64);
    let x0 = BlockVector::zeros(3, 2);
    assert!(wglgmres_dr(&op, &c, &BlockVector::zeros(2, 2), &SolverConfig::new(4, 0)).is_err());
    assert!(wglgmres_dr(&op, &c, &x0, &SolverConfig::new(4, 3)).is_err());
    assert!(wglgmres_dr(&op, &c, &x0, &SolverConfig::new(4, 0).with_tol(0.0)).is_err());
    let mut bad = c.clone();
    bad[(0, 0)] = f64::NAN;
    assert!(wglgmres_dr(&op, &bad, &x0, &SolverConfig::new(4, 0)).is_err());
}
