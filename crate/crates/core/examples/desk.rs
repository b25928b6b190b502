//! Runs the four solver variants on the 400 × 4 convection-diffusion
//! problem and prints cycles, Arnoldi steps and the final residual.
//!
//! Usage: `cargo run --release --example desk [preset-a] [preset-b] [seed]`

use wglgmres::problems::{FdmSpec, Preset, ProblemInstance};
use wglgmres::solver::wglgmres_dr_observed;
use wglgmres::{wglgmres_dr, BlockVector, SolverConfig, StrategyKind, WeightStrategy};

fn main() -> wglgmres::Result<()> {
    let mut args = std::env::args().skip(1);
    let preset_a: Preset = args.next().map_or(Ok(Preset::PaperA), |s| s.parse())?;
    let preset_b: Preset = args.next().map_or(Ok(Preset::PaperB), |s| s.parse())?;
    let seed: u64 = args.next().and_then(|s| s.parse().ok()).unwrap_or(7);

    let p = ProblemInstance::<f64>::fdm(&FdmSpec::preset(20, preset_a), &FdmSpec::preset(2, preset_b), seed, None)?;
    let x0 = BlockVector::zeros(400, 4);
    println!("{}", p.description);

    // One long unrestarted cycle gives the step count of full global GMRES.
    let mut full_steps = None;
    wglgmres_dr_observed(&p.op, &p.c, &x0, &SolverConfig::new(150, 0).with_maxit(1), &mut |snap| {
        full_steps = snap.lsq.step_rho.iter().position(|&r| r / snap.c_norm <= 1e-6).map(|i| i + 1);
    })?;
    println!("unrestarted steps to 1e-6: {full_steps:?}");

    for (name, k, kind) in [
        ("glgmres", 0, StrategyKind::Identity),
        ("wglgmres mean", 0, StrategyKind::Mean),
        ("glgmres-d", 5, StrategyKind::Identity),
        ("wglgmres-d mean", 5, StrategyKind::Mean),
        ("wglgmres-d max-col", 5, StrategyKind::MaxCol),
        ("wglgmres-d min-col", 5, StrategyKind::MinCol),
        ("wglgmres-d hadamard", 5, StrategyKind::Hadamard),
        ("wglgmres-d random", 5, StrategyKind::Random),
    ] {
        let cfg = SolverConfig::new(10, k).with_strategy(WeightStrategy::new(kind).with_seed(seed));
        let r = wglgmres_dr(&p.op, &p.c, &x0, &cfg)?;
        println!(
            "{name:20} converged={} cycles={:3} steps={:4} res={:.3e} time={:.3}s",
            r.converged, r.cycles, r.iterations, r.true_resnorm, r.wall_time
        );
    }
    Ok(())
}
