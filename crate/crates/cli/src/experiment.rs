use std::fs;
use std::io::Write;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::Serialize;
use wglgmres::problems::{FdmSpec, ProblemInstance};
use wglgmres::{wglgmres, wglgmres_dr, BlockVector, SolveReport, SolverConfig, WeightStrategy};

use crate::config::{ExperimentConfig, ProblemSource};

pub const HISTORY_HEADER: &str = "cycle,cumulative_iter,est_resnorm,true_resnorm,weight_strategy,wall_s";

pub fn build_problem(cfg: &ExperimentConfig) -> Result<ProblemInstance<f64>> {
    let p = match &cfg.problem {
        ProblemSource::Fdm { n0, s0, preset_a, preset_b } => ProblemInstance::fdm(
            &FdmSpec::preset(*n0, *preset_a),
            &FdmSpec::preset(*s0, *preset_b),
            cfg.seed,
            cfg.density,
        ),
        ProblemSource::Files { a, b } => ProblemInstance::from_files(a, b, cfg.seed, cfg.density),
    };
    p.with_context(|| format!("cannot build problem from {}", cfg.problem))
}

/// Outcome of one solve.
#[derive(Clone, Debug)]
pub struct RunResult {
    pub config: ExperimentConfig,
    pub report: SolveReport<f64>,
    /// `‖C − AX − XB‖_F / ‖C‖_F` evaluated from the returned `X`.
    pub res_norm: f64,
}

impl RunResult {
    pub fn summary_line(&self) -> String {
        format!(
            "variant={} strategy={} m={} k={} converged={} cycles={} iter={} res.norm={:.6e} cpu_s={:.3}",
            self.config.variant,
            self.config.strategy,
            self.config.m,
            self.config.k,
            self.report.converged,
            self.report.cycles,
            self.report.iterations,
            self.res_norm,
            self.report.wall_time,
        )
    }
}

pub fn solve(cfg: &ExperimentConfig, problem: &ProblemInstance<f64>) -> Result<RunResult> {
    let (n, s) = problem.op.block_shape();
    let x0 = BlockVector::zeros(n, s);
    let solver_cfg = SolverConfig::new(cfg.m, cfg.k)
        .with_tol(cfg.tol)
        .with_maxit(cfg.maxit)
        .with_strategy(WeightStrategy::new(cfg.strategy).with_seed(cfg.seed));
    let report = if cfg.variant.deflated() {
        wglgmres_dr(&problem.op, &problem.c, &x0, &solver_cfg)
    } else {
        wglgmres(&problem.op, &problem.c, &x0, &solver_cfg)
    }
    .with_context(|| format!("solver failed for {}", cfg.label()))?;

    let residual = problem.op.residual(&problem.c, &report.x)?;
    let res_norm = residual.frobenius_norm() / problem.c.frobenius_norm();
    Ok(RunResult {
        config: cfg.clone(),
        report,
        res_norm,
    })
}

#[derive(Serialize)]
struct HistoryRow<'a> {
    cycle: usize,
    cumulative_iter: usize,
    est_resnorm: f64,
    true_resnorm: f64,
    weight_strategy: &'a str,
    wall_s: f64,
}

pub fn write_history(result: &RunResult, out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let strategy = result.config.strategy.name();
    for rec in &result.report.history {
        w.serialize(HistoryRow {
            cycle: rec.cycle,
            cumulative_iter: rec.cumulative_iter,
            est_resnorm: rec.est_resnorm,
            true_resnorm: rec.true_resnorm,
            weight_strategy: strategy,
            wall_s: rec.wall_s,
        })?;
    }
    if result.report.history.is_empty() {
        w.write_record(HISTORY_HEADER.split(','))?;
    }
    w.flush()?;
    Ok(())
}

/// Builds the problem, solves it and writes `history.csv` and
/// `summary.txt` when an output directory is configured.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<RunResult> {
    let problem = build_problem(cfg)?;
    let result = solve(cfg, &problem)?;
    if let Some(dir) = &cfg.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        write_history(&result, create(&dir.join("history.csv"))?)?;
        let mut summary = create(&dir.join("summary.txt"))?;
        writeln!(summary, "problem: {}", problem.description)?;
        writeln!(summary, "{}", result.summary_line())?;
        for event in &result.report.events {
            writeln!(summary, "event: {event}")?;
        }
    }
    Ok(result)
}

fn create(path: &Path) -> Result<fs::File> {
    fs::File::create(path).with_context(|| format!("cannot write {}", path.display()))
}

/// One line of a comparison table.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ComparisonRow {
    pub variant: String,
    pub strategy: String,
    pub m: usize,
    pub k: usize,
    pub converged: bool,
    pub cycles: usize,
    pub iter: usize,
    #[serde(rename = "res.norm")]
    pub res_norm: f64,
    pub cpu_s: f64,
}

impl From<&RunResult> for ComparisonRow {
    fn from(r: &RunResult) -> Self {
        Self {
            variant: r.config.variant.name().into(),
            strategy: r.config.strategy.name().into(),
            m: r.config.m,
            k: r.config.k,
            converged: r.report.converged,
            cycles: r.report.cycles,
            iter: r.report.iterations,
            res_norm: r.res_norm,
            cpu_s: r.report.wall_time,
        }
    }
}

/// Solves every configuration on their shared problem, one thread per run.
/// An empty set yields an empty table.
pub fn compare_variants(cfgs: &[ExperimentConfig]) -> Result<Vec<RunResult>> {
    let Some(first) = cfgs.first() else {
        return Ok(Vec::new());
    };
    if let Some(odd) = cfgs.iter().find(|c| !c.same_problem(first)) {
        bail!(
            "compared runs must share problem, seed, density, tol and maxit; {} differs from {}",
            odd.label(),
            first.label()
        );
    }
    let problem = build_problem(first)?;
    std::thread::scope(|scope| {
        let handles: Vec<_> = cfgs.iter().map(|c| scope.spawn(|| solve(c, &problem))).collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| bail!("solver thread panicked")))
            .collect()
    })
}

pub fn comparison_csv(rows: &[ComparisonRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(["variant", "strategy", "m", "k", "converged", "cycles", "iter", "res.norm", "cpu_s"])?;
    }
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn comparison_table(rows: &[ComparisonRow]) -> String {
    let header = ["variant", "strategy", "m", "k", "converged", "cycles", "iter", "res.norm", "cpu_s"];
    let cells: Vec<[String; 9]> = rows
        .iter()
        .map(|r| {
            [
                r.variant.clone(),
                r.strategy.clone(),
                r.m.to_string(),
                r.k.to_string(),
                r.converged.to_string(),
                r.cycles.to_string(),
                r.iter.to_string(),
                format!("{:.3e}", r.res_norm),
                format!("{:.3}", r.cpu_s),
            ]
        })
        .collect();
    let mut widths = header.map(str::len);
    for row in &cells {
        for (w, c) in widths.iter_mut().zip(row) {
            *w = (*w).max(c.len());
        }
    }
    let line = |items: Vec<&str>| {
        items
            .iter()
            .zip(&widths)
            .enumerate()
            .map(|(i, (s, w))| if i < 2 { format!("{s:<w$}") } else { format!("{s:>w$}") })
            .collect::<Vec<_>>()
            .join("  ")
            .trim_end()
            .to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    for row in &cells {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
