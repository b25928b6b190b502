use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use serde::Deserialize;
use wglgmres_cli::experiment::{comparison_csv, comparison_table, write_history};
use wglgmres_cli::{compare_variants, run_experiment, ComparisonRow, ExperimentConfig, Partial, Variant};

const EXIT_CONVERGED: u8 = 0;
const EXIT_ERROR: u8 = 1;
const EXIT_NOT_CONVERGED: u8 = 2;

/// Weighted global GMRES experiments for AX + XB = C.
///
/// Exit status: 0 converged, 2 not converged within maxit, 1 usage or I/O error.
#[derive(Parser)]
#[command(name = "wglgmres-cli", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve one problem and report the convergence history.
    Run {
        /// TOML file with the same keys as the flags; flags take precedence.
        #[arg(long)]
        config: Option<PathBuf>,
        #[command(flatten)]
        flags: Partial,
    },
    /// Solve one problem with several variants and tabulate iter, res.norm and CPU time.
    Compare {
        /// TOML file with an optional [base] table and [[runs]] entries.
        #[arg(long)]
        config: Option<PathBuf>,
        /// Extra runs, one per listed variant, on top of the file's runs.
        #[arg(long, value_enum, value_delimiter = ',')]
        variants: Vec<Variant>,
        #[command(flatten)]
        flags: Partial,
    },
}

#[derive(Default, Deserialize)]
#[serde(default, deny_unknown_fields)]
struct CompareFile {
    base: Partial,
    runs: Vec<Partial>,
}

fn run(config: Option<PathBuf>, flags: Partial) -> Result<u8> {
    let file = match &config {
        Some(path) => Partial::load(path)?,
        None => Partial::default(),
    };
    let cfg = ExperimentConfig::from_partial(&file.over(&flags))?;
    let result = run_experiment(&cfg)?;
    if cfg.out.is_none() {
        let stdout = std::io::stdout();
        write_history(&result, stdout.lock())?;
    }
    println!("{}", result.summary_line());
    for event in &result.report.events {
        eprintln!("event: {event}");
    }
    Ok(if result.report.converged { EXIT_CONVERGED } else { EXIT_NOT_CONVERGED })
}

fn compare(config: Option<PathBuf>, variants: Vec<Variant>, flags: Partial) -> Result<u8> {
    let file = match &config {
        Some(path) => {
            let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
            toml::from_str::<CompareFile>(&text).with_context(|| format!("invalid config file {}", path.display()))?
        }
        None => CompareFile::default(),
    };
    let base = file.base.over(&flags);
    let mut runs: Vec<Partial> = file.runs;
    runs.extend(variants.into_iter().map(|v| Partial {
        variant: Some(v),
        ..Partial::default()
    }));
    let cfgs = runs
        .iter()
        .enumerate()
        .map(|(i, r)| ExperimentConfig::from_partial(&base.over(r)).with_context(|| format!("run {}", i + 1)))
        .collect::<Result<Vec<_>>>()?;

    let results = compare_variants(&cfgs)?;
    let rows: Vec<ComparisonRow> = results.iter().map(ComparisonRow::from).collect();
    let table = comparison_table(&rows);
    print!("{table}");
    if let Some(dir) = &base.out {
        fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
        fs::write(dir.join("comparison.txt"), &table)?;
        comparison_csv(&rows, fs::File::create(dir.join("comparison.csv"))?)?;
        for (i, r) in results.iter().enumerate() {
            let path = dir.join(format!("history-{}-{}.csv", i + 1, r.config.label()));
            write_history(r, fs::File::create(&path).with_context(|| format!("cannot write {}", path.display()))?)?;
        }
    }
    Ok(if results.iter().all(|r| r.report.converged) {
        EXIT_CONVERGED
    } else {
        EXIT_NOT_CONVERGED
    })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { EXIT_ERROR } else { EXIT_CONVERGED });
        }
    };
    let outcome = match cli.command {
        Command::Run { config, flags } => run(config, flags),
        Command::Compare { config, variants, flags } => compare(config, variants, flags),
    };
    match outcome {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
