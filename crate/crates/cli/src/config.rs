//! Experiment configuration: partial settings from flags or a TOML file,
//! merged and validated into an [`ExperimentConfig`].

use std::fmt;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, ValueEnum};
use serde::Deserialize;
use wglgmres::problems::Preset;
use wglgmres::StrategyKind;

pub const DEFAULT_FDM_N0: usize = 20;
pub const DEFAULT_FDM_S0: usize = 2;
pub const DEFAULT_SEED: u64 = 1;
pub const DEFAULT_M: usize = 10;
pub const DEFAULT_K: usize = 5;
pub const DEFAULT_TOL: f64 = 1e-6;
pub const DEFAULT_MAXIT: usize = 2500;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, ValueEnum, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Variant {
    /// Restarted global GMRES, identity weight.
    Glgmres,
    /// Restarted weighted global GMRES.
    Wglgmres,
    /// Global GMRES with deflated restarting.
    GlgmresD,
    /// Weighted global GMRES with deflated restarting.
    WglgmresD,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Self::Glgmres => "glgmres",
            Self::Wglgmres => "wglgmres",
            Self::GlgmresD => "glgmres-d",
            Self::WglgmresD => "wglgmres-d",
        }
    }

    pub fn weighted(self) -> bool {
        matches!(self, Self::Wglgmres | Self::WglgmresD)
    }

    pub fn deflated(self) -> bool {
        matches!(self, Self::GlgmresD | Self::WglgmresD)
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Settings that may come from the command line or a config file. Every
/// field is optional; later layers override earlier ones in [`Partial::over`].
#[derive(Clone, Debug, Default, PartialEq, Args, Deserialize)]
#[serde(default, deny_unknown_fields, rename_all = "kebab-case")]
pub struct Partial {
    /// Solver variant.
    #[arg(long, value_enum)]
    pub variant: Option<Variant>,
    /// Weight strategy: identity, max-col, min-col, mean, hadamard or random.
    #[arg(long)]
    pub strategy: Option<String>,
    /// Krylov subspace dimension per cycle.
    #[arg(long)]
    pub m: Option<usize>,
    /// Number of harmonic Ritz vectors kept at a deflated restart.
    #[arg(long)]
    pub k: Option<usize>,
    /// Relative residual tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
    /// Maximum number of restart cycles.
    #[arg(long)]
    pub maxit: Option<usize>,
    /// Seed for the right-hand side and the random weight.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Fraction of nonzero right-hand-side entries.
    #[arg(long)]
    pub density: Option<f64>,
    /// Interior grid points per axis for A.
    #[arg(long)]
    pub fdm_n0: Option<usize>,
    /// Interior grid points per axis for B.
    #[arg(long)]
    pub fdm_s0: Option<usize>,
    /// Coefficient preset for A: paper-A, paper-B or laplace.
    #[arg(long)]
    pub preset_a: Option<String>,
    /// Coefficient preset for B.
    #[arg(long)]
    pub preset_b: Option<String>,
    /// Matrix Market file for A (replaces the grid problem).
    #[arg(long)]
    pub matrix_a: Option<PathBuf>,
    /// Matrix Market file for B.
    #[arg(long)]
    pub matrix_b: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

macro_rules! overlay {
    ($base:expr, $top:expr, $($f:ident),*) => {
        Partial { $($f: $top.$f.clone().or_else(|| $base.$f.clone()),)* }
    };
}

impl Partial {
    /// `top` wins wherever it sets a field.
    pub fn over(&self, top: &Partial) -> Partial {
        overlay!(
            self, top, variant, strategy, m, k, tol, maxit, seed, density, fdm_n0, fdm_s0, preset_a,
            preset_b, matrix_a, matrix_b, out
        )
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read config file {}", path.display()))?;
        Self::from_toml(&text).with_context(|| format!("invalid config file {}", path.display()))
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum ProblemSource {
    Fdm {
        n0: usize,
        s0: usize,
        preset_a: Preset,
        preset_b: Preset,
    },
    Files {
        a: PathBuf,
        b: PathBuf,
    },
}

impl fmt::Display for ProblemSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Fdm { n0, s0, preset_a, preset_b } => write!(
                f,
                "fdm n0={n0} ({}) s0={s0} ({})",
                preset_a.name(),
                preset_b.name()
            ),
            Self::Files { a, b } => write!(f, "files {} {}", a.display(), b.display()),
        }
    }
}

/// A validated experiment.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub problem: ProblemSource,
    pub seed: u64,
    pub density: Option<f64>,
    pub variant: Variant,
    pub strategy: StrategyKind,
    pub m: usize,
    pub k: usize,
    pub tol: f64,
    pub maxit: usize,
    pub out: Option<PathBuf>,
}

fn parse_preset(value: Option<&str>, default: Preset, flag: &str) -> Result<Preset> {
    match value {
        None => Ok(default),
        Some(s) => s.parse().with_context(|| format!("bad value for {flag}")),
    }
}

impl ExperimentConfig {
    pub fn from_partial(p: &Partial) -> Result<Self> {
        let variant = p.variant.unwrap_or(Variant::WglgmresD);
        let strategy = match p.strategy.as_deref() {
            Some(s) => s.parse::<StrategyKind>().context("bad value for --strategy")?,
            None if variant.weighted() => StrategyKind::Mean,
            None => StrategyKind::Identity,
        };
        if !variant.weighted() && strategy != StrategyKind::Identity {
            bail!(
                "variant {variant} is unweighted and needs --strategy identity (got {strategy}); \
                 use {} for weighted runs",
                if variant.deflated() { "wglgmres-d" } else { "wglgmres" }
            );
        }
        let k = match (variant.deflated(), p.k) {
            (true, None) => DEFAULT_K,
            (true, Some(0)) => bail!("variant {variant} deflates and needs --k >= 1"),
            (false, Some(k)) if k > 0 => bail!(
                "variant {variant} does not deflate; drop --k or use {variant}-d"
            ),
            (_, k) => k.unwrap_or(0),
        };
        let m = p.m.unwrap_or(DEFAULT_M);
        if m == 0 {
            bail!("--m must be at least 1");
        }
        if k > 0 && k + 2 > m {
            bail!("--k {k} is too large for --m {m}; deflation needs k <= m - 2");
        }
        let tol = p.tol.unwrap_or(DEFAULT_TOL);
        if !(tol > 0.0 && tol.is_finite()) {
            bail!("--tol must be a positive finite number (got {tol})");
        }
        let maxit = p.maxit.unwrap_or(DEFAULT_MAXIT);
        if maxit == 0 {
            bail!("--maxit must be at least 1");
        }
        if let Some(d) = p.density {
            if !(d > 0.0 && d <= 1.0) {
                bail!("--density must lie in (0, 1] (got {d})");
            }
        }

        let grid_flags = p.fdm_n0.is_some() || p.fdm_s0.is_some() || p.preset_a.is_some() || p.preset_b.is_some();
        let problem = match (&p.matrix_a, &p.matrix_b) {
            (Some(a), Some(b)) => {
                if grid_flags {
                    bail!("--matrix-a/--matrix-b cannot be combined with the --fdm-*/--preset-* grid options");
                }
                ProblemSource::Files { a: a.clone(), b: b.clone() }
            }
            (None, None) => {
                let n0 = p.fdm_n0.unwrap_or(DEFAULT_FDM_N0);
                let s0 = p.fdm_s0.unwrap_or(DEFAULT_FDM_S0);
                if n0 == 0 || s0 == 0 {
                    bail!("--fdm-n0 and --fdm-s0 must be at least 1");
                }
                ProblemSource::Fdm {
                    n0,
                    s0,
                    preset_a: parse_preset(p.preset_a.as_deref(), Preset::PaperA, "--preset-a")?,
                    preset_b: parse_preset(p.preset_b.as_deref(), Preset::PaperB, "--preset-b")?,
                }
            }
            _ => bail!("--matrix-a and --matrix-b must be given together"),
        };

        Ok(Self {
            problem,
            seed: p.seed.unwrap_or(DEFAULT_SEED),
            density: p.density,
            variant,
            strategy,
            m,
            k,
            tol,
            maxit,
            out: p.out.clone(),
        })
    }

    /// Short name used in tables and file names.
    pub fn label(&self) -> String {
        format!("{}-{}-m{}-k{}", self.variant, self.strategy, self.m, self.k)
    }

    /// Whether two configurations describe the same problem and stopping
    /// rule, differing at most in variant, strategy, `m` and `k`.
    pub fn same_problem(&self, other: &Self) -> bool {
        self.problem == other.problem
            && self.seed == other.seed
            && self.density == other.density
            && self.tol == other.tol
            && self.maxit == other.maxit
    }
}
