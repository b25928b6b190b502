//! Construction of the inner-product weight from residual or right-hand
//! side data.
//!
//! Residual-driven kinds (`max-col`, `min-col`, `mean`) are recomputed at
//! every restart; `hadamard` depends only on `C` and `random` only on its
//! seed, so the solver builds those once per solve.

use std::fmt;
use std::str::FromStr;

use rand::distributions::{Distribution, Open01};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::la::{BlockVector, Weight};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum StrategyKind {
    Identity,
    /// Normalized magnitudes of the residual column with the largest norm.
    MaxCol,
    /// Normalized magnitudes of the residual column with the smallest norm.
    MinCol,
    /// Magnitudes of the row means of the residual.
    Mean,
    /// Elementwise `√(ns)·|C| / ‖C‖_F`, fixed for the whole solve.
    Hadamard,
    /// Diagonal with entries uniform on `(0, 2)`, fixed for the whole solve.
    Random,
}

impl StrategyKind {
    pub const ALL: [StrategyKind; 6] = [
        Self::Identity,
        Self::MaxCol,
        Self::MinCol,
        Self::Mean,
        Self::Hadamard,
        Self::Random,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::MaxCol => "max-col",
            Self::MinCol => "min-col",
            Self::Mean => "mean",
            Self::Hadamard => "hadamard",
            Self::Random => "random",
        }
    }

    /// Whether the weight is rebuilt from the residual at each restart.
    pub fn updates_per_restart(self) -> bool {
        matches!(self, Self::MaxCol | Self::MinCol | Self::Mean)
    }
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for StrategyKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown weight strategy '{s}' (expected one of identity, max-col, min-col, mean, hadamard, random)"
                ))
            })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightStrategy<T> {
    pub kind: StrategyKind,
    /// Seed for the `random` kind.
    pub seed: Option<u64>,
    /// Entries below `floor_rel · max entry` are raised to that value.
    pub floor_rel: T,
}

impl<T: Scalar> WeightStrategy<T> {
    pub fn new(kind: StrategyKind) -> Self {
        Self {
            kind,
            seed: None,
            floor_rel: T::lit(1e-12),
        }
    }

    pub fn identity() -> Self {
        Self::new(StrategyKind::Identity)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }
}

/// A freshly built weight.
#[derive(Clone, Debug, PartialEq)]
pub struct WeightUpdate<T> {
    pub weight: Weight<T>,
    /// The data were numerically zero and the identity was substituted.
    pub fell_back: bool,
}

impl<T> WeightUpdate<T> {
    fn built(weight: Weight<T>) -> Self {
        Self {
            weight,
            fell_back: false,
        }
    }

    fn identity() -> Self {
        Self {
            weight: Weight::Identity,
            fell_back: true,
        }
    }
}

/// Builds the weight prescribed by `strategy` from the residual `r` and the
/// right-hand side `c`.
pub fn make_weight<T: Scalar>(
    strategy: &WeightStrategy<T>,
    r: &BlockVector<T>,
    c: &BlockVector<T>,
) -> Result<WeightUpdate<T>> {
    r.check_same_shape(c, "make_weight")?;
    if !(strategy.floor_rel > T::zero()) {
        return Err(Error::InvalidArgument("floor_rel must be positive".into()));
    }
    let tiny = T::lit(1e-300);
    let numerically_zero = |b: &BlockVector<T>| b.as_slice().iter().all(|v| v.abs() <= tiny);

    match strategy.kind {
        StrategyKind::Identity => Ok(WeightUpdate::built(Weight::Identity)),
        StrategyKind::MaxCol | StrategyKind::MinCol => {
            if numerically_zero(r) {
                return Ok(WeightUpdate::identity());
            }
            let norms: Vec<T> = (0..r.cols()).map(|j| crate::dense::norm2(r.col(j))).collect();
            // strict comparisons keep the smallest index on ties
            let mut t = 0;
            for (j, &v) in norms.iter().enumerate().skip(1) {
                let better = match strategy.kind {
                    StrategyKind::MaxCol => v > norms[t],
                    _ => v < norms[t],
                };
                if better {
                    t = j;
                }
            }
            if norms[t] == T::zero() {
                return Ok(WeightUpdate::identity());
            }
            let d = r.col(t).iter().map(|v| v.abs() / norms[t]).collect();
            floored_diagonal(d, strategy.floor_rel)
        }
        StrategyKind::Mean => {
            if numerically_zero(r) {
                return Ok(WeightUpdate::identity());
            }
            let s = T::from_usize(r.cols()).expect("column count fits scalar");
            let d = (0..r.rows())
                .map(|i| ((0..r.cols()).map(|j| r[(i, j)]).sum::<T>() / s).abs())
                .collect();
            floored_diagonal(d, strategy.floor_rel)
        }
        StrategyKind::Hadamard => {
            if numerically_zero(c) {
                return Ok(WeightUpdate::identity());
            }
            let ns = T::from_usize(c.rows() * c.cols()).expect("size fits scalar");
            let scale = ns.sqrt() / c.frobenius_norm();
            let mut w = c.clone();
            w.as_mut_slice().iter_mut().for_each(|v| *v = v.abs() * scale);
            let floor = strategy.floor_rel * w.max_abs();
            w.as_mut_slice().iter_mut().for_each(|v| *v = v.max(floor));
            Ok(WeightUpdate::built(Weight::elementwise(w)?))
        }
        StrategyKind::Random => {
            let mut rng = ChaCha8Rng::seed_from_u64(strategy.seed.unwrap_or(0));
            let d = (0..r.rows())
                .map(|_| {
                    let u: f64 = Open01.sample(&mut rng);
                    T::lit(2.0 * u)
                })
                .collect();
            floored_diagonal(d, strategy.floor_rel)
        }
    }
}

fn floored_diagonal<T: Scalar>(mut d: Vec<T>, floor_rel: T) -> Result<WeightUpdate<T>> {
    let max = d.iter().copied().fold(T::zero(), T::max);
    if !(max > T::zero()) || !max.is_finite() {
        return Ok(WeightUpdate::identity());
    }
    let floor = floor_rel * max;
    d.iter_mut().for_each(|v| *v = v.max(floor));
    Ok(WeightUpdate::built(Weight::diagonal(d)?))
}
