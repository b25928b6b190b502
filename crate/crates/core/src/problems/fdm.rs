//! Five-point finite-difference discretization of
//! `L(u) = Δu − f₁ u_x − f₂ u_y − f₃ u` on the unit square with
//! homogeneous Dirichlet boundary conditions.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::la::SparseMatrix;
use crate::scalar::Scalar;

/// Coefficient function of `(x, y)`.
pub type Coefficient = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Clone)]
pub struct FdmSpec {
    /// Interior grid points per axis.
    pub n0: usize,
    pub f1: Coefficient,
    pub f2: Coefficient,
    pub f3: Coefficient,
    /// Label recorded in problem descriptions.
    pub label: String,
}

impl fmt::Debug for FdmSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FdmSpec")
            .field("n0", &self.n0)
            .field("label", &self.label)
            .finish_non_exhaustive()
    }
}

impl FdmSpec {
    pub fn new(
        n0: usize,
        f1: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f2: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
        f3: impl Fn(f64, f64) -> f64 + Send + Sync + 'static,
    ) -> Self {
        Self {
            n0,
            f1: Arc::new(f1),
            f2: Arc::new(f2),
            f3: Arc::new(f3),
            label: "custom".into(),
        }
    }

    pub fn preset(n0: usize, preset: Preset) -> Self {
        let mut spec = match preset {
            Preset::PaperA => Self::new(
                n0,
                |x, y| (x * x + y).exp(),
                |x, y| (x + 2.0 * y).sin(),
                |x, y| (x * y).cos(),
            ),
            Preset::PaperB => Self::new(n0, |x, y| 2.0 * x * y, |x, y| (x * y).exp(), |x, y| x * y),
            Preset::Laplace => Self::new(n0, |_, _| 0.0, |_, _| 0.0, |_, _| 0.0),
        };
        spec.label = preset.name().into();
        spec
    }

    pub fn grid_step(&self) -> f64 {
        1.0 / (self.n0 as f64 + 1.0)
    }
}

/// Named coefficient sets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Preset {
    /// `f₁ = e^{x²+y}`, `f₂ = sin(x+2y)`, `f₃ = cos(xy)`.
    PaperA,
    /// `f₁ = 2xy`, `f₂ = e^{xy}`, `f₃ = xy`.
    PaperB,
    /// All coefficients zero.
    Laplace,
}

impl Preset {
    pub const ALL: [Preset; 3] = [Self::PaperA, Self::PaperB, Self::Laplace];

    pub fn name(self) -> &'static str {
        match self {
            Self::PaperA => "paper-A",
            Self::PaperB => "paper-B",
            Self::Laplace => "laplace",
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|p| p.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| {
                Error::InvalidArgument(format!(
                    "unknown preset '{s}' (expected paper-A, paper-B or laplace)"
                ))
            })
    }
}

/// Assembles the `n₀² × n₀²` matrix; grid point `(i, j)` has index
/// `i + j·n₀` with `x_i = (i+1)h`, `y_j = (j+1)h`.
pub fn fdm_matrix<T: Scalar>(spec: &FdmSpec) -> Result<SparseMatrix<T>> {
    let n0 = spec.n0;
    if n0 == 0 {
        return Err(Error::InvalidArgument("fdm grid needs n0 >= 1".into()));
    }
    let h = spec.grid_step();
    let inv_h2 = 1.0 / (h * h);
    let mut triplets = Vec::with_capacity(5 * n0 * n0);
    for j in 0..n0 {
        for i in 0..n0 {
            let (x, y) = ((i + 1) as f64 * h, (j + 1) as f64 * h);
            let row = i + j * n0;
            let (f1, f2, f3) = ((spec.f1)(x, y), (spec.f2)(x, y), (spec.f3)(x, y));
            let entries = [
                (true, row, -4.0 * inv_h2 - f3),
                (i + 1 < n0, row + 1, inv_h2 - f1 / (2.0 * h)),
                (i > 0, row.wrapping_sub(1), inv_h2 + f1 / (2.0 * h)),
                (j + 1 < n0, row + n0, inv_h2 - f2 / (2.0 * h)),
                (j > 0, row.wrapping_sub(n0), inv_h2 + f2 / (2.0 * h)),
            ];
            for (present, col, v) in entries {
                if present {
                    if !v.is_finite() {
                        return Err(Error::InvalidArgument(format!(
                            "coefficient not finite at ({x}, {y})"
                        )));
                    }
                    triplets.push((row, col, T::lit(v)));
                }
            }
        }
    }
    SparseMatrix::from_triplets(n0 * n0, &triplets)
}
