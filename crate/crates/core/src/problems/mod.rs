//! Test problems: the finite-difference generator, Matrix Market files,
//! random right-hand sides and the dense Kronecker reference solve.

mod fdm;
mod kron;
mod mtx;
mod rhs;

use std::path::Path;

pub use fdm::{fdm_matrix, Coefficient, FdmSpec, Preset};
pub use kron::{kron_matrix, kron_solve, KRON_LIMIT};
pub use mtx::{format_matrix_market, parse_matrix_market, read_matrix_market, write_matrix_market};
pub use rhs::{default_density, gen_rhs};

use crate::error::Result;
use crate::la::{BlockVector, SylvesterOperator};
use crate::scalar::Scalar;

/// A Sylvester problem `AX + XB = C` with a description of its origin.
#[derive(Clone, Debug)]
pub struct ProblemInstance<T> {
    pub op: SylvesterOperator<T>,
    pub c: BlockVector<T>,
    pub seed: u64,
    pub density: f64,
    pub description: String,
}

impl<T: Scalar> ProblemInstance<T> {
    /// Builds `A` and `B` from finite-difference grids and a random `C`.
    pub fn fdm(a: &FdmSpec, b: &FdmSpec, seed: u64, density: Option<f64>) -> Result<Self> {
        let op = SylvesterOperator::try_new(fdm_matrix(a)?, fdm_matrix(b)?)?;
        Self::with_random_rhs(
            op,
            seed,
            density,
            format!("fdm A: n0={} {}, B: n0={} {}", a.n0, a.label, b.n0, b.label),
        )
    }

    /// Reads `A` and `B` from Matrix Market files and draws a random `C`.
    pub fn from_files(
        a: impl AsRef<Path>,
        b: impl AsRef<Path>,
        seed: u64,
        density: Option<f64>,
    ) -> Result<Self> {
        let op = SylvesterOperator::try_new(read_matrix_market(a.as_ref())?, read_matrix_market(b.as_ref())?)?;
        Self::with_random_rhs(
            op,
            seed,
            density,
            format!("files A: {}, B: {}", a.as_ref().display(), b.as_ref().display()),
        )
    }

    fn with_random_rhs(op: SylvesterOperator<T>, seed: u64, density: Option<f64>, origin: String) -> Result<Self> {
        let (n, s) = op.block_shape();
        let density = density.unwrap_or_else(|| default_density(n, s));
        let c = gen_rhs(n, s, seed, density)?;
        Ok(Self {
            op,
            c,
            seed,
            density,
            description: format!("{origin}; rhs seed={seed} density={density}"),
        })
    }
}
