//! Weighted global GMRES with deflated restarting for large Sylvester
//! matrix equations `AX + XB = C`.
//!
//! The crate is generic over the real scalar type through [`Scalar`]
//! (implemented for `f32` and `f64`); the `*64` / `*32` aliases below name
//! the common instantiations.
//!
//! Layout:
//! - [`la`]: block vectors, CSR matrices, the Sylvester operator and the
//!   weighted inner products.
//! - [`dense`]: small dense kernels for the projected problems.
//! - [`weighting`]: residual-driven weight construction.
//! - [`arnoldi`]: the weighted global Arnoldi process and its continuation
//!   after a deflated restart.
//! - [`solver`]: restarted and deflated weighted global GMRES.
//! - [`problems`]: test problems, Matrix Market I/O and the dense
//!   Kronecker reference solve.

// Negated comparisons reject NaN on purpose; index loops mirror the
// textbook form of the dense kernels.
#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod arnoldi;
pub mod dense;
mod error;
pub mod la;
pub mod problems;
mod scalar;
pub mod solver;
pub mod weighting;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub use arnoldi::{arnoldi_extend, arnoldi_run, ArnoldiDecomposition};
pub use dense::{DenseMatrix, EigenPairSet, HessenbergMatrix};
pub use la::{
    apply_sylvester, basis_combine, diamond_product, weighted_inner, weighted_norm, BlockBasis,
    BlockVector, SparseMatrix, SylvesterOperator, Weight,
};
pub use solver::{wglgmres, wglgmres_dr, SolveReport, SolverConfig};
pub use weighting::{make_weight, StrategyKind, WeightStrategy};

pub type BlockVector64 = BlockVector<f64>;
pub type BlockVector32 = BlockVector<f32>;
pub type SparseMatrix64 = SparseMatrix<f64>;
pub type SparseMatrix32 = SparseMatrix<f32>;
pub type SylvesterOperator64 = SylvesterOperator<f64>;
pub type SylvesterOperator32 = SylvesterOperator<f32>;
pub type Weight64 = Weight<f64>;
pub type Weight32 = Weight<f32>;
pub type SolverConfig64 = SolverConfig<f64>;
pub type SolverConfig32 = SolverConfig<f32>;
pub type SolveReport64 = SolveReport<f64>;
pub type SolveReport32 = SolveReport<f32>;
