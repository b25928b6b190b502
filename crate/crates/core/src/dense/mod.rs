//! Dense kernels for the small projected problems: plane-rotation least
//! squares on `H̄_m`, reduced QR, a real nonsymmetric eigensolver and
//! pivoted linear solves.

mod eig;
mod hessenberg;
mod lu;
mod mat;
mod qr;

pub use eig::{eigen_residual, eigenvalues, small_eig, EigenPair, EigenPairSet};
pub use hessenberg::{hessenberg_lsq, HessenbergLsq, HessenbergMatrix};
pub use lu::{small_solve, Lu};
pub use mat::DenseMatrix;
pub use qr::{reduced_qr, ReducedQr};

pub(crate) use mat::{dot, norm2};
