//! Block vectors, sparse matrices, the Sylvester operator and the weighted
//! inner-product machinery.

mod basis;
mod block;
mod operator;
mod sparse;
mod weight;

pub use basis::{basis_combine, BlockBasis};
pub use block::BlockVector;
pub use operator::SylvesterOperator;
pub use sparse::SparseMatrix;
pub use weight::{diamond_product, weighted_inner, weighted_norm, Weight};

/// `AX + XB`.
pub fn apply_sylvester<T: crate::Scalar>(
    op: &SylvesterOperator<T>,
    x: &BlockVector<T>,
) -> crate::Result<BlockVector<T>> {
    op.apply(x)
}
