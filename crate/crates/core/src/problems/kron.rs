use crate::dense::{DenseMatrix, Lu};
use crate::error::{Error, Result};
use crate::la::{BlockVector, SylvesterOperator};
use crate::scalar::Scalar;

/// Largest `n·s` accepted by [`kron_solve`].
pub const KRON_LIMIT: usize = 4096;

/// `I_s ⊗ A + Bᵀ ⊗ I_n`, acting on the column-major `vec(X)`.
pub fn kron_matrix<T: Scalar>(op: &SylvesterOperator<T>) -> DenseMatrix<T> {
    let (n, s) = op.block_shape();
    let mut k = DenseMatrix::zeros(n * s, n * s);
    for j in 0..s {
        for (i, l, v) in op.a().triplets() {
            k[(i + j * n, l + j * n)] = k[(i + j * n, l + j * n)] + v;
        }
    }
    for (l, j, v) in op.b().triplets() {
        for i in 0..n {
            k[(i + j * n, i + l * n)] = k[(i + j * n, i + l * n)] + v;
        }
    }
    k
}

/// Dense reference solve of `AX + XB = C` through the Kronecker form.
pub fn kron_solve<T: Scalar>(op: &SylvesterOperator<T>, c: &BlockVector<T>) -> Result<BlockVector<T>> {
    op.check_block(c, "kron_solve")?;
    let (n, s) = op.block_shape();
    if n * s > KRON_LIMIT {
        return Err(Error::InvalidArgument(format!(
            "n*s = {} exceeds the dense reference limit {KRON_LIMIT}",
            n * s
        )));
    }
    let lu = Lu::factor(&kron_matrix(op))?;
    BlockVector::from_col_major(n, s, lu.solve_vec(c.as_slice()))
}
