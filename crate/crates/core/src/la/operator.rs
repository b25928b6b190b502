use crate::error::{shape_mismatch, Error, Result};
use crate::la::{BlockVector, SparseMatrix};
use crate::scalar::Scalar;

/// The Sylvester map `X ↦ AX + XB` for sparse `A` (n×n) and `B` (s×s).
#[derive(Clone, Debug)]
pub struct SylvesterOperator<T> {
    a: SparseMatrix<T>,
    b: SparseMatrix<T>,
}

impl<T: Scalar> SylvesterOperator<T> {
    pub fn new(a: SparseMatrix<T>, b: SparseMatrix<T>) -> Self {
        Self { a, b }
    }

    pub fn a(&self) -> &SparseMatrix<T> {
        &self.a
    }

    pub fn b(&self) -> &SparseMatrix<T> {
        &self.b
    }

    /// `(n, s)`: the shape of the blocks the operator acts on.
    pub fn block_shape(&self) -> (usize, usize) {
        (self.a.dim(), self.b.dim())
    }

    /// `‖A‖_F + ‖B‖_F`, the scale used by the Arnoldi relation checks.
    pub fn norm_scale(&self) -> T {
        self.a.frobenius_norm() + self.b.frobenius_norm()
    }

    pub fn check_block(&self, x: &BlockVector<T>, context: &'static str) -> Result<()> {
        if x.shape() != self.block_shape() {
            return Err(shape_mismatch(context, self.block_shape(), x.shape()));
        }
        Ok(())
    }

    /// `AX + XB`.
    pub fn apply(&self, x: &BlockVector<T>) -> Result<BlockVector<T>> {
        self.check_block(x, "apply_sylvester")?;
        let mut out = BlockVector::zeros(x.rows(), x.cols());
        self.apply_into(x, &mut out);
        Ok(out)
    }

    /// Shape-unchecked kernel; `out` is overwritten.
    pub(crate) fn apply_into(&self, x: &BlockVector<T>, out: &mut BlockVector<T>) {
        let s = x.cols();
        for j in 0..s {
            self.a.mul_vec_into(x.col(j), out.col_mut(j));
        }
        // (XB)(:, j) = Σ_k X(:, k) B(k, j), walking B by rows.
        for k in 0..s {
            for (j, bkj) in self.b.row(k) {
                if bkj == T::zero() {
                    continue;
                }
                let dst = out.col_mut(j);
                for (d, &xv) in dst.iter_mut().zip(x.col(k)) {
                    *d = *d + bkj * xv;
                }
            }
        }
    }

    /// `C - AX - XB`.
    pub fn residual(&self, c: &BlockVector<T>, x: &BlockVector<T>) -> Result<BlockVector<T>> {
        self.check_block(c, "residual (rhs)")?;
        let ax = self.apply(x)?;
        c.sub(&ax)
    }
}

impl<T: Scalar> SylvesterOperator<T> {
    /// Validates that both factors are square and non-empty.
    pub fn try_new(a: SparseMatrix<T>, b: SparseMatrix<T>) -> Result<Self> {
        if a.dim() == 0 || b.dim() == 0 {
            return Err(Error::InvalidArgument(
                "operator factors must be non-empty".into(),
            ));
        }
        Ok(Self::new(a, b))
    }
}
