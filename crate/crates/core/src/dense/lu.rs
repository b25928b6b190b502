use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// LU factorization with partial pivoting, `P·A = L·U`.
#[derive(Clone, Debug)]
pub struct Lu<T> {
    lu: DenseMatrix<T>,
    perm: Vec<usize>,
}

impl<T: Scalar> Lu<T> {
    /// Factors `mat`; a pivot at or below `1e-14·‖mat‖_∞` is reported singular.
    pub fn factor(mat: &DenseMatrix<T>) -> Result<Self> {
        let n = mat.rows();
        if n != mat.cols() {
            return Err(Error::InvalidArgument(format!(
                "LU needs a square matrix, got {}x{}",
                n,
                mat.cols()
            )));
        }
        let threshold = T::tol(1e-14) * mat.norm_inf();
        let mut lu = mat.clone();
        let mut perm: Vec<usize> = (0..n).collect();
        for k in 0..n {
            let (p, pmax) = (k..n)
                .map(|i| (i, lu[(i, k)].abs()))
                .fold((k, -T::one()), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(pmax > threshold) {
                return Err(Error::Singular {
                    step: k,
                    pivot: pmax.to_f64_lossy(),
                });
            }
            if p != k {
                perm.swap(p, k);
                for j in 0..n {
                    let t = lu[(p, j)];
                    lu[(p, j)] = lu[(k, j)];
                    lu[(k, j)] = t;
                }
            }
            let pivot = lu[(k, k)];
            for i in k + 1..n {
                let l = lu[(i, k)] / pivot;
                lu[(i, k)] = l;
                if l != T::zero() {
                    for j in k + 1..n {
                        lu[(i, j)] = lu[(i, j)] - l * lu[(k, j)];
                    }
                }
            }
        }
        Ok(Self { lu, perm })
    }

    pub fn solve_vec(&self, b: &[T]) -> Vec<T> {
        let n = self.perm.len();
        let mut x: Vec<T> = self.perm.iter().map(|&p| b[p]).collect();
        for i in 0..n {
            let mut acc = x[i];
            for j in 0..i {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc;
        }
        for i in (0..n).rev() {
            let mut acc = x[i];
            for j in i + 1..n {
                acc = acc - self.lu[(i, j)] * x[j];
            }
            x[i] = acc / self.lu[(i, i)];
        }
        x
    }

    /// Solves `Aᵀ x = b`.
    pub fn solve_transpose_vec(&self, b: &[T]) -> Vec<T> {
        // Aᵀ = Uᵀ Lᵀ P, so solve Uᵀ w = b, Lᵀ v = w, x = Pᵀ v.
        let n = self.perm.len();
        let mut w = b.to_vec();
        for i in 0..n {
            let mut acc = w[i];
            for j in 0..i {
                acc = acc - self.lu[(j, i)] * w[j];
            }
            w[i] = acc / self.lu[(i, i)];
        }
        for i in (0..n).rev() {
            let mut acc = w[i];
            for j in i + 1..n {
                acc = acc - self.lu[(j, i)] * w[j];
            }
            w[i] = acc;
        }
        let mut x = vec![T::zero(); n];
        for (k, &p) in self.perm.iter().enumerate() {
            x[p] = w[k];
        }
        x
    }
}

/// Solves `mat · X = rhs` by partial-pivoted elimination.
pub fn small_solve<T: Scalar>(mat: &DenseMatrix<T>, rhs: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    if rhs.rows() != mat.rows() {
        return Err(Error::DimensionMismatch {
            context: "small_solve",
            expected: format!("{} rhs rows", mat.rows()),
            found: format!("{} rhs rows", rhs.rows()),
        });
    }
    let lu = Lu::factor(mat)?;
    let mut out = DenseMatrix::zeros(rhs.rows(), rhs.cols());
    for j in 0..rhs.cols() {
        out.col_mut(j).copy_from_slice(&lu.solve_vec(rhs.col(j)));
    }
    Ok(out)
}
