use crate::dense::mat::{dot, norm2};
use crate::dense::DenseMatrix;
use crate::scalar::Scalar;

/// Thin QR factor pair `g ≈ q · gamma`.
#[derive(Clone, Debug)]
pub struct ReducedQr<T> {
    /// `m × k'` with orthonormal columns.
    pub q: DenseMatrix<T>,
    /// `k' × k`; upper triangular on the retained columns.
    pub gamma: DenseMatrix<T>,
    /// Indices of the input columns that produced a column of `q`.
    pub kept: Vec<usize>,
}

impl<T> ReducedQr<T> {
    pub fn rank(&self) -> usize {
        self.kept.len()
    }
}

/// Modified Gram–Schmidt with a second orthogonalization sweep.
///
/// A column whose remaining norm falls below `1e-12 · max_j ‖g(:, j)‖` is
/// treated as dependent and dropped; its coefficients against the retained
/// columns are still recorded in `gamma`.
pub fn reduced_qr<T: Scalar>(g: &DenseMatrix<T>) -> ReducedQr<T> {
    let (m, k) = (g.rows(), g.cols());
    let largest = (0..k).map(|j| norm2(g.col(j))).fold(T::zero(), T::max);
    let drop_tol = T::tol(1e-12) * largest;

    let mut qcols: Vec<Vec<T>> = Vec::with_capacity(k);
    let mut gamma = DenseMatrix::zeros(k, k);
    let mut kept = Vec::with_capacity(k);
    for j in 0..k {
        let mut v = g.col(j).to_vec();
        for _pass in 0..2 {
            for (i, q) in qcols.iter().enumerate() {
                let r = dot(q, &v);
                gamma[(i, j)] = gamma[(i, j)] + r;
                v.iter_mut().zip(q).for_each(|(a, &b)| *a = *a - r * b);
            }
        }
        let nrm = norm2(&v);
        if nrm > drop_tol && largest > T::zero() {
            let row = qcols.len();
            gamma[(row, j)] = nrm;
            v.iter_mut().for_each(|a| *a = *a / nrm);
            qcols.push(v);
            kept.push(j);
        }
    }
    let rank = qcols.len();
    let q = DenseMatrix::from_fn(m, rank, |i, j| qcols[j][i]);
    ReducedQr {
        q,
        gamma: gamma.top_left(rank, k),
        kept,
    }
}
