//! Assembly of the deflated restart subspace.

use crate::arnoldi::ArnoldiDecomposition;
use crate::dense::{dot, reduced_qr, DenseMatrix};
use crate::error::{Error, Result};
use crate::la::{basis_combine, diamond_product, BlockBasis, SylvesterOperator, Weight};
use crate::scalar::Scalar;
use crate::solver::harmonic::HarmonicSet;

/// Output of [`restart_subspace`].
#[derive(Clone, Debug)]
pub struct RestartSubspace<T> {
    /// `k + 1` blocks, orthonormal under `weight`.
    pub basis: BlockBasis<T>,
    /// Dense `(k + 1) × k` matrix with `𝒜𝒱ₖ = 𝒱ₖ₊₁ (H ⊗ I_s)`.
    pub h: DenseMatrix<T>,
    /// `(m + 1) × (k + 1)` coefficients of the new blocks in the old basis.
    pub q: DenseMatrix<T>,
    /// Weight of the finished cycle.
    pub weight: Weight<T>,
    /// Coordinates of the finished cycle's residual in `basis`.
    pub residual_coords: Vec<T>,
}

impl<T: Scalar> RestartSubspace<T> {
    /// Number of retained harmonic blocks.
    pub fn k(&self) -> usize {
        self.basis.len() - 1
    }
}

/// Inner product on coefficient vectors: Euclidean, or `xᵀ G y` when the
/// basis is only block-wise orthonormal.
struct Metric<T> {
    gram: Option<DenseMatrix<T>>,
}

impl<T: Scalar> Metric<T> {
    fn inner(&self, x: &[T], y: &[T]) -> T {
        match &self.gram {
            None => dot(x, y),
            Some(g) => dot(x, &g.matvec(y)),
        }
    }

    fn norm(&self, x: &[T]) -> T {
        self.inner(x, x).max(T::zero()).sqrt()
    }

    /// Removes the components of `v` along the orthonormal columns `qs`,
    /// two passes.
    fn project_out(&self, v: &mut [T], qs: &[Vec<T>]) {
        for _ in 0..2 {
            for q in qs {
                let a = self.inner(v, q);
                v.iter_mut().zip(q).for_each(|(x, &qi)| *x = *x - a * qi);
            }
        }
    }
}

/// Builds `𝒱^new_{k+1}` and `H̄^new_k` from the harmonic vectors of the
/// finished cycle and its small least-squares residual `r = c − H̄y`.
///
/// When the finished cycle used a single weight the coefficient metric is
/// Euclidean and `Q_{k+1}` is orthonormal. After a mixed cycle the old
/// basis is not orthonormal under the current weight, so `Q_{k+1}` is made
/// orthonormal in the Gram metric `G = 𝒱ᵀ ⋄_D 𝒱` instead and the new
/// matrix is `Q_{k+1}ᵀ G H̄ Q_k`.
pub fn restart_subspace<T: Scalar>(
    dec: &ArnoldiDecomposition<T>,
    hs: &HarmonicSet<T>,
    r: &[T],
) -> Result<RestartSubspace<T>> {
    let m = dec.steps();
    if dec.breakdown().is_some() || dec.basis().len() != m + 1 {
        return Err(Error::Deflation("decomposition is incomplete".into()));
    }
    if r.len() != m + 1 || hs.g_real.rows() != m {
        return Err(Error::DimensionMismatch {
            context: "restart_subspace",
            expected: format!("residual of length {} and {m}-row G", m + 1),
            found: format!("{} and {}", r.len(), hs.g_real.rows()),
        });
    }
    if hs.k_effective == 0 {
        return Err(Error::Deflation("no harmonic vectors retained".into()));
    }
    let weight = dec.current_weight().clone();
    let metric = Metric {
        gram: if dec.is_mixed() {
            Some(diamond_product(dec.basis(), dec.basis(), &weight)?)
        } else {
            None
        },
    };

    let pad = |v: &[T]| {
        let mut out = v.to_vec();
        out.push(T::zero());
        out
    };
    let mut qs: Vec<Vec<T>> = Vec::new();
    if metric.gram.is_none() {
        let qr = reduced_qr(&hs.g_real);
        for j in 0..qr.q.cols() {
            qs.push(pad(qr.q.col(j)));
        }
    } else {
        let cols: Vec<Vec<T>> = (0..hs.g_real.cols()).map(|j| pad(hs.g_real.col(j))).collect();
        let biggest = cols.iter().map(|c| metric.norm(c)).fold(T::zero(), T::max);
        for mut v in cols {
            metric.project_out(&mut v, &qs);
            let nv = metric.norm(&v);
            if nv > T::tol(1e-12) * biggest {
                v.iter_mut().for_each(|x| *x = *x / nv);
                qs.push(v);
            }
        }
    }
    if qs.is_empty() {
        return Err(Error::Deflation("harmonic vectors are numerically dependent".into()));
    }

    let mut last = r.to_vec();
    let r_norm = metric.norm(r);
    metric.project_out(&mut last, &qs);
    let rest = metric.norm(&last);
    if !(rest > T::tol(1e-12) * r_norm) {
        return Err(Error::Deflation(
            "least-squares residual lies in the harmonic subspace".into(),
        ));
    }
    last.iter_mut().for_each(|x| *x = *x / rest);
    qs.push(last);

    let k = qs.len() - 1;
    let q = DenseMatrix::from_fn(m + 1, k + 1, |i, j| qs[j][i]);
    let hbar = dec.hbar().to_dense();
    let qk = DenseMatrix::from_fn(m, k, |i, j| q[(i, j)]);
    let hq = hbar.matmul(&qk);
    let lhs = match &metric.gram {
        None => q.transpose(),
        Some(g) => q.transpose().matmul(g),
    };
    let h = lhs.matmul(&hq);

    let residual_coords = qs.iter().map(|q| metric.inner(q, r)).collect();
    let blocks = (0..=k)
        .map(|j| basis_combine(dec.basis(), q.col(j)))
        .collect::<Result<Vec<_>>>()?;
    Ok(RestartSubspace {
        basis: BlockBasis::new(blocks)?,
        h,
        q,
        weight,
        residual_coords,
    })
}

/// `‖𝒜𝒱ₖ − 𝒱ₖ₊₁(H ⊗ I_s)‖_F / ‖𝒜𝒱ₖ‖_F` for a restart subspace, evaluated
/// directly from the blocks.
pub fn restart_relation_residual<T: Scalar>(
    op: &SylvesterOperator<T>,
    rs: &RestartSubspace<T>,
) -> Result<T> {
    let k = rs.k();
    let mut num = T::zero();
    let mut den = T::zero();
    for j in 0..k {
        let av = op.apply(rs.basis.get(j))?;
        den = den + av.frobenius_norm().powi(2);
        let coeffs: Vec<T> = (0..=k).map(|i| rs.h[(i, j)]).collect();
        let diff = av.sub(&basis_combine(&rs.basis, &coeffs)?)?;
        num = num + diff.frobenius_norm().powi(2);
    }
    if den == T::zero() {
        return Ok(num.sqrt());
    }
    Ok((num / den).sqrt())
}
