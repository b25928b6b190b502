//! Weighted inner products on `n × s` blocks.
//!
//! A diagonal weight `D = diag(d)` gives `(Y, Z)_D = trace(Zᵀ D Y)`; the
//! elementwise variant `W` gives `trace(Zᵀ (W ∘ Y))`. Both reduce to the
//! Frobenius product when the weight is the identity.

use crate::dense::DenseMatrix;
use crate::error::{shape_mismatch, Error, Result};
use crate::la::{BlockBasis, BlockVector};
use crate::scalar::Scalar;

/// Inner-product weight. Entries are validated positive and finite at
/// construction.
#[derive(Clone, Debug, PartialEq)]
pub enum Weight<T> {
    Identity,
    Diagonal(Vec<T>),
    Elementwise(BlockVector<T>),
}

impl<T: Scalar> Weight<T> {
    pub fn diagonal(d: Vec<T>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::NonPositiveWeight("empty diagonal".into()));
        }
        if let Some(i) = d.iter().position(|&v| !(v > T::zero()) || !v.is_finite()) {
            return Err(Error::NonPositiveWeight(format!("d[{i}] = {}", d[i])));
        }
        Ok(Self::Diagonal(d))
    }

    pub fn elementwise(w: BlockVector<T>) -> Result<Self> {
        if let Some(p) = w
            .as_slice()
            .iter()
            .position(|&v| !(v > T::zero()) || !v.is_finite())
        {
            let (i, j) = (p % w.rows(), p / w.rows());
            return Err(Error::NonPositiveWeight(format!(
                "w[{i}, {j}] = {}",
                w.as_slice()[p]
            )));
        }
        Ok(Self::Elementwise(w))
    }

    pub fn is_identity(&self) -> bool {
        matches!(self, Self::Identity)
    }

    /// Short label used in reports.
    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Identity => "identity",
            Self::Diagonal(_) => "diagonal",
            Self::Elementwise(_) => "elementwise",
        }
    }

    pub fn check_compatible(&self, shape: (usize, usize)) -> Result<()> {
        match self {
            Self::Identity => Ok(()),
            Self::Diagonal(d) if d.len() == shape.0 => Ok(()),
            Self::Diagonal(d) => Err(Error::DimensionMismatch {
                context: "diagonal weight",
                expected: format!("length {}", shape.0),
                found: format!("length {}", d.len()),
            }),
            Self::Elementwise(w) if w.shape() == shape => Ok(()),
            Self::Elementwise(w) => Err(shape_mismatch("elementwise weight", shape, w.shape())),
        }
    }

    /// `(y, z)_w` without shape checks.
    pub(crate) fn inner_unchecked(&self, y: &BlockVector<T>, z: &BlockVector<T>) -> T {
        match self {
            Self::Identity => y
                .as_slice()
                .iter()
                .zip(z.as_slice())
                .map(|(&a, &b)| a * b)
                .sum(),
            Self::Diagonal(d) => (0..y.cols())
                .map(|j| {
                    y.col(j)
                        .iter()
                        .zip(z.col(j))
                        .zip(d)
                        .map(|((&a, &b), &di)| di * a * b)
                        .sum::<T>()
                })
                .sum(),
            Self::Elementwise(w) => y
                .as_slice()
                .iter()
                .zip(z.as_slice())
                .zip(w.as_slice())
                .map(|((&a, &b), &wi)| wi * a * b)
                .sum(),
        }
    }

    pub(crate) fn norm_unchecked(&self, y: &BlockVector<T>) -> T {
        self.inner_unchecked(y, y).max(T::zero()).sqrt()
    }
}

/// `(y, z)_w`: `trace(zᵀ D y)` or `trace(zᵀ (W ∘ y))`.
pub fn weighted_inner<T: Scalar>(y: &BlockVector<T>, z: &BlockVector<T>, w: &Weight<T>) -> Result<T> {
    y.check_same_shape(z, "weighted_inner")?;
    w.check_compatible(y.shape())?;
    Ok(w.inner_unchecked(y, z))
}

/// `‖y‖_w = sqrt((y, y)_w)`.
pub fn weighted_norm<T: Scalar>(y: &BlockVector<T>, w: &Weight<T>) -> Result<T> {
    w.check_compatible(y.shape())?;
    Ok(w.norm_unchecked(y))
}

/// The block Gram product `Uᵀ ⋄_w V` with entry `(i, j) = (U_i, V_j)_w`.
pub fn diamond_product<T: Scalar>(
    u: &BlockBasis<T>,
    v: &BlockBasis<T>,
    w: &Weight<T>,
) -> Result<DenseMatrix<T>> {
    if u.block_shape() != v.block_shape() && !u.is_empty() && !v.is_empty() {
        return Err(shape_mismatch(
            "diamond_product",
            u.block_shape(),
            v.block_shape(),
        ));
    }
    if let Some(first) = u.blocks().first() {
        w.check_compatible(first.shape())?;
    }
    Ok(DenseMatrix::from_fn(u.len(), v.len(), |i, j| {
        w.inner_unchecked(&u.blocks()[i], &v.blocks()[j])
    }))
}
