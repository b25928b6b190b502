use crate::error::{shape_mismatch, Error, Result};
use crate::la::BlockVector;
use crate::scalar::Scalar;

/// Ordered sequence of equally shaped blocks `[V_1, …, V_m]`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct BlockBasis<T> {
    blocks: Vec<BlockVector<T>>,
}

impl<T: Scalar> BlockBasis<T> {
    pub fn new(blocks: Vec<BlockVector<T>>) -> Result<Self> {
        if let Some(first) = blocks.first() {
            if let Some(bad) = blocks.iter().find(|b| b.shape() != first.shape()) {
                return Err(shape_mismatch("BlockBasis", first.shape(), bad.shape()));
            }
        }
        Ok(Self { blocks })
    }

    pub fn empty() -> Self {
        Self { blocks: Vec::new() }
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Shape of each block, `(0, 0)` when empty.
    pub fn block_shape(&self) -> (usize, usize) {
        self.blocks.first().map_or((0, 0), |b| b.shape())
    }

    pub fn blocks(&self) -> &[BlockVector<T>] {
        &self.blocks
    }

    pub fn get(&self, i: usize) -> &BlockVector<T> {
        &self.blocks[i]
    }

    pub fn push(&mut self, block: BlockVector<T>) -> Result<()> {
        if !self.blocks.is_empty() && block.shape() != self.block_shape() {
            return Err(shape_mismatch("BlockBasis::push", self.block_shape(), block.shape()));
        }
        self.blocks.push(block);
        Ok(())
    }

    /// The first `len` blocks.
    pub fn prefix(&self, len: usize) -> Self {
        Self {
            blocks: self.blocks[..len].to_vec(),
        }
    }

    pub fn into_blocks(self) -> Vec<BlockVector<T>> {
        self.blocks
    }
}

/// `Σ_i coeffs_i · V_i`, i.e. `𝒱 (y ⊗ I_s)`.
pub fn basis_combine<T: Scalar>(basis: &BlockBasis<T>, coeffs: &[T]) -> Result<BlockVector<T>> {
    if coeffs.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            context: "basis_combine",
            expected: format!("{} coefficients", basis.len()),
            found: format!("{} coefficients", coeffs.len()),
        });
    }
    if basis.is_empty() {
        return Err(Error::InvalidArgument("cannot combine an empty basis".into()));
    }
    let (n, s) = basis.block_shape();
    let mut out = BlockVector::zeros(n, s);
    for (block, &c) in basis.blocks().iter().zip(coeffs) {
        if c != T::zero() {
            out.axpy(c, block)?;
        }
    }
    Ok(out)
}
