//! Weighted global Arnoldi process.
//!
//! Builds `𝒱_{m+1} = [V_1, …, V_{m+1}]` and `H̄_m` with
//! `𝒜𝒱_m = 𝒱_{m+1}(H̄_m ⊗ I_s)`, orthonormal in the weighted inner
//! product. After a deflated restart the retained prefix may have been
//! orthonormalized under an older weight; new blocks are then made
//! orthogonal to the whole prefix in the current weight, which keeps the
//! relation above exact while the basis is only orthonormal block-wise.

use crate::dense::{DenseMatrix, HessenbergMatrix, Lu};
use crate::error::{Error, Result};
use crate::la::{diamond_product, BlockBasis, BlockVector, SylvesterOperator, Weight};
use crate::scalar::Scalar;

#[derive(Clone, Debug)]
pub struct ArnoldiDecomposition<T> {
    basis: BlockBasis<T>,
    h: HessenbergMatrix<T>,
    steps: usize,
    weights: Vec<Weight<T>>,
    block_weight: Vec<usize>,
    breakdown: Option<usize>,
    hmax: T,
}

impl<T: Scalar> ArnoldiDecomposition<T> {
    /// A single normalized starting block, ready for [`arnoldi_extend`].
    pub fn start(v: &BlockVector<T>, w: &Weight<T>) -> Result<(Self, T)> {
        w.check_compatible(v.shape())?;
        let beta = w.norm_unchecked(v);
        if !(beta > T::zero()) || !beta.is_finite() {
            return Err(Error::InvalidArgument(
                "starting block must be nonzero and finite".into(),
            ));
        }
        let dec = Self {
            basis: BlockBasis::new(vec![v.scaled(T::one() / beta)])?,
            h: HessenbergMatrix::zeros(0),
            steps: 0,
            weights: vec![w.clone()],
            block_weight: vec![0],
            breakdown: None,
            hmax: T::zero(),
        };
        Ok((dec, beta))
    }

    /// Wraps a restart prefix: `k+1` blocks orthonormal under `w` and the
    /// dense `(k+1) × k` matrix relating them.
    pub fn from_prefix(basis: BlockBasis<T>, w: Weight<T>, leading: &DenseMatrix<T>) -> Result<Self> {
        let k = leading.cols();
        if basis.len() != k + 1 || leading.rows() != k + 1 {
            return Err(Error::InvalidArgument(format!(
                "prefix of {} blocks does not match a {}x{} leading matrix",
                basis.len(),
                leading.rows(),
                k
            )));
        }
        w.check_compatible(basis.block_shape())?;
        let hmax = leading.max_abs();
        Ok(Self {
            block_weight: vec![0; basis.len()],
            basis,
            h: HessenbergMatrix::with_leading_block(leading, k)?,
            steps: k,
            weights: vec![w],
            breakdown: None,
            hmax,
        })
    }

    /// Number of computed columns of `H̄`.
    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn basis(&self) -> &BlockBasis<T> {
        &self.basis
    }

    /// `H̄` restricted to the computed columns: `(steps+1) × steps`.
    pub fn hbar(&self) -> HessenbergMatrix<T> {
        self.h.leading(self.steps)
    }

    /// 1-based step at which `h_{j+1,j}` vanished, if any. The basis then
    /// holds only `steps` blocks.
    pub fn breakdown(&self) -> Option<usize> {
        self.breakdown
    }

    /// Weight under which block `i` (0-based) was orthonormalized.
    pub fn block_weight(&self, i: usize) -> &Weight<T> {
        &self.weights[self.block_weight[i]]
    }

    /// Distinct weights, in order of first use.
    pub fn weights(&self) -> &[Weight<T>] {
        &self.weights
    }

    /// Weight of the most recently added block.
    pub fn current_weight(&self) -> &Weight<T> {
        let last = *self.block_weight.last().expect("basis is never empty");
        &self.weights[last]
    }

    /// Whether blocks were built under more than one weight.
    pub fn is_mixed(&self) -> bool {
        self.block_weight.iter().any(|&t| t != self.block_weight[0])
    }

    /// `weight_tag`: label of the weight of every block.
    pub fn weight_tags(&self) -> Vec<String> {
        self.block_weight
            .iter()
            .map(|&t| format!("{}#{}", self.weights[t].kind_name(), t))
            .collect()
    }

    /// Number of leading blocks orthonormalized under a different weight
    /// than the current one.
    pub fn foreign_prefix_len(&self) -> usize {
        let cur = *self.block_weight.last().expect("basis is never empty");
        self.block_weight.iter().take_while(|&&t| t != cur).count()
    }

    fn weight_index(&mut self, w: &Weight<T>) -> usize {
        match self.weights.iter().position(|x| x == w) {
            Some(i) => i,
            None => {
                self.weights.push(w.clone());
                self.weights.len() - 1
            }
        }
    }

    fn grow_h(&mut self, cols: usize) {
        if self.h.cols() >= cols {
            return;
        }
        let mut h = if self.h.lead() > 0 {
            let lead = self.h.lead();
            let block = self.h.to_dense().top_left(lead + 1, lead);
            HessenbergMatrix::with_leading_block(&block, cols).expect("lead fits")
        } else {
            HessenbergMatrix::zeros(cols)
        };
        for j in self.h.lead()..self.steps {
            for i in 0..=self.h.last_row(j) {
                h.set(i, j, self.h.get(i, j));
            }
        }
        self.h = h;
    }
}

/// Runs `m` steps from the starting block `v`.
pub fn arnoldi_run<T: Scalar>(
    op: &SylvesterOperator<T>,
    v: &BlockVector<T>,
    w: &Weight<T>,
    m: usize,
) -> Result<ArnoldiDecomposition<T>> {
    op.check_block(v, "arnoldi_run")?;
    if m == 0 {
        return Err(Error::InvalidArgument("Arnoldi step count must be >= 1".into()));
    }
    let (dec, _beta) = ArnoldiDecomposition::start(v, w)?;
    arnoldi_extend(dec, op, w, 1, m)
}

/// Continues the process from the `from_j`-th block (1-based) up to column
/// `to_m`, orthogonalizing new blocks under `w` against every existing
/// block.
pub fn arnoldi_extend<T: Scalar>(
    mut dec: ArnoldiDecomposition<T>,
    op: &SylvesterOperator<T>,
    w: &Weight<T>,
    from_j: usize,
    to_m: usize,
) -> Result<ArnoldiDecomposition<T>> {
    if from_j == 0 || from_j > to_m {
        return Err(Error::InvalidArgument(format!(
            "invalid continuation range {from_j}..={to_m}"
        )));
    }
    if dec.breakdown.is_some() {
        return Err(Error::InvalidArgument(
            "cannot extend a decomposition that broke down".into(),
        ));
    }
    if dec.basis.len() != from_j || dec.steps + 1 != from_j {
        return Err(Error::InvalidArgument(format!(
            "decomposition holds {} blocks and {} columns; cannot continue from block {from_j}",
            dec.basis.len(),
            dec.steps
        )));
    }
    op.check_block(dec.basis.get(0), "arnoldi_extend")?;
    w.check_compatible(op.block_shape())?;

    let tag = dec.weight_index(w);
    dec.grow_h(to_m);

    // Blocks built under another weight are not orthonormal under `w`;
    // project against them through their Gram matrix.
    let foreign: Vec<usize> = (0..dec.basis.len())
        .filter(|&i| dec.block_weight[i] != tag)
        .collect();
    let foreign_lu = if foreign.is_empty() {
        None
    } else {
        let fb = BlockBasis::new(foreign.iter().map(|&i| dec.basis.get(i).clone()).collect())?;
        let gram = diamond_product(&fb, &fb, w)?;
        Some(Lu::factor(&gram)?)
    };

    let (n, s) = op.block_shape();
    let breakdown_tol = T::tol(1e-14);
    let reorth = T::one() / T::lit(2.0).sqrt();
    let mut work = BlockVector::zeros(n, s);
    for j in from_j..=to_m {
        let col = j - 1;
        op.apply_into(dec.basis.get(col), &mut work);
        let mut coeffs = vec![T::zero(); j];
        for pass in 0..2 {
            let before = w.norm_unchecked(&work);
            if let Some(lu) = &foreign_lu {
                let rhs: Vec<T> = foreign
                    .iter()
                    .map(|&i| w.inner_unchecked(&work, dec.basis.get(i)))
                    .collect();
                let alpha = lu.solve_vec(&rhs);
                for (&i, &a) in foreign.iter().zip(&alpha) {
                    coeffs[i] = coeffs[i] + a;
                    work.axpy(-a, dec.basis.get(i))?;
                }
            }
            for i in 0..j {
                if dec.block_weight[i] != tag {
                    continue;
                }
                let hij = w.inner_unchecked(&work, dec.basis.get(i));
                coeffs[i] = coeffs[i] + hij;
                work.axpy(-hij, dec.basis.get(i))?;
            }
            let after = w.norm_unchecked(&work);
            if pass == 0 && after >= reorth * before {
                break;
            }
        }
        for (i, &c) in coeffs.iter().enumerate() {
            dec.h.add(i, col, c);
            dec.hmax = dec.hmax.max(c.abs());
        }
        let hnext = w.norm_unchecked(&work);
        dec.h.set(j, col, hnext);
        dec.steps = j;
        if hnext <= breakdown_tol * dec.hmax.max(T::one()) {
            dec.breakdown = Some(j);
            break;
        }
        dec.hmax = dec.hmax.max(hnext);
        dec.basis.push(work.scaled(T::one() / hnext))?;
        dec.block_weight.push(tag);
    }
    Ok(dec)
}
