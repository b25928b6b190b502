use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Square sparse matrix in compressed sparse row form.
///
/// Column indices are strictly increasing within each row and the last
/// row offset equals the number of stored values.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<T> {
    dim: usize,
    row_offsets: Vec<usize>,
    col_indices: Vec<usize>,
    values: Vec<T>,
}

impl<T: Scalar> SparseMatrix<T> {
    /// Validates raw CSR arrays.
    pub fn from_csr(
        dim: usize,
        row_offsets: Vec<usize>,
        col_indices: Vec<usize>,
        values: Vec<T>,
    ) -> Result<Self> {
        if row_offsets.len() != dim + 1 || row_offsets[0] != 0 {
            return Err(Error::InvalidArgument(format!(
                "row offsets must have length {} and start at 0",
                dim + 1
            )));
        }
        if col_indices.len() != values.len() || row_offsets[dim] != values.len() {
            return Err(Error::InvalidArgument(
                "last row offset must equal the number of stored values".into(),
            ));
        }
        for i in 0..dim {
            let (lo, hi) = (row_offsets[i], row_offsets[i + 1]);
            if lo > hi {
                return Err(Error::InvalidArgument(format!(
                    "row offsets decrease at row {i}"
                )));
            }
            let cols = &col_indices[lo..hi];
            if cols.iter().any(|&c| c >= dim) {
                return Err(Error::InvalidArgument(format!(
                    "column index out of range in row {i}"
                )));
            }
            if cols.windows(2).any(|w| w[0] >= w[1]) {
                return Err(Error::InvalidArgument(format!(
                    "column indices not strictly increasing in row {i}"
                )));
            }
        }
        Ok(Self {
            dim,
            row_offsets,
            col_indices,
            values,
        })
    }

    /// Assembles from `(row, col, value)` triplets; duplicates are summed.
    pub fn from_triplets(dim: usize, triplets: &[(usize, usize, T)]) -> Result<Self> {
        let mut sorted: Vec<(usize, usize, T)> = Vec::with_capacity(triplets.len());
        for &(i, j, v) in triplets {
            if i >= dim || j >= dim {
                return Err(Error::InvalidArgument(format!(
                    "entry ({i}, {j}) outside a {dim}x{dim} matrix"
                )));
            }
            sorted.push((i, j, v));
        }
        sorted.sort_by_key(|&(i, j, _)| (i, j));

        let mut row_offsets = vec![0usize; dim + 1];
        let mut col_indices = Vec::with_capacity(sorted.len());
        let mut values: Vec<T> = Vec::with_capacity(sorted.len());
        let mut last: Option<(usize, usize)> = None;
        for (i, j, v) in sorted {
            if last == Some((i, j)) {
                let tail = values.last_mut().expect("duplicate follows an entry");
                *tail = *tail + v;
                continue;
            }
            row_offsets[i + 1] += 1;
            col_indices.push(j);
            values.push(v);
            last = Some((i, j));
        }
        for i in 0..dim {
            row_offsets[i + 1] += row_offsets[i];
        }
        Self::from_csr(dim, row_offsets, col_indices, values)
    }

    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            row_offsets: (0..=dim).collect(),
            col_indices: (0..dim).collect(),
            values: vec![T::one(); dim],
        }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            row_offsets: vec![0; dim + 1],
            col_indices: Vec::new(),
            values: Vec::new(),
        }
    }

    pub fn from_diagonal(diag: &[T]) -> Self {
        let dim = diag.len();
        Self {
            dim,
            row_offsets: (0..=dim).collect(),
            col_indices: (0..dim).collect(),
            values: diag.to_vec(),
        }
    }

    /// Stores the nonzero entries of a row-major dense array.
    pub fn from_dense_row_major(dim: usize, dense: &[T]) -> Result<Self> {
        if dense.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} dense entries, got {}",
                dim * dim,
                dense.len()
            )));
        }
        let triplets: Vec<_> = (0..dim)
            .flat_map(|i| (0..dim).map(move |j| (i, j)))
            .filter(|&(i, j)| dense[i * dim + j] != T::zero())
            .map(|(i, j)| (i, j, dense[i * dim + j]))
            .collect();
        Self::from_triplets(dim, &triplets)
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    pub fn row_offsets(&self) -> &[usize] {
        &self.row_offsets
    }

    pub fn col_indices(&self) -> &[usize] {
        &self.col_indices
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    /// Stored entries of row `i` as `(col, value)` pairs.
    pub fn row(&self, i: usize) -> impl Iterator<Item = (usize, T)> + '_ {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        self.col_indices[lo..hi]
            .iter()
            .copied()
            .zip(self.values[lo..hi].iter().copied())
    }

    /// All stored entries in row-major order.
    pub fn triplets(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.dim).flat_map(move |i| self.row(i).map(move |(j, v)| (i, j, v)))
    }

    pub fn get(&self, i: usize, j: usize) -> T {
        let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
        match self.col_indices[lo..hi].binary_search(&j) {
            Ok(p) => self.values[lo + p],
            Err(_) => T::zero(),
        }
    }

    /// `y = self * x`.
    pub fn mul_vec_into(&self, x: &[T], y: &mut [T]) {
        debug_assert_eq!(x.len(), self.dim);
        debug_assert_eq!(y.len(), self.dim);
        for (i, yi) in y.iter_mut().enumerate() {
            let (lo, hi) = (self.row_offsets[i], self.row_offsets[i + 1]);
            *yi = self.col_indices[lo..hi]
                .iter()
                .zip(&self.values[lo..hi])
                .map(|(&j, &v)| v * x[j])
                .sum();
        }
    }

    pub fn frobenius_norm(&self) -> T {
        self.values.iter().map(|&v| v * v).sum::<T>().sqrt()
    }

    /// Dense row-major copy.
    pub fn to_dense_row_major(&self) -> Vec<T> {
        let mut out = vec![T::zero(); self.dim * self.dim];
        for (i, j, v) in self.triplets() {
            out[i * self.dim + j] = v;
        }
        out
    }

    pub fn is_symmetric(&self) -> bool {
        self.triplets().all(|(i, j, v)| self.get(j, i) == v)
    }
}
