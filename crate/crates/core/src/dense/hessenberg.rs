use crate::dense::mat::norm2;
use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// `(m+1) × m` projected matrix `H̄_m`.
///
/// Column `j` may hold nonzeros in rows `0..=max(j+1, lead)`. With `lead = 0`
/// this is an ordinary upper Hessenberg matrix; after a deflated restart the
/// leading `(k+1) × k` block is dense and `lead = k`.
#[derive(Clone, Debug, PartialEq)]
pub struct HessenbergMatrix<T> {
    lead: usize,
    data: DenseMatrix<T>,
}

impl<T: Scalar> HessenbergMatrix<T> {
    pub fn zeros(cols: usize) -> Self {
        Self {
            lead: 0,
            data: DenseMatrix::zeros(cols + 1, cols),
        }
    }

    /// An `(m+1) × m` matrix whose first `k` columns are the dense `(k+1) × k`
    /// block `leading`; the remaining columns start at zero.
    pub fn with_leading_block(leading: &DenseMatrix<T>, cols: usize) -> Result<Self> {
        let k = leading.cols();
        if leading.rows() != k + 1 || k > cols {
            return Err(Error::InvalidArgument(format!(
                "leading block must be (k+1)xk with k <= {cols}, got {}x{}",
                leading.rows(),
                k
            )));
        }
        let mut h = Self {
            lead: k,
            data: DenseMatrix::zeros(cols + 1, cols),
        };
        for j in 0..k {
            for i in 0..=k {
                h.data[(i, j)] = leading[(i, j)];
            }
        }
        Ok(h)
    }

    /// Copies a dense `(m+1) × m` matrix, checking that it is upper Hessenberg.
    pub fn from_dense(dense: &DenseMatrix<T>) -> Result<Self> {
        let m = dense.cols();
        if dense.rows() != m + 1 {
            return Err(Error::InvalidArgument(format!(
                "expected (m+1)xm, got {}x{}",
                dense.rows(),
                m
            )));
        }
        for j in 0..m {
            for i in j + 2..=m {
                if dense[(i, j)] != T::zero() {
                    return Err(Error::InvalidArgument(format!(
                        "entry ({i}, {j}) below the first subdiagonal is nonzero"
                    )));
                }
            }
        }
        Ok(Self {
            lead: 0,
            data: dense.clone(),
        })
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.data.cols()
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.data.rows()
    }

    /// Width of the dense leading block (0 for a plain Hessenberg matrix).
    pub fn lead(&self) -> usize {
        self.lead
    }

    /// Last row index that may hold a nonzero in column `j`.
    #[inline]
    pub fn last_row(&self, j: usize) -> usize {
        (j + 1).max(if j < self.lead { self.lead } else { 0 })
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> T {
        self.data[(i, j)]
    }

    /// Sets an entry inside the structural pattern.
    ///
    /// # Panics
    /// If `(i, j)` lies in the structurally zero part.
    pub fn set(&mut self, i: usize, j: usize, v: T) {
        assert!(
            i <= self.last_row(j),
            "entry ({i}, {j}) is structurally zero"
        );
        self.data[(i, j)] = v;
    }

    pub(crate) fn add(&mut self, i: usize, j: usize, v: T) {
        let cur = self.get(i, j);
        self.set(i, j, cur + v);
    }

    /// `h_{j+1, j}` for 0-based `j`.
    pub fn subdiag(&self, j: usize) -> T {
        self.data[(j + 1, j)]
    }

    /// The leading `(j+1) × j` part.
    pub fn leading(&self, j: usize) -> Self {
        Self {
            lead: self.lead.min(j),
            data: self.data.top_left(j + 1, j),
        }
    }

    /// Dense `H̄_m`.
    pub fn to_dense(&self) -> DenseMatrix<T> {
        self.data.clone()
    }

    /// `H_m`: `H̄_m` without its last row.
    pub fn square(&self) -> DenseMatrix<T> {
        self.data.top_left(self.cols(), self.cols())
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.frobenius_norm()
    }
}

/// Solution of `min_y ‖c − H̄ y‖₂`.
#[derive(Clone, Debug)]
pub struct HessenbergLsq<T> {
    pub y: Vec<T>,
    /// `c − H̄ y`.
    pub r: Vec<T>,
    /// `‖r‖₂`.
    pub rho: T,
    /// Optimal residual of the leading `j`-column subproblem, `j = 1..=m`,
    /// read off the rotated right-hand side.
    pub step_rho: Vec<T>,
    /// Set when a rotated diagonal entry vanished and the minimum-norm
    /// solution was computed instead.
    pub degenerate: bool,
}

/// Least squares on `H̄` by plane rotations.
///
/// Each column is reduced bottom-up, so the dense leading block produced
/// by a deflated restart is handled by the same code path.
pub fn hessenberg_lsq<T: Scalar>(h: &HessenbergMatrix<T>, c: &[T]) -> Result<HessenbergLsq<T>> {
    let m = h.cols();
    if c.len() != m + 1 {
        return Err(Error::DimensionMismatch {
            context: "hessenberg_lsq",
            expected: format!("length {}", m + 1),
            found: format!("length {}", c.len()),
        });
    }
    let mut r = h.to_dense();
    let mut g = c.to_vec();
    let hnorm = h.frobenius_norm();
    let threshold = T::tol(1e-14) * hnorm;
    let mut step_rho = Vec::with_capacity(m);
    let mut rotations = Vec::with_capacity(m);
    let mut degenerate = hnorm == T::zero();

    for j in 0..m {
        let last = h.last_row(j);
        for i in (j + 1..=last).rev() {
            let (a, b) = (r[(i - 1, j)], r[(i, j)]);
            if b == T::zero() {
                continue;
            }
            let (cs, sn) = givens(a, b);
            for col in j..m {
                let (u, v) = (r[(i - 1, col)], r[(i, col)]);
                r[(i - 1, col)] = cs * u + sn * v;
                r[(i, col)] = -sn * u + cs * v;
            }
            let (u, v) = (g[i - 1], g[i]);
            g[i - 1] = cs * u + sn * v;
            g[i] = -sn * u + cs * v;
            rotations.push((i, cs, sn));
        }
        if !(r[(j, j)].abs() > threshold) {
            degenerate = true;
        }
        // Later rotations only mix rows below j, so this is already the
        // optimal residual of the (j+1)-column subproblem.
        step_rho.push(norm2(&g[j + 1..]));
    }

    let y = if degenerate {
        min_norm_lsq(&h.to_dense(), c)
    } else {
        let mut y = vec![T::zero(); m];
        for i in (0..m).rev() {
            let mut acc = g[i];
            for k in i + 1..m {
                acc = acc - r[(i, k)] * y[k];
            }
            y[i] = acc / r[(i, i)];
        }
        y
    };

    let resid = if degenerate {
        let hy = h.to_dense().matvec(&y);
        c.iter().zip(&hy).map(|(&a, &b)| a - b).collect()
    } else {
        // Undo the rotations on the last rotated entry alone: this keeps the
        // direction of the residual accurate even when it is many orders of
        // magnitude smaller than c.
        let mut e = vec![T::zero(); m + 1];
        e[m] = g[m];
        for &(i, cs, sn) in rotations.iter().rev() {
            let (u, v) = (e[i - 1], e[i]);
            e[i - 1] = cs * u - sn * v;
            e[i] = sn * u + cs * v;
        }
        e
    };
    let rho = norm2(&resid);
    Ok(HessenbergLsq {
        y,
        r: resid,
        rho,
        step_rho,
        degenerate,
    })
}

/// Plane rotation `(c, s)` with `[c s; -s c]·[a; b] = [ρ; 0]`.
pub(crate) fn givens<T: Scalar>(a: T, b: T) -> (T, T) {
    if b == T::zero() {
        return (T::one(), T::zero());
    }
    let rho = a.hypot(b);
    (a / rho, b / rho)
}

/// Minimum-norm least squares through a one-sided Jacobi SVD of `a`.
fn min_norm_lsq<T: Scalar>(a: &DenseMatrix<T>, c: &[T]) -> Vec<T> {
    let (rows, n) = (a.rows(), a.cols());
    let mut u = a.clone();
    let mut v = DenseMatrix::<T>::identity(n);
    let eps = T::epsilon();
    for _sweep in 0..60 {
        let mut rotated = false;
        for p in 0..n {
            for q in p + 1..n {
                let alpha: T = u.col(p).iter().map(|&x| x * x).sum();
                let beta: T = u.col(q).iter().map(|&x| x * x).sum();
                let gamma: T = u.col(p).iter().zip(u.col(q)).map(|(&x, &y)| x * y).sum();
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (T::lit(2.0) * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = cs * t;
                for i in 0..rows {
                    let (x, y) = (u[(i, p)], u[(i, q)]);
                    u[(i, p)] = cs * x - sn * y;
                    u[(i, q)] = sn * x + cs * y;
                }
                for i in 0..n {
                    let (x, y) = (v[(i, p)], v[(i, q)]);
                    v[(i, p)] = cs * x - sn * y;
                    v[(i, q)] = sn * x + cs * y;
                }
            }
        }
        if !rotated {
            break;
        }
    }
    let sigma: Vec<T> = (0..n).map(|j| norm2(u.col(j))).collect();
    let smax = sigma.iter().copied().fold(T::zero(), T::max);
    let cutoff = T::tol(1e-14) * smax * T::from_usize(rows.max(n)).unwrap_or(T::one());
    let mut y = vec![T::zero(); n];
    for j in 0..n {
        if sigma[j] > cutoff {
            // u(:, j) = σ_j · left singular vector
            let coef: T = u.col(j).iter().zip(c).map(|(&x, &ci)| x * ci).sum::<T>()
                / (sigma[j] * sigma[j]);
            for i in 0..n {
                y[i] = y[i] + coef * v[(i, j)];
            }
        }
    }
    y
}
