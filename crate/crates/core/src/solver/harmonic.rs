//! Harmonic Ritz extraction from `H̄_m` and preparation of the real
//! deflation block `G_k`.

use num_complex::Complex;

use crate::dense::{reduced_qr, small_eig, small_solve, DenseMatrix, EigenPair, EigenPairSet, HessenbergMatrix, Lu};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Harmonic Ritz pairs `(θ, g)` of `H̄`, sorted by ascending `|θ|`.
///
/// When `H_m` is nonsingular these are the eigenpairs of
/// `H_m + h²_{m+1,m} H_m^{-T} e_m e_mᵀ`; otherwise the pencil
/// `θ H_mᵀ g = H̄ᵀH̄ g` is solved through `(H̄ᵀH̄)^{-1} H_mᵀ`, whose zero
/// eigenvalues (infinite `θ`) are discarded.
pub fn harmonic_pairs<T: Scalar>(h: &HessenbergMatrix<T>) -> Result<EigenPairSet<T>> {
    let m = h.cols();
    if m == 0 {
        return Err(Error::InvalidArgument("empty projected matrix".into()));
    }
    let hm = h.square();
    match Lu::factor(&hm) {
        Ok(lu) => {
            let mut em = vec![T::zero(); m];
            em[m - 1] = T::one();
            let z = lu.solve_transpose_vec(&em);
            let beta = h.get(m, m - 1);
            let mut mat = hm;
            for (i, &zi) in z.iter().enumerate() {
                mat[(i, m - 1)] = mat[(i, m - 1)] + beta * beta * zi;
            }
            Ok(small_eig(&mat)?.sorted_by_magnitude())
        }
        Err(Error::Singular { .. }) => pencil_fallback(h),
        Err(e) => Err(e),
    }
}

fn pencil_fallback<T: Scalar>(h: &HessenbergMatrix<T>) -> Result<EigenPairSet<T>> {
    let hbar = h.to_dense();
    let normal = hbar.transpose().matmul(&hbar);
    let k = small_solve(&normal, &h.square().transpose())?;
    let set = small_eig(&k)?;
    let cutoff = T::tol(1e-14) * k.norm_inf().max(T::min_positive_value());
    let pairs: Vec<EigenPair<T>> = set
        .pairs
        .into_iter()
        .filter(|p| p.value.norm() > cutoff)
        .map(|p| EigenPair {
            value: Complex::new(T::one(), T::zero()) / p.value,
            vector: p.vector,
        })
        .collect();
    if pairs.is_empty() {
        return Err(Error::Deflation("all harmonic values are infinite".into()));
    }
    Ok(EigenPairSet::new(pairs).sorted_by_magnitude())
}

/// Residual of the harmonic pencil, `‖H̄ᵀH̄ g − θ H_mᵀ g‖₂`.
pub fn harmonic_residual<T: Scalar>(h: &HessenbergMatrix<T>, pair: &EigenPair<T>) -> T {
    let hbar = h.to_dense();
    let normal = hbar.transpose().matmul(&hbar);
    let hmt = h.square().transpose();
    let m = h.cols();
    (0..m)
        .map(|i| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                acc = acc + pair.vector[j] * normal[(i, j)] - pair.value * pair.vector[j] * hmt[(i, j)];
            }
            acc.norm_sqr()
        })
        .sum::<T>()
        .sqrt()
}

/// The selected harmonic pairs and the real matrix spanning their vectors.
#[derive(Clone, Debug)]
pub struct HarmonicSet<T> {
    pub pairs: Vec<EigenPair<T>>,
    /// `m × k'`, full column rank.
    pub g_real: DenseMatrix<T>,
    pub k_effective: usize,
}

/// Chooses the `k` smallest-magnitude pairs and splits complex vectors into
/// real and imaginary parts.
///
/// A conjugate pair cut by the selection boundary is taken whole, which
/// adds one column; if that would exceed `max_cols` the pair is left out.
pub fn select_and_realify<T: Scalar>(pairs: &EigenPairSet<T>, k: usize, max_cols: usize) -> HarmonicSet<T> {
    let sorted = pairs.sorted_by_magnitude();
    let m = sorted.pairs.first().map_or(0, |p| p.vector.len());
    let mut cols: Vec<Vec<T>> = Vec::new();
    let mut chosen = Vec::new();
    let mut i = 0;
    while i < sorted.len() && cols.len() < k {
        let p = &sorted.pairs[i];
        if p.vector.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            i += 1;
            continue;
        }
        if p.is_real() {
            cols.push(p.vector.iter().map(|z| z.re).collect());
            chosen.push(p.clone());
            i += 1;
            continue;
        }
        let partner = sorted
            .pairs
            .get(i + 1)
            .filter(|q| q.value == p.value.conj())
            .cloned();
        if cols.len() + 2 > max_cols {
            break;
        }
        cols.push(p.vector.iter().map(|z| z.re).collect());
        cols.push(p.vector.iter().map(|z| z.im).collect());
        chosen.push(p.clone());
        if let Some(q) = partner {
            chosen.push(q);
            i += 2;
        } else {
            i += 1;
        }
    }
    let g = DenseMatrix::from_fn(m, cols.len(), |r, c| cols[c][r]);
    let qr = reduced_qr(&g);
    let g_real = g.select_cols(&qr.kept);
    HarmonicSet {
        pairs: chosen,
        k_effective: g_real.cols(),
        g_real,
    }
}

/// Largest departure from collinearity between the harmonic residuals
/// `(H̄ − θ_i Ī) g_i` and the least-squares residual `c − H̄ y`, measured as
/// `1 − |cos ∠|`. Real and imaginary parts of complex residuals are
/// checked separately; numerically zero vectors count as collinear.
pub fn collinearity_check<T: Scalar>(
    h: &HessenbergMatrix<T>,
    pairs: &[EigenPair<T>],
    y: &[T],
    c: &[T],
) -> T {
    let m = h.cols();
    let hbar = h.to_dense();
    let hy = hbar.matvec(y);
    let r: Vec<T> = c.iter().zip(&hy).map(|(&a, &b)| a - b).collect();
    let scale = h.frobenius_norm().max(T::min_positive_value());
    let r_norm = crate::dense::norm2(&r);
    if r_norm <= T::tol(1e-14) * scale * crate::dense::norm2(y).max(T::one()) {
        return T::zero();
    }
    let mut worst = T::zero();
    for p in pairs {
        let mut re = vec![T::zero(); m + 1];
        let mut im = vec![T::zero(); m + 1];
        for i in 0..=m {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..m {
                acc = acc + p.vector[j] * hbar[(i, j)];
            }
            if i < m {
                acc = acc - p.value * p.vector[i];
            }
            re[i] = acc.re;
            im[i] = acc.im;
        }
        for part in [&re, &im] {
            let pn = crate::dense::norm2(part);
            if pn <= T::tol(1e-10) * scale {
                continue;
            }
            let cos = crate::dense::dot(part, &r).abs() / (pn * r_norm);
            worst = worst.max(T::one() - cos.min(T::one()));
        }
    }
    worst
}
