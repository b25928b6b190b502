//! Real nonsymmetric eigensolver for small dense matrices.
//!
//! Eigenvalues come from balancing, reduction to upper Hessenberg form by
//! stabilized elimination and the Francis double-shift QR iteration.
//! Eigenvectors are obtained afterwards by complex inverse iteration on the
//! original matrix, so balancing never has to be undone.

use num_complex::Complex;

use crate::dense::DenseMatrix;
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// One eigenpair with a unit 2-norm vector.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPair<T> {
    pub value: Complex<T>,
    pub vector: Vec<Complex<T>>,
}

impl<T: Scalar> EigenPair<T> {
    pub fn is_real(&self) -> bool {
        self.value.im == T::zero()
    }
}

/// Eigenpairs with conjugate pairs stored adjacently (positive imaginary
/// part first) and an ascending-magnitude ordering index.
#[derive(Clone, Debug, PartialEq)]
pub struct EigenPairSet<T> {
    pub pairs: Vec<EigenPair<T>>,
    /// Positions into `pairs` sorted by ascending `|θ|`.
    pub order: Vec<usize>,
}

impl<T: Scalar> EigenPairSet<T> {
    pub fn new(pairs: Vec<EigenPair<T>>) -> Self {
        let mut order: Vec<usize> = (0..pairs.len()).collect();
        order.sort_by(|&a, &b| magnitude_key(&pairs[a].value, &pairs[b].value));
        Self { pairs, order }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn values(&self) -> Vec<Complex<T>> {
        self.pairs.iter().map(|p| p.value).collect()
    }

    /// The same pairs physically reordered by ascending magnitude.
    pub fn sorted_by_magnitude(&self) -> Self {
        let pairs = self.order.iter().map(|&i| self.pairs[i].clone()).collect();
        Self {
            order: (0..self.pairs.len()).collect(),
            pairs,
        }
    }
}

/// Ascending `|θ|`, then real part, then descending imaginary part; this
/// keeps `a + bi` directly before `a − bi`.
fn magnitude_key<T: Scalar>(a: &Complex<T>, b: &Complex<T>) -> std::cmp::Ordering {
    let (ma, mb) = (a.norm(), b.norm());
    ma.partial_cmp(&mb)
        .unwrap_or(std::cmp::Ordering::Equal)
        .then(a.re.partial_cmp(&b.re).unwrap_or(std::cmp::Ordering::Equal))
        .then(b.im.partial_cmp(&a.im).unwrap_or(std::cmp::Ordering::Equal))
}

/// All eigenpairs of a real square matrix.
pub fn small_eig<T: Scalar>(mat: &DenseMatrix<T>) -> Result<EigenPairSet<T>> {
    let values = eigenvalues(mat)?;
    let anorm = mat.norm_inf().max(T::min_positive_value());
    let mut pairs = Vec::with_capacity(values.len());
    let mut i = 0;
    while i < values.len() {
        let theta = values[i];
        if theta.im == T::zero() {
            let vector = inverse_iteration(mat, theta, anorm);
            pairs.push(EigenPair { value: theta, vector });
            i += 1;
        } else {
            // eigenvalues() emits conjugates adjacently, positive part first.
            let vector = inverse_iteration(mat, theta, anorm);
            let conj: Vec<_> = vector.iter().map(|z| z.conj()).collect();
            pairs.push(EigenPair { value: theta, vector });
            pairs.push(EigenPair {
                value: theta.conj(),
                vector: conj,
            });
            i += 2;
        }
    }
    Ok(EigenPairSet::new(pairs))
}

/// Eigenvalues only; conjugate pairs adjacent with the positive imaginary
/// part first.
pub fn eigenvalues<T: Scalar>(mat: &DenseMatrix<T>) -> Result<Vec<Complex<T>>> {
    let n = mat.rows();
    if n == 0 || mat.cols() != n {
        return Err(Error::InvalidArgument(format!(
            "eigensolver needs a non-empty square matrix, got {}x{}",
            mat.rows(),
            mat.cols()
        )));
    }
    if mat.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("matrix has non-finite entries".into()));
    }
    // 1-based working copy keeps the classical index arithmetic readable.
    let mut a = vec![vec![T::zero(); n + 1]; n + 1];
    for i in 0..n {
        for j in 0..n {
            a[i + 1][j + 1] = mat[(i, j)];
        }
    }
    balance(&mut a, n);
    to_hessenberg(&mut a, n);
    let (wr, wi) = hqr(&mut a, n)?;
    let mut out = Vec::with_capacity(n);
    let mut i = 1;
    while i <= n {
        if wi[i] == T::zero() {
            out.push(Complex::new(wr[i], T::zero()));
            i += 1;
        } else {
            let (re, im) = (wr[i], wi[i].abs());
            out.push(Complex::new(re, im));
            out.push(Complex::new(re, -im));
            i += 2;
        }
    }
    Ok(out)
}

fn balance<T: Scalar>(a: &mut [Vec<T>], n: usize) {
    let radix = T::lit(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let (mut c, mut r) = (T::zero(), T::zero());
            for j in 1..=n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < T::lit(0.95) * s {
                    done = false;
                    let g = T::one() / f;
                    for j in 1..=n {
                        a[i][j] = a[i][j] * g;
                    }
                    for row in a.iter_mut().take(n + 1).skip(1) {
                        row[i] = row[i] * f;
                    }
                }
            }
        }
    }
}

/// Similarity reduction to upper Hessenberg form by elimination with
/// row/column pivoting.
fn to_hessenberg<T: Scalar>(a: &mut [Vec<T>], n: usize) {
    for m in 2..n {
        let mut x = T::zero();
        let mut piv = m;
        for j in m..=n {
            if a[j][m - 1].abs() > x.abs() {
                x = a[j][m - 1];
                piv = j;
            }
        }
        if piv != m {
            for j in (m - 1)..=n {
                let t = a[piv][j];
                a[piv][j] = a[m][j];
                a[m][j] = t;
            }
            for row in a.iter_mut().take(n + 1).skip(1) {
                row.swap(piv, m);
            }
        }
        if x != T::zero() {
            for i in (m + 1)..=n {
                let mut y = a[i][m - 1];
                if y != T::zero() {
                    y = y / x;
                    a[i][m - 1] = T::zero();
                    for j in m..=n {
                        a[i][j] = a[i][j] - y * a[m][j];
                    }
                    for row in a.iter_mut().take(n + 1).skip(1) {
                        row[m] = row[m] + y * row[i];
                    }
                }
            }
        }
    }
}

/// Francis double-shift QR on a 1-based upper Hessenberg array.
fn hqr<T: Scalar>(a: &mut [Vec<T>], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let mut wr = vec![T::zero(); n + 1];
    let mut wi = vec![T::zero(); n + 1];
    let max_sweeps = 30 * n;
    let mut sweeps = 0usize;
    let mut anorm = T::zero();
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }
    let mut nn = n;
    let mut t = T::zero();
    let half = T::lit(0.5);
    while nn >= 1 {
        let mut its = 0usize;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == T::zero() {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = T::zero();
                    break;
                }
                l -= 1;
            }
            let mut x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = T::zero();
                nn -= 1;
            } else {
                let mut y = a[nn - 1][nn - 1];
                let mut w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    let p = half * (y - x);
                    let q = p * p + w;
                    let mut z = q.abs().sqrt();
                    x = x + t;
                    if q >= T::zero() {
                        z = p + z.copysign(p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != T::zero() {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = T::zero();
                        wi[nn] = T::zero();
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                } else {
                    if sweeps >= max_sweeps {
                        return Err(Error::EigenNoConvergence {
                            sweeps,
                            found: n - nn,
                            total: n,
                        });
                    }
                    if its > 0 && its.is_multiple_of(10) {
                        // exceptional shift
                        t = t + x;
                        for i in 1..=nn {
                            a[i][i] = a[i][i] - x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = T::lit(0.75) * s;
                        y = x;
                        w = T::lit(-0.4375) * s * s;
                    }
                    its += 1;
                    sweeps += 1;
                    let (mut p, mut q, mut r, mut z);
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        r = x - z;
                        let s0 = y - z;
                        p = (r * s0 - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - r - s0;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = T::zero();
                        if i != m + 2 {
                            a[i][i - 3] = T::zero();
                        }
                    }
                    let mut k = m;
                    while k < nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = T::zero();
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != T::zero() {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = (p * p + q * q + r * r).sqrt().copysign(p);
                        if s != T::zero() {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                let mut pp = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    pp = pp + r * a[k + 2][j];
                                    a[k + 2][j] = a[k + 2][j] - pp * z;
                                }
                                a[k + 1][j] = a[k + 1][j] - pp * y;
                                a[k][j] = a[k][j] - pp * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for row in a.iter_mut().take(mmin + 1).skip(l) {
                                let mut pp = x * row[k] + y * row[k + 1];
                                if k != nn - 1 {
                                    pp = pp + z * row[k + 2];
                                    row[k + 2] = row[k + 2] - pp * r;
                                }
                                row[k + 1] = row[k + 1] - pp * q;
                                row[k] = row[k] - pp;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 2 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((wr, wi))
}

/// Right eigenvector for `theta` by inverse iteration on `mat − θI`.
fn inverse_iteration<T: Scalar>(mat: &DenseMatrix<T>, theta: Complex<T>, anorm: T) -> Vec<Complex<T>> {
    let n = mat.rows();
    let zero = Complex::new(T::zero(), T::zero());
    let mut lu: Vec<Vec<Complex<T>>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let v = Complex::new(mat[(i, j)], T::zero());
                    if i == j {
                        v - theta
                    } else {
                        v
                    }
                })
                .collect()
        })
        .collect();
    let tiny = T::epsilon() * anorm;
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let p = (k..n)
            .max_by(|&a, &b| {
                lu[a][k]
                    .norm()
                    .partial_cmp(&lu[b][k].norm())
                    .unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(k);
        lu.swap(p, k);
        perm.swap(p, k);
        if lu[k][k].norm() <= tiny {
            lu[k][k] = Complex::new(tiny, T::zero());
        }
        let pivot = lu[k][k];
        for i in k + 1..n {
            let l = lu[i][k] / pivot;
            lu[i][k] = l;
            if l != zero {
                for j in k + 1..n {
                    let u = lu[k][j];
                    lu[i][j] = lu[i][j] - l * u;
                }
            }
        }
    }
    // Deterministic start vector with no special alignment.
    let mut x: Vec<Complex<T>> = (0..n)
        .map(|i| Complex::new(T::one() + T::lit(0.1) * T::lit(((i * 7) % 11) as f64), T::zero()))
        .collect();
    normalize(&mut x);
    for _ in 0..3 {
        let mut b: Vec<Complex<T>> = perm.iter().map(|&p| x[p]).collect();
        for i in 0..n {
            for j in 0..i {
                let l = lu[i][j];
                b[i] = b[i] - l * b[j];
            }
        }
        for i in (0..n).rev() {
            for j in i + 1..n {
                let u = lu[i][j];
                b[i] = b[i] - u * b[j];
            }
            b[i] = b[i] / lu[i][i];
        }
        if b.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            break;
        }
        x = b;
        normalize(&mut x);
    }
    fix_phase(&mut x);
    x
}

fn normalize<T: Scalar>(x: &mut [Complex<T>]) {
    let scale = x.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    if scale == T::zero() {
        return;
    }
    let nrm = scale * x.iter().map(|z| (z / scale).norm_sqr()).sum::<T>().sqrt();
    x.iter_mut().for_each(|z| *z = *z / nrm);
}

/// Rotates the vector so its largest component is real and positive.
fn fix_phase<T: Scalar>(x: &mut [Complex<T>]) {
    let big = x
        .iter()
        .copied()
        .max_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap_or(std::cmp::Ordering::Equal));
    if let Some(b) = big {
        let nb = b.norm();
        if nb > T::zero() {
            let phase = b.conj() / nb;
            x.iter_mut().for_each(|z| *z = *z * phase);
        }
    }
}

/// `‖mat·g − θ g‖₂`.
pub fn eigen_residual<T: Scalar>(mat: &DenseMatrix<T>, pair: &EigenPair<T>) -> T {
    let n = mat.rows();
    (0..n)
        .map(|i| {
            let mut acc = -pair.value * pair.vector[i];
            for j in 0..n {
                acc = acc + pair.vector[j] * mat[(i, j)];
            }
            acc.norm_sqr()
        })
        .sum::<T>()
        .sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_matrix() {
        let set = small_eig(&DenseMatrix::from_diagonal(&[1.0, 2.0, 3.0])).unwrap();
        let sorted = set.sorted_by_magnitude();
        for (k, p) in sorted.pairs.iter().enumerate() {
            assert!((p.value.re - (k + 1) as f64).abs() < 1e-14);
            assert_eq!(p.value.im, 0.0);
            for (i, z) in p.vector.iter().enumerate() {
                let expect = if i == k { 1.0 } else { 0.0 };
                assert!((z.re - expect).abs() < 1e-12 && z.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn rotation_matrix_gives_conjugate_pair() {
        let m = DenseMatrix::from_rows(&[&[0.0, -1.0], &[1.0, 0.0]]).unwrap();
        let set = small_eig(&m).unwrap();
        assert_eq!(set.len(), 2);
        assert!((set.pairs[0].value - Complex::new(0.0, 1.0)).norm() < 1e-14);
        assert!((set.pairs[1].value - Complex::new(0.0, -1.0)).norm() < 1e-14);
        for p in &set.pairs {
            assert!(eigen_residual(&m, p) < 1e-12);
            let nrm: f64 = p.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            assert!((nrm - 1.0).abs() < 1e-14);
        }
    }

    #[test]
    fn one_by_one() {
        let set = small_eig(&DenseMatrix::from_rows(&[&[-4.5]]).unwrap()).unwrap();
        assert_eq!(set.pairs[0].value, Complex::new(-4.5, 0.0));
        assert_eq!(set.pairs[0].vector, vec![Complex::new(1.0, 0.0)]);
    }

    #[test]
    fn rejects_nonfinite() {
        let m = DenseMatrix::from_rows(&[&[1.0, f64::NAN], &[0.0, 1.0]]).unwrap();
        assert!(small_eig(&m).is_err());
    }

    #[test]
    fn companion_with_known_roots() {
        // (x-1)(x-2)(x^2+1) = x^4 - 3x^3 + 3x^2 - 3x + 2
        let m = DenseMatrix::from_rows(&[
            &[3.0, -3.0, 3.0, -2.0],
            &[1.0, 0.0, 0.0, 0.0],
            &[0.0, 1.0, 0.0, 0.0],
            &[0.0, 0.0, 1.0, 0.0],
        ])
        .unwrap();
        let set = small_eig(&m).unwrap().sorted_by_magnitude();
        let vals = set.values();
        // three roots share magnitude 1, so compare as a set
        for want in [Complex::new(0.0, 1.0), Complex::new(0.0, -1.0), Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)] {
            assert!(vals.iter().any(|v| (v - want).norm() < 1e-10), "{want} missing from {vals:?}");
        }
        assert!((vals[3] - Complex::new(2.0, 0.0)).norm() < 1e-10);
        let i = vals.iter().position(|v| v.im > 0.5).unwrap();
        assert!((vals[i + 1] - Complex::new(0.0, -1.0)).norm() < 1e-10);
        for p in &set.pairs {
            assert!(eigen_residual(&m, p) < 1e-10 * m.norm_inf());
        }
    }
}
