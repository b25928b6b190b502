//! Oracles and instance builders shared by the integration tests. Nothing
//! here calls into the solver's dense kernels.
#![allow(dead_code, clippy::needless_range_loop)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use wglgmres::{BlockVector, SparseMatrix, SylvesterOperator};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Sparse random matrix with a shifted diagonal so the Sylvester operator
/// stays well conditioned.
pub fn random_sparse(rng: &mut ChaCha8Rng, n: usize, density: f64, shift: f64) -> SparseMatrix<f64> {
    let mut t = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                t.push((i, j, shift + rng.gen_range(-0.5..0.5)));
            } else if rng.gen_bool(density) {
                t.push((i, j, rng.gen_range(-1.0..1.0)));
            }
        }
    }
    SparseMatrix::from_triplets(n, &t).unwrap()
}

pub fn random_block(rng: &mut ChaCha8Rng, n: usize, s: usize) -> BlockVector<f64> {
    BlockVector::from_fn(n, s, |_, _| rng.gen_range(-1.0..1.0))
}

/// A random well-conditioned instance of size `n × s`.
pub fn random_instance(seed: u64, n: usize, s: usize) -> (SylvesterOperator<f64>, BlockVector<f64>) {
    let mut r = rng(seed);
    let a = random_sparse(&mut r, n, 0.4, 2.0 + n as f64 * 0.3);
    let b = random_sparse(&mut r, s, 0.5, 1.0);
    let c = random_block(&mut r, n, s);
    (SylvesterOperator::new(a, b), c)
}

/// Nonnormal instance whose harmonic values are typically complex.
pub fn rotating_instance(seed: u64, n: usize, s: usize) -> (SylvesterOperator<f64>, BlockVector<f64>) {
    let mut r = rng(seed);
    let mut t = Vec::new();
    for i in 0..n {
        t.push((i, i, 1.0 + 4.0 * i as f64 / n as f64));
        if i + 1 < n {
            let w = 1.5 + r.gen_range(0.0..1.0);
            t.push((i, i + 1, w));
            t.push((i + 1, i, -w));
        }
        let j = r.gen_range(0..n);
        t.push((i, j, r.gen_range(-0.3..0.3)));
    }
    let a = SparseMatrix::from_triplets(n, &t).unwrap();
    let b = random_sparse(&mut r, s, 0.5, 0.5);
    let c = random_block(&mut r, n, s);
    (SylvesterOperator::new(a, b), c)
}

/// Dense row-major `(ns) × (ns)` matrix of `I_s ⊗ A + Bᵀ ⊗ I_n` acting on
/// column-major `vec(X)`, assembled entry by entry from the definition
/// `(AX + XB)_{ij} = Σ_l A_{il} X_{lj} + Σ_l X_{il} B_{lj}`.
pub fn kron_dense(op: &SylvesterOperator<f64>) -> Vec<Vec<f64>> {
    let (n, s) = op.block_shape();
    let ns = n * s;
    let mut k = vec![vec![0.0; ns]; ns];
    for j in 0..s {
        for i in 0..n {
            let row = i + j * n;
            for l in 0..n {
                k[row][l + j * n] += op.a().get(i, l);
            }
            for l in 0..s {
                k[row][i + l * n] += op.b().get(l, j);
            }
        }
    }
    k
}

/// Gaussian elimination with partial pivoting.
pub fn dense_solve(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
    let n = b.len();
    for col in 0..n {
        let p = (col..n)
            .max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))
            .unwrap();
        a.swap(col, p);
        b.swap(col, p);
        assert!(a[col][col].abs() > 1e-300, "oracle matrix singular");
        for r in col + 1..n {
            let f = a[r][col] / a[col][col];
            if f != 0.0 {
                for c in col..n {
                    a[r][c] -= f * a[col][c];
                }
                b[r] -= f * b[col];
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - s) / a[r][r];
    }
    x
}

/// Reference solution of `AX + XB = C` through the Kronecker form.
pub fn oracle_solve(op: &SylvesterOperator<f64>, c: &BlockVector<f64>) -> BlockVector<f64> {
    let (n, s) = op.block_shape();
    let x = dense_solve(kron_dense(op), c.as_slice().to_vec());
    BlockVector::from_col_major(n, s, x).unwrap()
}

pub fn rel_err(a: &BlockVector<f64>, b: &BlockVector<f64>) -> f64 {
    a.sub(b).unwrap().frobenius_norm() / b.frobenius_norm()
}

/// Characteristic polynomial coefficients `[1, c₁, …, c_n]` of a dense
/// row-major matrix by the Faddeev–LeVerrier recursion.
pub fn char_poly(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut coeffs = vec![1.0];
    let mut mk = vec![vec![0.0; n]; n];
    for k in 1..=n {
        // M_k = A M_{k-1} + c_{k-1} I
        let prev_c = *coeffs.last().unwrap();
        let mut next = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = 0.0;
                for l in 0..n {
                    acc += m[i][l] * mk[l][j];
                }
                next[i][j] = acc + if i == j { prev_c } else { 0.0 };
            }
        }
        mk = next;
        let mut trace = 0.0;
        for i in 0..n {
            for l in 0..n {
                trace += m[i][l] * mk[l][i];
            }
        }
        coeffs.push(-trace / k as f64);
    }
    coeffs
}

/// All roots of a monic polynomial by Durand–Kerner iteration.
pub fn poly_roots(coeffs: &[f64]) -> Vec<Complex64> {
    let n = coeffs.len() - 1;
    let eval = |z: Complex64| coeffs.iter().fold(Complex64::new(0.0, 0.0), |acc, &c| acc * z + c);
    let radius = 1.0 + coeffs[1..].iter().map(|c| c.abs()).fold(0.0, f64::max);
    let seed = Complex64::new(0.4, 0.9);
    let mut z: Vec<Complex64> = (0..n).map(|k| seed.powu(k as u32) * radius.min(10.0)).collect();
    for _ in 0..5000 {
        let mut delta = 0.0f64;
        for i in 0..n {
            let mut den = Complex64::new(1.0, 0.0);
            for j in 0..n {
                if j != i {
                    den *= z[i] - z[j];
                }
            }
            let step = eval(z[i]) / den;
            z[i] -= step;
            delta = delta.max(step.norm());
        }
        if delta < 1e-15 * radius {
            break;
        }
    }
    // polish with Newton on the polynomial
    for zi in z.iter_mut() {
        for _ in 0..3 {
            let (mut p, mut dp) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for &c in coeffs {
                dp = dp * *zi + p;
                p = p * *zi + c;
            }
            if dp.norm() > 0.0 {
                *zi -= p / dp;
            }
        }
    }
    z
}

/// Eigenvalues of a small dense matrix via its characteristic polynomial.
pub fn oracle_eigenvalues(m: &[Vec<f64>]) -> Vec<Complex64> {
    poly_roots(&char_poly(m))
}

/// Largest distance from each value in `got` to the nearest in `want`,
/// and vice versa.
pub fn spectrum_distance(got: &[Complex64], want: &[Complex64]) -> f64 {
    let one = |a: &[Complex64], b: &[Complex64]| {
        a.iter()
            .map(|x| b.iter().map(|y| (x - y).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one(got, want).max(one(want, got))
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, ascending.
pub fn symmetric_eigenvalues(m: &[Vec<f64>]) -> Vec<f64> {
    let n = m.len();
    let mut a = m.to_vec();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i][j] * a[i][j]).sum();
        if off.sqrt() < 1e-14 {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                if a[p][q] == 0.0 {
                    continue;
                }
                let theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (akp, akq) = (a[k][p], a[k][q]);
                    a[k][p] = c * akp - s * akq;
                    a[k][q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let (apk, aqk) = (a[p][k], a[q][k]);
                    a[p][k] = c * apk - s * aqk;
                    a[q][k] = s * apk + c * aqk;
                }
            }
        }
    }
    let mut ev: Vec<f64> = (0..n).map(|i| a[i][i]).collect();
    ev.sort_by(f64::total_cmp);
    ev
}
