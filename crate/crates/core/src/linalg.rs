//! Small dense linear algebra: complex matrices, cyclic Jacobi for real
//! symmetric matrices, Hermitian eigen-decomposition through the real
//! embedding, and an exact rational LDLᵀ positivity test.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::rational::Q;

/// Off-diagonal Frobenius tolerance (relative to the matrix norm) for Jacobi sweeps.
pub const JACOBI_TOL: f64 = 1e-13;
const JACOBI_MAX_SWEEPS: usize = 100;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix { rows, cols, data: vec![Complex64::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMatrix { rows, cols, data: data.iter().map(|&x| Complex64::new(x, 0.0)).collect() }
    }

    pub fn diag(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, &v) in values.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    pub fn adjoint(&self) -> Self {
        let mut m = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: f64) -> Self {
        CMatrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|z| z * s).collect() }
    }

    pub fn frobenius(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(M + M*)/2`.
    pub fn hermitian_part(&self) -> Self {
        let adj = self.adjoint();
        let mut out = self.clone();
        for (o, a) in out.data.iter_mut().zip(adj.data) {
            *o = (*o + a) * 0.5;
        }
        out
    }

    /// `max |M − M*|` entrywise.
    pub fn asymmetry(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Real part of the trace of `self* · other` (the inner product `⟨self, other⟩`).
    pub fn real_inner(&self, other: &CMatrix) -> f64 {
        self.data.iter().zip(&other.data).map(|(a, b)| (a.conj() * b).re).sum()
    }

    /// Determinant by Gaussian elimination with partial pivoting.
    pub fn det(&self) -> Complex64 {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.data.clone();
        let mut det = Complex64::new(1.0, 0.0);
        for col in 0..n {
            let pivot = (col..n)
                .max_by(|&i, &j| a[i * n + col].norm().total_cmp(&a[j * n + col].norm()))
                .unwrap();
            if a[pivot * n + col].norm() == 0.0 {
                return Complex64::zero();
            }
            if pivot != col {
                for k in 0..n {
                    a.swap(pivot * n + k, col * n + k);
                }
                det = -det;
            }
            let p = a[col * n + col];
            det *= p;
            for i in col + 1..n {
                let f = a[i * n + col] / p;
                for k in col..n {
                    let v = a[col * n + k];
                    a[i * n + k] -= f * v;
                }
            }
        }
        det
    }

    /// Real symmetric `2n×2n` embedding `[[A, −B], [B, A]]` of a Hermitian `A + iB`.
    pub fn real_embedding(&self) -> Vec<f64> {
        let n = self.rows;
        let m = 2 * n;
        let mut out = vec![0.0; m * m];
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                out[i * m + j] = z.re;
                out[(i + n) * m + (j + n)] = z.re;
                out[i * m + (j + n)] = -z.im;
                out[(i + n) * m + j] = z.im;
            }
        }
        out
    }

    /// Inverse of [`CMatrix::real_embedding`].
    pub fn from_real_embedding(n: usize, emb: &[f64]) -> Self {
        let m = 2 * n;
        let mut out = Self::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = Complex64::new(emb[i * m + j], emb[(i + n) * m + j]);
            }
        }
        out
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &CMatrix {
    type Output = CMatrix;
    fn mul(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in product");
        let mut out = CMatrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == Complex64::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &CMatrix {
    type Output = CMatrix;
    fn add(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &CMatrix {
    type Output = CMatrix;
    fn sub(self, rhs: &CMatrix) -> CMatrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        CMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

/// Eigen-decomposition of a real symmetric `n×n` matrix (row-major) by
/// cyclic Jacobi rotations. Returns eigenvalues (unsorted) and the
/// eigenvector matrix `V` (row-major, eigenvectors in columns) with `A = V Λ Vᵀ`.
pub fn jacobi_eigen(a: &[f64], n: usize) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n);
    let mut a = a.to_vec();
    let mut v = vec![0.0; n * n];
    for i in 0..n {
        v[i * n + i] = 1.0;
    }
    let norm: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let threshold = JACOBI_TOL * norm.max(f64::MIN_POSITIVE);
    let mut polished = false;
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[i * n + j] * a[i * n + j])
            .sum::<f64>()
            .sqrt();
        if off <= threshold {
            // One more sweep after reaching the tolerance: convergence is
            // quadratic, and spectral maps like sqrt amplify the residual.
            if polished || off == 0.0 {
                break;
            }
            polished = true;
        }
        for p in 0..n {
            for r in p + 1..n {
                let apr = a[p * n + r];
                if apr == 0.0 {
                    continue;
                }
                let app = a[p * n + p];
                let arr = a[r * n + r];
                let theta = (arr - app) / (2.0 * apr);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akr = a[k * n + r];
                    a[k * n + p] = c * akp - s * akr;
                    a[k * n + r] = s * akp + c * akr;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let ark = a[r * n + k];
                    a[p * n + k] = c * apk - s * ark;
                    a[r * n + k] = s * apk + c * ark;
                }
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkr = v[k * n + r];
                    v[k * n + p] = c * vkp - s * vkr;
                    v[k * n + r] = s * vkp + c * vkr;
                }
            }
        }
    }
    ((0..n).map(|i| a[i * n + i]).collect(), v)
}

/// Eigenvalues of a real symmetric matrix, sorted decreasingly.
pub fn symmetric_eigenvalues(a: &[f64], n: usize) -> Vec<f64> {
    let (mut w, _) = jacobi_eigen(a, n);
    w.sort_by(|x, y| y.total_cmp(x));
    w
}

/// Applies `f` to the spectrum of a real symmetric matrix: `V f(Λ) Vᵀ`.
pub fn symmetric_spectral_map(a: &[f64], n: usize, f: impl Fn(f64) -> f64) -> Vec<f64> {
    let (w, v) = jacobi_eigen(a, n);
    let fw: Vec<f64> = w.iter().map(|&x| f(x)).collect();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = (0..n).map(|k| v[i * n + k] * fw[k] * v[j * n + k]).sum();
        }
    }
    out
}

/// Eigenvalues (decreasing) of a Hermitian matrix.
///
/// Real matrices go straight to Jacobi; complex ones through the real
/// `2n×2n` embedding, whose spectrum is that of the matrix with every
/// eigenvalue doubled.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let n = m.rows;
    if m.data.iter().all(|z| z.im == 0.0) {
        let re: Vec<f64> = m.data.iter().map(|z| z.re).collect();
        return symmetric_eigenvalues(&re, n);
    }
    let w = symmetric_eigenvalues(&m.real_embedding(), 2 * n);
    (0..n).map(|i| 0.5 * (w[2 * i] + w[2 * i + 1])).collect()
}

/// `f(M)` for Hermitian `M` by spectral calculus.
pub fn hermitian_spectral_map(m: &CMatrix, f: impl Fn(f64) -> f64) -> CMatrix {
    let n = m.rows;
    if m.data.iter().all(|z| z.im == 0.0) {
        let re: Vec<f64> = m.data.iter().map(|z| z.re).collect();
        return CMatrix::from_real(n, n, &symmetric_spectral_map(&re, n, f));
    }
    // Eigenvalues of the embedding come in pairs; f is applied to the pair
    // mean so that noise splitting a pair cannot break the complex structure
    // (this matters for sqrt near zero).
    let (w, v) = jacobi_eigen(&m.real_embedding(), 2 * n);
    let mut order: Vec<usize> = (0..2 * n).collect();
    order.sort_by(|&i, &j| w[j].total_cmp(&w[i]));
    let mut fw = vec![0.0; 2 * n];
    for pair in order.chunks(2) {
        let val = f(0.5 * (w[pair[0]] + w[pair[1]]));
        fw[pair[0]] = val;
        fw[pair[1]] = val;
    }
    let size = 2 * n;
    let mut emb = vec![0.0; size * size];
    for i in 0..size {
        for j in 0..size {
            emb[i * size + j] = (0..size).map(|k| v[i * size + k] * fw[k] * v[j * size + k]).sum();
        }
    }
    CMatrix::from_real_embedding(n, &emb).hermitian_part()
}

/// Outcome of the exact positivity test of a rational symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub enum ExactDefiniteness {
    PositiveSemidefinite,
    /// A rational vector `v` with `vᵀ M v < 0`, and that value.
    Indefinite { witness: Vec<Q>, value: Q },
}

/// Exact PSD test by symmetric Gaussian elimination (LDLᵀ with diagonal pivoting).
///
/// When the matrix is not PSD the returned witness satisfies `vᵀ M v < 0`
/// exactly; the value is recomputed from the original matrix.
#[allow(clippy::needless_range_loop)]
pub fn exact_psd(m: &[Vec<Q>]) -> ExactDefiniteness {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m.to_vec();
    // Row operations applied so far, as an n×n transform T with a = T m Tᵀ restricted.
    let mut t: Vec<Vec<Q>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { Q::from_integer(1.into()) } else { Q::zero() }).collect())
        .collect();
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(pos) = active.iter().position(|&i| !a[i][i].is_zero()) {
        let p = active[pos];
        if a[p][p].is_negative() {
            return witness_from(m, &t[p]);
        }
        active.remove(pos);
        for &i in &active {
            if a[i][p].is_zero() {
                continue;
            }
            let f = &a[i][p] / &a[p][p];
            for j in 0..n {
                let apj = a[p][j].clone();
                a[i][j] -= &f * &apj;
            }
            for j in 0..n {
                let apj = a[j][p].clone();
                a[j][i] -= &f * &apj;
            }
            for j in 0..n {
                let tpj = t[p][j].clone();
                t[i][j] -= &f * &tpj;
            }
        }
    }
    // All remaining diagonal entries are zero; any nonzero off-diagonal entry
    // among them makes the matrix indefinite.
    for (x, &i) in active.iter().enumerate() {
        for &j in &active[x + 1..] {
            if !a[i][j].is_zero() {
                // (s e_i + e_j)ᵀ A (s e_i + e_j) = 2 s a_ij (a_ii = a_jj = 0): take s = −a_ij.
                let s = -a[i][j].clone();
                let v: Vec<Q> = (0..n).map(|k| &s * &t[i][k] + &t[j][k]).collect();
                return witness_from(m, &v);
            }
        }
    }
    ExactDefiniteness::PositiveSemidefinite
}

fn witness_from(m: &[Vec<Q>], v: &[Q]) -> ExactDefiniteness {
    let value = quadratic_form(m, v);
    debug_assert!(value.is_negative());
    ExactDefiniteness::Indefinite { witness: v.to_vec(), value }
}

/// `vᵀ M v` in exact arithmetic.
pub fn quadratic_form(m: &[Vec<Q>], v: &[Q]) -> Q {
    let mut acc = Q::zero();
    for (i, row) in m.iter().enumerate() {
        if v[i].is_zero() {
            continue;
        }
        for (j, mij) in row.iter().enumerate() {
            if !v[j].is_zero() {
                acc += &v[i] * mij * &v[j];
            }
        }
    }
    acc
}
