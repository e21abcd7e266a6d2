//! Hermitian matrices over ℝ and ℂ as elements of the Jordan algebra `V`.
//!
//! Complex Hermitian spectra are computed from the real symmetric `2q×2q`
//! embedding `[[A, −B], [B, A]]` of `A + iB`, which carries every
//! eigenvalue twice.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use crate::cone::{ConeStructure, Field};
use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, hermitian_spectral_map, CMatrix};

/// Tolerance for Hermitian symmetry at construction.
pub const HERMITIAN_TOL: f64 = 1e-12;

/// Tolerances for cone membership tests.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct JordanConfig {
    pub boundary_tol: f64,
    pub psd_clamp: f64,
}

impl Default for JordanConfig {
    fn default() -> Self {
        JordanConfig { boundary_tol: 1e-12, psd_clamp: 1e-12 }
    }
}

/// A Hermitian `q×q` matrix with its spectrum (decreasing).
#[derive(Debug, Clone, PartialEq)]
pub struct ConeElement {
    field: Field,
    matrix: CMatrix,
    spectrum: Vec<f64>,
}

impl ConeElement {
    /// Validates Hermitian symmetry (relative to the matrix scale) and caches the spectrum.
    pub fn new(field: Field, matrix: CMatrix) -> Result<Self> {
        if matrix.rows != matrix.cols || matrix.rows == 0 {
            return Err(Error::Dimension(format!("{}x{} is not a square matrix", matrix.rows, matrix.cols)));
        }
        if field == Field::Real && matrix.data.iter().any(|z| z.im != 0.0) {
            return Err(Error::Parameter("real cone element has complex entries".into()));
        }
        let asym = matrix.asymmetry();
        if asym > HERMITIAN_TOL * matrix.frobenius().max(1.0) {
            return Err(Error::NotHermitian { asymmetry: asym });
        }
        Ok(Self::from_hermitian(field, matrix.hermitian_part()))
    }

    fn from_hermitian(field: Field, matrix: CMatrix) -> Self {
        let spectrum = hermitian_eigenvalues(&matrix);
        ConeElement { field, matrix, spectrum }
    }

    /// Uses the Hermitian part `(m + m*)/2`; for products that are Hermitian up to rounding.
    pub fn from_hermitian_part(field: Field, m: &CMatrix) -> Self {
        Self::from_hermitian(field, m.hermitian_part())
    }

    pub fn from_real_rows(q: usize, data: &[f64]) -> Result<Self> {
        if data.len() != q * q {
            return Err(Error::Dimension(format!("expected {} entries, got {}", q * q, data.len())));
        }
        Self::new(Field::Real, CMatrix::from_real(q, q, data))
    }

    pub fn identity(field: Field, q: usize) -> Self {
        Self::diag(field, &vec![1.0; q])
    }

    pub fn zero(field: Field, q: usize) -> Self {
        Self::diag(field, &vec![0.0; q])
    }

    pub fn diag(field: Field, values: &[f64]) -> Self {
        let mut spectrum = values.to_vec();
        spectrum.sort_by(|a, b| b.total_cmp(a));
        ConeElement { field, matrix: CMatrix::diag(values), spectrum }
    }

    /// `U diag(spectrum) U*`.
    pub fn with_frame(field: Field, spectrum: &[f64], u: &CMatrix) -> Self {
        let m = &(u * &CMatrix::diag(spectrum)) * &u.adjoint();
        Self::from_hermitian(field, m.hermitian_part())
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn rank(&self) -> usize {
        self.matrix.rows
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Eigenvalues `ξ1 ≥ … ≥ ξq`.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn det(&self) -> f64 {
        self.spectrum.iter().product()
    }

    /// `(Δ(x), tr(x))` from the spectrum.
    pub fn det_trace(&self) -> (f64, f64) {
        (self.det(), self.spectrum.iter().sum())
    }

    /// Quadratic representation `P(self) y = self · y · self`.
    pub fn quad_rep(&self, y: &ConeElement) -> ConeElement {
        let m = &(&self.matrix * &y.matrix) * &self.matrix;
        Self::from_hermitian(self.field, m.hermitian_part())
    }

    /// Conjugation `u x u*`.
    pub fn conjugate_by(&self, u: &CMatrix) -> ConeElement {
        let m = &(u * &self.matrix) * &u.adjoint();
        Self::from_hermitian(self.field, m.hermitian_part())
    }

    /// PSD square root; eigenvalues down to `−cfg.psd_clamp` are clamped to zero.
    pub fn sqrt_psd_with(&self, cfg: &JordanConfig) -> Result<ConeElement> {
        let min = self.spectrum.last().copied().unwrap_or(0.0);
        if min < -cfg.psd_clamp {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        let m = hermitian_spectral_map(&self.matrix, |x| x.max(0.0).sqrt());
        Ok(Self::from_hermitian(self.field, m))
    }

    pub fn sqrt_psd(&self) -> Result<ConeElement> {
        self.sqrt_psd_with(&JordanConfig::default())
    }

    pub fn in_omega_e_with(&self, cfg: &JordanConfig) -> bool {
        self.spectrum.iter().all(|&x| x > cfg.boundary_tol && x < 1.0 - cfg.boundary_tol)
    }

    /// `0 < x < e`.
    pub fn in_omega_e(&self) -> bool {
        self.in_omega_e_with(&JordanConfig::default())
    }

    /// Closure `Ω̄`, up to the PSD clamp.
    pub fn in_closed_cone(&self) -> bool {
        self.spectrum.last().is_none_or(|&x| x >= -JordanConfig::default().psd_clamp)
    }

    /// `⟨x, y⟩ = Re tr(x y*)`.
    pub fn inner(&self, y: &ConeElement) -> f64 {
        self.matrix.real_inner(&y.matrix)
    }

    pub fn sub(&self, y: &ConeElement) -> ConeElement {
        Self::from_hermitian(self.field, &self.matrix - &y.matrix)
    }
}

/// One matrix entry in JSON: a real number or a `[re, im]` pair.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum EntryInput {
    Real(f64),
    Complex([f64; 2]),
}

/// JSON form of a matrix: row-major rows with a field tag.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixInput {
    pub field: Field,
    pub rows: Vec<Vec<EntryInput>>,
}

impl MatrixInput {
    pub fn to_element(&self) -> Result<ConeElement> {
        let q = self.rows.len();
        let mut m = CMatrix::zeros(q, q);
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != q {
                return Err(Error::Dimension(format!("row {i} has {} entries, expected {q}", row.len())));
            }
            for (j, e) in row.iter().enumerate() {
                m[(i, j)] = match *e {
                    EntryInput::Real(x) => Complex64::new(x, 0.0),
                    EntryInput::Complex([re, im]) => Complex64::new(re, im),
                };
            }
        }
        ConeElement::new(self.field, m)
    }
}

/// Gaussian `rows×cols` matrix over the field with variance 1/2 per real component.
pub fn gaussian_matrix<R: Rng + ?Sized>(field: Field, rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = CMatrix::zeros(rows, cols);
    for z in m.data.iter_mut() {
        let re: f64 = rng.sample(StandardNormal);
        let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
        *z = Complex64::new(re * s, im * s);
    }
    m
}

/// Haar-distributed orthogonal or unitary `q×q` matrix: Gram–Schmidt QR of a
/// Gaussian matrix, with the phases of `R`'s diagonal moved into `Q`.
pub fn haar_matrix<R: Rng + ?Sized>(field: Field, q: usize, rng: &mut R) -> CMatrix {
    let g = gaussian_matrix(field, q, q, rng);
    let mut cols: Vec<Vec<Complex64>> = (0..q).map(|j| (0..q).map(|i| g[(i, j)]).collect()).collect();
    for j in 0..q {
        for k in 0..j {
            let (head, tail) = cols.split_at_mut(j);
            let proj: Complex64 = head[k].iter().zip(&tail[0]).map(|(a, b)| a.conj() * b).sum();
            for (t, h) in tail[0].iter_mut().zip(&head[k]) {
                *t -= proj * h;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        // Normalizing by the positive norm is the phase correction: R's diagonal is positive.
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut u = CMatrix::zeros(q, q);
    for (j, col) in cols.iter().enumerate() {
        for (i, z) in col.iter().enumerate() {
            u[(i, j)] = *z;
        }
    }
    u
}

/// Random element `U diag(spectrum) U*` with Haar `U`.
pub fn random_with_spectrum<R: Rng + ?Sized>(cone: &ConeStructure, spectrum: &[f64], rng: &mut R) -> ConeElement {
    let u = haar_matrix(cone.field, cone.q, rng);
    ConeElement::with_frame(cone.field, spectrum, &u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(11)
    }

    /// Cofactor expansion over the complex entries.
    fn cofactor_det(m: &CMatrix) -> Complex64 {
        let n = m.rows;
        if n == 1 {
            return m[(0, 0)];
        }
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let mut minor = CMatrix::zeros(n - 1, n - 1);
            for r in 1..n {
                let mut c2 = 0;
                for c in 0..n {
                    if c != j {
                        minor[(r - 1, c2)] = m[(r, c)];
                        c2 += 1;
                    }
                }
            }
            let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
            acc += sign * m[(0, j)] * cofactor_det(&minor);
        }
        acc
    }

    fn random_hermitian(field: Field, q: usize, r: &mut ChaCha8Rng) -> ConeElement {
        let g = gaussian_matrix(field, q, q, r);
        ConeElement::new(field, (&g + &g.adjoint()).scale(0.5)).unwrap()
    }

    #[test]
    fn spectra_of_simple_matrices() {
        assert_eq!(ConeElement::identity(Field::Real, 2).eigenvalues(), &[1.0, 1.0]);
        let x = ConeElement::from_real_rows(2, &[1.0, 0.0, 0.0, 3.0]).unwrap();
        assert_eq!(x.eigenvalues(), &[3.0, 1.0]);
        let (det, tr) = ConeElement::diag(Field::Real, &[2.0, 0.5]).det_trace();
        assert_eq!((det, tr), (1.0, 2.5));
    }

    #[test]
    fn real_two_by_two_closed_form() {
        let mut r = rng();
        for _ in 0..50 {
            let a: f64 = r.random_range(-3.0..3.0);
            let b: f64 = r.random_range(-3.0..3.0);
            let c: f64 = r.random_range(-3.0..3.0);
            let x = ConeElement::from_real_rows(2, &[a, b, b, c]).unwrap();
            let mid = 0.5 * (a + c);
            let rad = (0.25 * (a - c) * (a - c) + b * b).sqrt();
            assert!((x.eigenvalues()[0] - (mid + rad)).abs() < 1e-12);
            assert!((x.eigenvalues()[1] - (mid - rad)).abs() < 1e-12);
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        assert!(matches!(
            ConeElement::from_real_rows(2, &[1.0, 2.0, 0.0, 1.0]),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn determinant_matches_cofactors() {
        let mut r = rng();
        for field in [Field::Real, Field::Complex] {
            for q in 1..=3 {
                let x = random_hermitian(field, q, &mut r);
                let det = cofactor_det(x.matrix());
                assert!(det.im.abs() < 1e-12);
                assert!((x.det() - det.re).abs() < 1e-10, "{field} {q}");
                let tr: f64 = x.eigenvalues().iter().sum();
                assert!((tr - x.trace()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn k_invariance_of_spectrum() {
        let mut r = rng();
        for field in [Field::Real, Field::Complex] {
            let cone = ConeStructure::new(field, 3).unwrap();
            let x = random_hermitian(field, 3, &mut r);
            let u = haar_matrix(cone.field, 3, &mut r);
            let uu = &u * &u.adjoint();
            assert!((&uu - &CMatrix::identity(3)).frobenius() < 1e-12);
            let y = x.conjugate_by(&u);
            for (a, b) in x.eigenvalues().iter().zip(y.eigenvalues()) {
                assert!((a - b).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn square_roots() {
        let x = ConeElement::diag(Field::Real, &[4.0, 9.0]);
        assert_eq!(x.sqrt_psd().unwrap().eigenvalues(), &[3.0, 2.0]);
        let mut r = rng();
        for field in [Field::Real, Field::Complex] {
            let cone = ConeStructure::new(field, 3).unwrap();
            let x = random_with_spectrum(&cone, &[2.5, 0.7, 0.0], &mut r);
            let s = x.sqrt_psd().unwrap();
            let sq = s.quad_rep(&ConeElement::identity(field, 3));
            assert!((&sq.matrix - &x.matrix).frobenius() < 1e-9, "{field}");
        }
        assert!(ConeElement::diag(Field::Real, &[1.0, -0.5]).sqrt_psd().is_err());
    }

    #[test]
    fn unit_interval_membership() {
        assert!(ConeElement::diag(Field::Real, &[0.5, 0.5]).in_omega_e());
        assert!(!ConeElement::identity(Field::Real, 2).in_omega_e());
        assert!(!ConeElement::diag(Field::Real, &[0.5, 1.5]).in_omega_e());
    }

    #[test]
    fn quadratic_representation_symmetry() {
        let mut r = rng();
        for field in [Field::Real, Field::Complex] {
            let cone = ConeStructure::new(field, 2).unwrap();
            let a = random_with_spectrum(&cone, &[0.9, 0.3], &mut r);
            let b = random_with_spectrum(&cone, &[0.6, 0.1], &mut r);
            let ab = a.sqrt_psd().unwrap().quad_rep(&b);
            let ba = b.sqrt_psd().unwrap().quad_rep(&a);
            for (x, y) in ab.eigenvalues().iter().zip(ba.eigenvalues()) {
                assert!((x - y).abs() < 1e-12);
            }
            assert!(ab.in_omega_e());
            let id = ConeElement::identity(field, 2);
            assert!((&id.quad_rep(&b).matrix - &b.matrix).frobenius() < 1e-14);
        }
    }

    #[test]
    fn json_matrix_input() {
        let m: MatrixInput =
            serde_json::from_str(r#"{"field":"C","rows":[[2,[0,1]],[[0,-1],2]]}"#).unwrap();
        let x = m.to_element().unwrap();
        assert!((x.eigenvalues()[0] - 3.0).abs() < 1e-12);
        assert!((x.eigenvalues()[1] - 1.0).abs() < 1e-12);
    }
}
