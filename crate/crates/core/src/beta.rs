//! Beta measures on the cone.
//!
//! The analytic continuation of `β_{μ,ν}` in `ν` is realized on
//! K-invariant polynomials by the exact moment functional
//! `L(Z_λ) = (μ)_λ Z_λ(e) / (μ+ν)_λ`.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::sync::RwLock;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use rand_distr::{Distribution, Gamma, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::cone::{
    beta_cone, minimal_level, pochhammer_gen, pochhammer_gen_exact, wallach_contains_exact, zlambda_at_identity,
    ConeStructure, Field,
};
use crate::error::{Error, Result};
use crate::jordan::{gaussian_matrix, ConeElement};
use crate::linalg::{exact_psd, hermitian_spectral_map, symmetric_eigenvalues, CMatrix, ExactDefiniteness};
use crate::mc::run_chunks;
use crate::partition::{partitions_up_to, Partition};
use crate::rational::{gamma_ratio, q_frac, q_int, rising, to_f64, Q};
use crate::special;
use crate::symfun::{det_e_minus_x_poly, det_poly, Basis, SymConfig, SymPolynomial};

/// `Δ(x)^{μ−n/q} Δ(e−x)^{ν−n/q} / B_Ω(μ, ν)` on `Ω_e`, zero elsewhere.
pub fn beta_density(x: &ConeElement, mu: f64, nu: f64, cone: &ConeStructure) -> Result<f64> {
    if !(mu > cone.mu0() && nu > cone.mu0()) {
        return Err(Error::Parameter(format!("density needs mu, nu > mu0 = {}", cone.mu0())));
    }
    if !x.in_omega_e() {
        return Ok(0.0);
    }
    let nq = cone.n_over_q();
    let det_x: f64 = x.eigenvalues().iter().product();
    let det_ex: f64 = x.eigenvalues().iter().map(|e| 1.0 - e).product();
    let b = beta_cone(Complex64::new(mu, 0.0), Complex64::new(nu, 0.0), cone)?.re;
    Ok(det_x.powf(mu - nq) * det_ex.powf(nu - nq) / b)
}

/// Which construction a [`BetaSampler`] uses.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SamplerKind {
    /// Bartlett-factor Wishart matrices with cone parameters `μ, ν > μ0`.
    Density { mu: f64, nu: f64 },
    /// `W = X*X` with Gaussian `p×q` and `p̃×q` factors: `μ = pd/2`, `ν = p̃d/2`.
    Singular { p: usize, pt: usize },
}

/// Draws `S = (W1+W2)^{−1/2} W1 (W1+W2)^{−1/2}`.
#[derive(Debug, Clone)]
pub struct BetaSampler {
    cone: ConeStructure,
    kind: SamplerKind,
    /// Gamma laws for the Bartlett diagonal, per matrix and row.
    gammas: Option<[Vec<Gamma<f64>>; 2]>,
}

impl BetaSampler {
    pub fn density(mu: f64, nu: f64, cone: &ConeStructure) -> Result<Self> {
        if !(mu > cone.mu0() && nu > cone.mu0()) {
            return Err(Error::Parameter(format!("sampler needs mu, nu > mu0 = {}", cone.mu0())));
        }
        let laws = |shape: f64| -> Result<Vec<Gamma<f64>>> {
            (0..cone.q)
                .map(|i| {
                    Gamma::new(shape - i as f64 * cone.half_d(), 1.0)
                        .map_err(|e| Error::Parameter(format!("gamma shape: {e}")))
                })
                .collect()
        };
        Ok(BetaSampler { cone: *cone, kind: SamplerKind::Density { mu, nu }, gammas: Some([laws(mu)?, laws(nu)?]) })
    }

    pub fn singular(p: usize, pt: usize, cone: &ConeStructure) -> Result<Self> {
        if p < cone.q {
            return Err(Error::Parameter(format!("p = {p} must be at least q = {}", cone.q)));
        }
        Ok(BetaSampler { cone: *cone, kind: SamplerKind::Singular { p, pt }, gammas: None })
    }

    pub fn kind(&self) -> SamplerKind {
        self.kind
    }

    /// `(μ, ν)` of the sampled law.
    pub fn params(&self) -> (f64, f64) {
        match self.kind {
            SamplerKind::Density { mu, nu } => (mu, nu),
            SamplerKind::Singular { p, pt } => {
                let h = self.cone.half_d();
                (p as f64 * h, pt as f64 * h)
            }
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ConeElement {
        let (w1, w2) = match (&self.kind, &self.gammas) {
            (SamplerKind::Density { .. }, Some([g1, g2])) => {
                (bartlett(self.cone.field, g1, rng), bartlett(self.cone.field, g2, rng))
            }
            (SamplerKind::Singular { p, pt }, _) => {
                if *pt == 0 {
                    return ConeElement::identity(self.cone.field, self.cone.q);
                }
                (gram(self.cone.field, *p, self.cone.q, rng), gram(self.cone.field, *pt, self.cone.q, rng))
            }
            _ => unreachable!("density sampler always carries its gamma laws"),
        };
        let inv_sqrt = hermitian_spectral_map(&(&w1 + &w2).hermitian_part(), |x| 1.0 / x.sqrt());
        let s = &(&inv_sqrt * &w1) * &inv_sqrt;
        ConeElement::from_hermitian_part(self.cone.field, &s)
    }

    /// `n` samples, reproducible for fixed `seed`.
    pub fn sample_n(&self, n: usize, seed: u64) -> Vec<ConeElement> {
        run_chunks(n, seed, |rng, count| (0..count).map(|_| self.sample(rng)).collect::<Vec<_>>())
            .into_iter()
            .flatten()
            .collect()
    }
}

/// `T T*` with `T` lower triangular, `T_ii = sqrt(Gamma(μ − (i−1)d/2))`,
/// and Gaussian entries below the diagonal (variance 1/2 per real component).
fn bartlett<R: Rng + ?Sized>(field: Field, gammas: &[Gamma<f64>], rng: &mut R) -> CMatrix {
    let q = gammas.len();
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut t = CMatrix::zeros(q, q);
    for i in 0..q {
        t[(i, i)] = Complex64::new(gammas[i].sample(rng).sqrt(), 0.0);
        for j in 0..i {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = if field == Field::Complex { rng.sample(StandardNormal) } else { 0.0 };
            t[(i, j)] = Complex64::new(re * s, im * s);
        }
    }
    &t * &t.adjoint()
}

/// Wishart law `e^{−tr x} Δ(x)^{μ−n/q} / Γ_Ω(μ)` on `Ω`, drawn through the Bartlett factor.
///
/// `E[Z_λ(W)] = (μ)_λ Z_λ(e)`.
#[derive(Debug, Clone)]
pub struct WishartSampler {
    cone: ConeStructure,
    gammas: Vec<Gamma<f64>>,
}

impl WishartSampler {
    // Negated comparisons also reject NaN.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn new(mu: f64, cone: &ConeStructure) -> Result<Self> {
        if !(mu > cone.mu0()) {
            return Err(Error::Parameter(format!("Wishart sampler needs mu > mu0 = {}", cone.mu0())));
        }
        let gammas = (0..cone.q)
            .map(|i| {
                Gamma::new(mu - i as f64 * cone.half_d(), 1.0).map_err(|e| Error::Parameter(format!("gamma shape: {e}")))
            })
            .collect::<Result<_>>()?;
        Ok(WishartSampler { cone: *cone, gammas })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> ConeElement {
        ConeElement::from_hermitian_part(self.cone.field, &bartlett(self.cone.field, &self.gammas, rng))
    }
}

fn gram<R: Rng + ?Sized>(field: Field, rows: usize, q: usize, rng: &mut R) -> CMatrix {
    let x = gaussian_matrix(field, rows, q, rng);
    &x.adjoint() * &x
}

/// Samples of `β_{μ,ν}` in the density regime.
pub fn sample_beta(mu: f64, nu: f64, cone: &ConeStructure, n: usize, seed: u64) -> Result<Vec<ConeElement>> {
    Ok(BetaSampler::density(mu, nu, cone)?.sample_n(n, seed))
}

/// Samples of the group-case law with `μ = pd/2`, `ν = p̃d/2`.
pub fn sample_beta_singular(p: usize, pt: usize, cone: &ConeStructure, n: usize, seed: u64) -> Result<Vec<ConeElement>> {
    Ok(BetaSampler::singular(p, pt, cone)?.sample_n(n, seed))
}

/// `L(Z_λ) = (μ)_λ Z_λ(e) / (μ+ν)_λ` in floating point (complex parameters allowed).
pub fn moment_value_f64(lambda: &Partition, mu: Complex64, nu: Complex64, cone: &ConeStructure) -> Result<Complex64> {
    let den = pochhammer_gen(mu + nu, lambda, cone);
    if den == Complex64::zero() {
        return Err(Error::MomentPole { partition: lambda.clone() });
    }
    let z = to_f64(&zlambda_at_identity(lambda, cone)?);
    Ok(pochhammer_gen(mu, lambda, cone) * z / den)
}

/// The exact moment functional of `β_{μ,ν}` on symmetric polynomials.
#[derive(Debug)]
pub struct MomentFunctional {
    cone: ConeStructure,
    mu: Q,
    nu: Q,
    jack: RwLock<HashMap<Partition, Option<Q>>>,
    monomial: RwLock<HashMap<Partition, Q>>,
}

impl Clone for MomentFunctional {
    fn clone(&self) -> Self {
        MomentFunctional::new(self.mu.clone(), self.nu.clone(), &self.cone)
    }
}

impl MomentFunctional {
    pub fn new(mu: Q, nu: Q, cone: &ConeStructure) -> Self {
        MomentFunctional {
            cone: *cone,
            mu,
            nu,
            jack: RwLock::new(HashMap::new()),
            monomial: RwLock::new(HashMap::new()),
        }
    }

    pub fn mu(&self) -> &Q {
        &self.mu
    }

    pub fn nu(&self) -> &Q {
        &self.nu
    }

    pub fn cone(&self) -> &ConeStructure {
        &self.cone
    }

    fn alpha_basis(&self) -> Basis {
        Basis::JackC(self.cone.alpha_exact())
    }

    /// `L(Z_λ)`, or a pole error when `(μ+ν)_λ = 0`.
    pub fn value(&self, lambda: &Partition) -> Result<Q> {
        if let Some(v) = self.jack.read().expect("memo poisoned").get(lambda) {
            return v.clone().ok_or_else(|| Error::MomentPole { partition: lambda.clone() });
        }
        let den = pochhammer_gen_exact(&(&self.mu + &self.nu), lambda, &self.cone);
        let v = if den.is_zero() {
            None
        } else {
            let num = pochhammer_gen_exact(&self.mu, lambda, &self.cone);
            Some(num * zlambda_at_identity(lambda, &self.cone)? / den)
        };
        self.jack.write().expect("memo poisoned").insert(lambda.clone(), v.clone());
        v.ok_or_else(|| Error::MomentPole { partition: lambda.clone() })
    }

    /// `L(m_κ)` via the Jack expansion of `m_κ`.
    pub fn monomial_value(&self, kappa: &Partition) -> Result<Q> {
        if let Some(v) = self.monomial.read().expect("memo poisoned").get(kappa) {
            return Ok(v.clone());
        }
        let m = SymPolynomial::monomial(kappa.clone(), self.cone.q)?;
        let cfg = SymConfig::default().with_degree(kappa.weight());
        let jack = m.convert(&self.alpha_basis(), &cfg)?;
        let mut acc = Q::zero();
        for (lam, c) in jack.coeffs() {
            acc += c * self.value(lam)?;
        }
        self.monomial.write().expect("memo poisoned").insert(kappa.clone(), acc.clone());
        Ok(acc)
    }

    /// `L(p)` for a polynomial in either basis. Jack-basis input must use `α = 2/d`.
    pub fn of_polynomial(&self, p: &SymPolynomial) -> Result<Q> {
        if p.rank() != self.cone.q {
            return Err(Error::RankMismatch { left: p.rank(), right: self.cone.q });
        }
        let mut acc = Q::zero();
        match p.basis() {
            Basis::MonomialSymmetric => {
                for (k, c) in p.coeffs() {
                    acc += c * self.monomial_value(k)?;
                }
            }
            b if *b == self.alpha_basis() => {
                for (k, c) in p.coeffs() {
                    acc += c * self.value(k)?;
                }
            }
            other => {
                return Err(Error::BasisMismatch { left: other.to_string(), right: self.alpha_basis().to_string() })
            }
        }
        Ok(acc)
    }
}

/// Exact `L(Z_λ)` for rational `(μ, ν)`.
pub fn moment_value(lambda: &Partition, mu: &Q, nu: &Q, cone: &ConeStructure) -> Result<Q> {
    MomentFunctional::new(mu.clone(), nu.clone(), cone).value(lambda)
}

/// Exact `L(p)` for rational `(μ, ν)`.
pub fn moment_of_polynomial(p: &SymPolynomial, mu: &Q, nu: &Q, cone: &ConeStructure) -> Result<Q> {
    MomentFunctional::new(mu.clone(), nu.clone(), cone).of_polynomial(p)
}

/// Nonnegative weight on `Ω̄_e` multiplying `p²` in a moment matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Localizer {
    #[serde(rename = "1")]
    One,
    #[serde(rename = "det(x)")]
    DetX,
    #[serde(rename = "det(e-x)")]
    DetEminusX,
}

impl Localizer {
    pub const ALL: [Localizer; 3] = [Localizer::One, Localizer::DetX, Localizer::DetEminusX];

    pub fn polynomial(self, q: usize) -> SymPolynomial {
        match self {
            Localizer::One => SymPolynomial::one(Basis::MonomialSymmetric, q),
            Localizer::DetX => det_poly(q),
            Localizer::DetEminusX => det_e_minus_x_poly(q),
        }
    }

    pub fn degree(self, q: usize) -> usize {
        match self {
            Localizer::One => 0,
            _ => q,
        }
    }
}

impl fmt::Display for Localizer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Localizer::One => "1",
            Localizer::DetX => "det(x)",
            Localizer::DetEminusX => "det(e-x)",
        })
    }
}

impl FromStr for Localizer {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "1" | "one" => Ok(Localizer::One),
            "det(x)" | "det" | "detx" => Ok(Localizer::DetX),
            "det(e-x)" | "dete-x" | "detex" => Ok(Localizer::DetEminusX),
            other => Err(Error::Parse(format!("unknown localizer {other:?}"))),
        }
    }
}

/// `M[κ, λ] = L(ℓ · m_κ · m_λ)` over partitions of weight ≤ D, canonical order.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentMatrix {
    pub degree: usize,
    pub localizer: Localizer,
    pub basis: Vec<Partition>,
    pub entries: Vec<Vec<Q>>,
}

impl MomentMatrix {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.entries.iter().flatten().map(to_f64).collect()
    }

    /// Smallest eigenvalue of the floating-point copy.
    pub fn min_eigenvalue(&self) -> f64 {
        let n = self.dim();
        symmetric_eigenvalues(&self.to_f64(), n).last().copied().unwrap_or(0.0)
    }

    /// Largest absolute entry of the floating-point copy.
    pub fn max_abs_entry(&self) -> f64 {
        self.to_f64().iter().fold(0.0, |m, x| m.max(x.abs()))
    }
}

/// Builds the localized moment matrix of degree `d`.
pub fn moment_matrix(d: usize, localizer: Localizer, mf: &MomentFunctional) -> Result<MomentMatrix> {
    let q = mf.cone.q;
    let basis = partitions_up_to(d, q);
    let ell = localizer.polynomial(q);
    let monos: Vec<SymPolynomial> =
        basis.iter().map(|k| SymPolynomial::monomial(k.clone(), q)).collect::<Result<_>>()?;
    let n = basis.len();
    let mut entries = vec![vec![Q::zero(); n]; n];
    for i in 0..n {
        let left = ell.multiply(&monos[i])?;
        for j in i..n {
            let v = mf.of_polynomial(&left.multiply(&monos[j])?)?;
            entries[j][i] = v.clone();
            entries[i][j] = v;
        }
    }
    Ok(MomentMatrix { degree: d, localizer, basis, entries })
}

/// Outcome of the positivity scan.
#[derive(Debug, Clone, PartialEq)]
pub enum Verdict {
    /// `L(ℓ p²) < 0` with `p = Σ witness[κ] m_κ`: conclusive non-positivity.
    NegativeWitness {
        degree: usize,
        localizer: Localizer,
        witness: BTreeMap<Partition, Q>,
        value: Q,
        min_eigenvalue: f64,
    },
    /// Every localized matrix up to `dmax` is PSD; not a proof of positivity.
    NoObstructionUpTo { dmax: usize, min_eigenvalues: Vec<(Localizer, f64)> },
}

impl Verdict {
    pub fn is_witness(&self) -> bool {
        matches!(self, Verdict::NegativeWitness { .. })
    }
}

/// Checks the theorem hypothesis `μ > μ0 + kq + 3/2` for the level `k ≥ 1` implied by `ν`.
pub fn dichotomy_hypothesis(mu: &Q, nu: &Q, cone: &ConeStructure) -> Result<()> {
    let k = minimal_level(to_f64(nu), cone).max(1);
    let need = cone.mu0_exact() + q_int((k * cone.q) as i64) + q_frac(3, 2);
    if *mu <= need {
        return Err(Error::Parameter(format!("mu = {mu} must exceed mu0 + kq + 3/2 = {need} (k = {k})")));
    }
    Ok(())
}

/// Scans `D = 1..=dmax` and all three localizers for an exact negative direction.
pub fn positivity_classify(mu: &Q, nu: &Q, cone: &ConeStructure, dmax: usize) -> Result<Verdict> {
    dichotomy_hypothesis(mu, nu, cone)?;
    let mf = MomentFunctional::new(mu.clone(), nu.clone(), cone);
    let mut last = Vec::new();
    for d in 1..=dmax {
        last.clear();
        for loc in Localizer::ALL {
            let m = moment_matrix(d, loc, &mf)?;
            match exact_psd(&m.entries) {
                ExactDefiniteness::Indefinite { witness, value } => {
                    let witness = m
                        .basis
                        .iter()
                        .cloned()
                        .zip(witness)
                        .filter(|(_, c)| !c.is_zero())
                        .collect();
                    return Ok(Verdict::NegativeWitness {
                        degree: d,
                        localizer: loc,
                        witness,
                        value,
                        min_eigenvalue: m.min_eigenvalue(),
                    });
                }
                ExactDefiniteness::PositiveSemidefinite => last.push((loc, m.min_eigenvalue())),
            }
        }
    }
    Ok(Verdict::NoObstructionUpTo { dmax, min_eigenvalues: last })
}

/// A univariate polynomial `Σ a_m x^m` with exact coefficients.
pub type Poly1 = Vec<Q>;

fn rank1_hypotheses(mu: &Q, nu: &Q, k: usize) -> Result<()> {
    let kq = q_int(k as i64);
    if *mu <= kq {
        return Err(Error::Parameter(format!("mu = {mu} must exceed k = {k}")));
    }
    if *nu <= -kq {
        return Err(Error::Parameter(format!("nu = {nu} must exceed -k = -{k}")));
    }
    Ok(())
}

/// Terms `(c, s)` of `(d/dx)^k (p(x) x^{μ−1})`, each `c · x^{s−1}`.
fn differentiate_rank1(p: &[Q], mu: &Q, k: usize) -> Vec<(Q, Q)> {
    p.iter()
        .enumerate()
        .filter(|(_, a)| !a.is_zero())
        .map(|(m, a)| {
            // x^{μ+m−1} differentiated k times
            let mut c = a.clone();
            let mut e = mu + q_int(m as i64) - Q::one();
            for _ in 0..k {
                c *= &e;
                e -= Q::one();
            }
            (c, e + Q::one())
        })
        .collect()
}

/// Rank-one extension
/// `β_{μ,ν}(p) = Γ(μ+ν)/(Γ(μ)Γ(ν+k)) ∫_0^1 (d/dx)^k (p(x) x^{μ−1}) (1−x)^{ν+k−1} dx`,
/// with every term integrated by an exact Beta ratio.
pub fn dist_ext_rank1_exact(p: &[Q], mu: &Q, nu: &Q, k: usize) -> Result<Q> {
    rank1_hypotheses(mu, nu, k)?;
    let mut acc = Q::zero();
    for (c, s) in differentiate_rank1(p, mu, k) {
        // B(s, ν+k) Γ(μ+ν) / (Γ(μ) Γ(ν+k)) = Γ(s) Γ(μ+ν) / (Γ(μ) Γ(s+ν+k)),
        // with s = μ + (m − k) and s + ν + k = μ + ν + m.
        let shift = &s - mu;
        let shift = shift.to_integer().try_into().map_err(|_| Error::Parameter("exponent shift too large".into()))?;
        let total = &s + nu + q_int(k as i64) - mu - nu;
        let total: i64 = total.to_integer().try_into().map_err(|_| Error::Parameter("degree too large".into()))?;
        let num = gamma_ratio(mu, shift).ok_or_else(|| Error::Parameter("gamma pole in numerator".into()))?;
        let den = rising(&(mu + nu), total as u32);
        if den.is_zero() {
            return Err(Error::MomentPole { partition: Partition::row(total as u32) });
        }
        acc += c * num / den;
    }
    Ok(acc)
}

/// Same pairing with classical Beta values in floating point.
pub fn dist_ext_rank1_f64(p: &[f64], mu: f64, nu: f64, k: usize) -> Result<f64> {
    if !(mu > k as f64 && nu > -(k as f64)) {
        return Err(Error::Parameter(format!("need mu > k and nu > -k (mu = {mu}, nu = {nu}, k = {k})")));
    }
    let t = nu + k as f64;
    let norm = (special::ln_gamma_abs(mu + nu) - special::ln_gamma_abs(mu) - special::ln_gamma_abs(t)).exp()
        * (special::gamma_real(mu + nu).signum() * special::gamma_real(t).signum());
    let mut acc = 0.0;
    for (m, &a) in p.iter().enumerate() {
        if a == 0.0 {
            continue;
        }
        let mut c = a;
        let mut e = mu + m as f64 - 1.0;
        for _ in 0..k {
            c *= e;
            e -= 1.0;
        }
        acc += c * special::beta(e + 1.0, t);
    }
    Ok(acc * norm)
}

/// `max_p |L_{μ,ν}(Δ(e−x) p) − c L_{μ,ν+1}(p)|` over monomials of degree ≤ `degree`,
/// with `c = Π_j (ν − jd/2)/(μ+ν − jd/2)`.
pub fn product_relation_check(mu: &Q, nu: &Q, cone: &ConeStructure, degree: usize) -> Result<Q> {
    let half_d = q_frac(cone.d() as i64, 2);
    let mut c = Q::one();
    for j in 0..cone.q {
        let shift = &half_d * q_int(j as i64);
        let den = mu + nu - &shift;
        if den.is_zero() {
            return Err(Error::MomentPole { partition: Partition::column(j + 1) });
        }
        c *= (nu - &shift) / den;
    }
    let left = MomentFunctional::new(mu.clone(), nu.clone(), cone);
    let right = MomentFunctional::new(mu.clone(), nu + Q::one(), cone);
    let ell = det_e_minus_x_poly(cone.q);
    let mut worst = Q::zero();
    for kappa in partitions_up_to(degree, cone.q) {
        let m = SymPolynomial::monomial(kappa, cone.q)?;
        let lhs = left.of_polynomial(&ell.multiply(&m)?)?;
        let rhs = &c * right.of_polynomial(&m)?;
        let diff = (lhs - rhs).abs();
        if diff > worst {
            worst = diff;
        }
    }
    Ok(worst)
}

/// Wallach membership and detector verdict for one `ν`.
#[derive(Debug, Clone, PartialEq)]
pub struct ClassifiedPoint {
    pub nu: Q,
    pub wallach: bool,
    pub verdict: Verdict,
}

impl ClassifiedPoint {
    /// A witness at a Wallach point contradicts the theorem.
    pub fn hard_failure(&self) -> bool {
        self.wallach && self.verdict.is_witness()
    }

    /// Non-Wallach point without a witness.
    pub fn inconclusive(&self) -> bool {
        !self.wallach && !self.verdict.is_witness()
    }
}

/// Classifies one point; combines [`wallach_contains_exact`] with [`positivity_classify`].
pub fn classify_point(mu: &Q, nu: &Q, cone: &ConeStructure, dmax: usize) -> Result<ClassifiedPoint> {
    Ok(ClassifiedPoint {
        nu: nu.clone(),
        wallach: wallach_contains_exact(nu, cone),
        verdict: positivity_classify(mu, nu, cone, dmax)?,
    })
}
