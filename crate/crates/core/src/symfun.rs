//! Exact symmetric polynomials in `q` eigenvalue variables, stored either in
//! the monomial-symmetric basis or in the Jack `C^α` basis.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{jack_c_exact, monomial_symmetric, monomial_symmetric_exact};
use crate::partition::{distinct_permutations, enumerate_partitions, Partition};
use crate::rational::{to_f64, Q};

/// Degree and rank caps for exact symmetric-function work.
///
/// Exceeding a cap is an error, never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SymConfig {
    pub degree_cap: usize,
    pub rank_cap: usize,
}

impl Default for SymConfig {
    fn default() -> Self {
        SymConfig { degree_cap: 8, rank_cap: 3 }
    }
}

impl SymConfig {
    /// Same rank cap, degree cap raised to at least `degree`.
    pub fn with_degree(self, degree: usize) -> Self {
        SymConfig { degree_cap: self.degree_cap.max(degree), ..self }
    }

    pub fn check(&self, degree: usize, rank: usize) -> Result<()> {
        if rank > self.rank_cap {
            return Err(Error::RankCapExceeded { rank, cap: self.rank_cap });
        }
        if degree > self.degree_cap {
            return Err(Error::DegreeCapExceeded { degree, cap: self.degree_cap });
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Basis {
    MonomialSymmetric,
    JackC(Q),
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::MonomialSymmetric => write!(f, "monomial"),
            Basis::JackC(a) => write!(f, "jack-C(alpha={a})"),
        }
    }
}

/// A symmetric polynomial `Σ c_κ b_κ` over a declared basis `b`.
#[derive(Debug, Clone, PartialEq)]
pub struct SymPolynomial {
    basis: Basis,
    rank: usize,
    coeffs: BTreeMap<Partition, Q>,
}

impl SymPolynomial {
    pub fn zero(basis: Basis, rank: usize) -> Self {
        SymPolynomial { basis, rank, coeffs: BTreeMap::new() }
    }

    /// The constant polynomial `c` (the empty partition has `b_() = 1` in both bases).
    pub fn constant(c: Q, basis: Basis, rank: usize) -> Self {
        Self::from_terms(basis, rank, [(Partition::empty(), c)]).expect("empty partition fits any rank")
    }

    pub fn one(basis: Basis, rank: usize) -> Self {
        Self::constant(Q::one(), basis, rank)
    }

    /// A single basis element `b_κ`.
    pub fn basis_element(kappa: Partition, basis: Basis, rank: usize) -> Result<Self> {
        Self::from_terms(basis, rank, [(kappa, Q::one())])
    }

    pub fn monomial(kappa: Partition, rank: usize) -> Result<Self> {
        Self::basis_element(kappa, Basis::MonomialSymmetric, rank)
    }

    pub fn from_terms(
        basis: Basis,
        rank: usize,
        terms: impl IntoIterator<Item = (Partition, Q)>,
    ) -> Result<Self> {
        let mut p = SymPolynomial::zero(basis, rank);
        for (k, c) in terms {
            if k.len() > rank {
                return Err(Error::RankExceeded { partition: k, rank });
            }
            p.add_term(k, c);
        }
        Ok(p)
    }

    fn add_term(&mut self, k: Partition, c: Q) {
        if c.is_zero() {
            return;
        }
        let entry = self.coeffs.entry(k.clone()).or_insert_with(Q::zero);
        *entry += c;
        if entry.is_zero() {
            self.coeffs.remove(&k);
        }
    }

    pub fn basis(&self) -> &Basis {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn coeffs(&self) -> &BTreeMap<Partition, Q> {
        &self.coeffs
    }

    pub fn coeff(&self, k: &Partition) -> Q {
        self.coeffs.get(k).cloned().unwrap_or_else(Q::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Total degree (0 for the zero polynomial).
    pub fn degree(&self) -> usize {
        self.coeffs.keys().map(Partition::weight).max().unwrap_or(0)
    }

    fn check_compatible(&self, other: &SymPolynomial) -> Result<()> {
        if self.rank != other.rank {
            return Err(Error::RankMismatch { left: self.rank, right: other.rank });
        }
        if self.basis != other.basis {
            return Err(Error::BasisMismatch {
                left: self.basis.to_string(),
                right: other.basis.to_string(),
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &SymPolynomial) -> Result<SymPolynomial> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (k, c) in &other.coeffs {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &SymPolynomial) -> Result<SymPolynomial> {
        self.add(&other.scale(&-Q::one()))
    }

    pub fn scale(&self, s: &Q) -> SymPolynomial {
        let mut out = SymPolynomial::zero(self.basis.clone(), self.rank);
        for (k, c) in &self.coeffs {
            out.add_term(k.clone(), c * s);
        }
        out
    }

    /// Exact product; both factors must be in the monomial-symmetric basis.
    pub fn multiply(&self, other: &SymPolynomial) -> Result<SymPolynomial> {
        self.check_compatible(other)?;
        if self.basis != Basis::MonomialSymmetric {
            return Err(Error::BasisMismatch {
                left: self.basis.to_string(),
                right: Basis::MonomialSymmetric.to_string(),
            });
        }
        let mut out = SymPolynomial::zero(Basis::MonomialSymmetric, self.rank);
        for (ka, ca) in &self.coeffs {
            for (kb, cb) in &other.coeffs {
                let c = ca * cb;
                for (nu, mult) in monomial_product(ka, kb, self.rank) {
                    out.add_term(nu, &c * Q::from_integer(mult.into()));
                }
            }
        }
        Ok(out)
    }

    /// Integer power in the monomial-symmetric basis.
    pub fn pow(&self, e: u32) -> Result<SymPolynomial> {
        let mut acc = SymPolynomial::one(self.basis.clone(), self.rank);
        for _ in 0..e {
            acc = acc.multiply(self)?;
        }
        Ok(acc)
    }

    /// Expresses the polynomial in `target`.
    pub fn convert(&self, target: &Basis, cfg: &SymConfig) -> Result<SymPolynomial> {
        cfg.check(self.degree(), self.rank)?;
        if &self.basis == target {
            return Ok(self.clone());
        }
        let monomial = self.to_monomial();
        match target {
            Basis::MonomialSymmetric => Ok(monomial),
            Basis::JackC(alpha) => Ok(monomial_to_jack(&monomial, alpha)),
        }
    }

    fn to_monomial(&self) -> SymPolynomial {
        match &self.basis {
            Basis::MonomialSymmetric => self.clone(),
            Basis::JackC(alpha) => {
                let mut out = SymPolynomial::zero(Basis::MonomialSymmetric, self.rank);
                for (lam, c) in &self.coeffs {
                    for (kappa, a) in jack_c_exact(lam, alpha, self.rank).iter() {
                        out.add_term(kappa.clone(), c * a);
                    }
                }
                out
            }
        }
    }

    /// Floating-point evaluation at eigenvalues `xi` (length = rank).
    pub fn eval(&self, xi: &[f64]) -> f64 {
        let m = self.to_monomial();
        m.coeffs
            .iter()
            .map(|(k, c)| to_f64(c) * monomial_symmetric(k, xi))
            .sum()
    }

    /// Exact evaluation at rational eigenvalues.
    pub fn eval_exact(&self, xi: &[Q]) -> Q {
        let m = self.to_monomial();
        m.coeffs
            .iter()
            .fold(Q::zero(), |acc, (k, c)| acc + c * monomial_symmetric_exact(k, xi))
    }
}

impl fmt::Display for SymPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return write!(f, "0");
        }
        let sym = match self.basis {
            Basis::MonomialSymmetric => "m",
            Basis::JackC(_) => "C",
        };
        for (i, (k, c)) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{c}*{sym}{k}")?;
        }
        Ok(())
    }
}

/// Structure constants `m_κ m_λ = Σ_ν c_ν m_ν` in `q` variables.
fn monomial_product(ka: &Partition, kb: &Partition, q: usize) -> BTreeMap<Partition, u64> {
    let mut out = BTreeMap::new();
    let pa = distinct_permutations(ka.parts(), q);
    let pb = distinct_permutations(kb.parts(), q);
    // The coefficient of m_ν is the coefficient of x^ν with ν sorted decreasingly;
    // fix the exponent vector of the first factor's orbit and match the second.
    for a in &pa {
        for b in &pb {
            let s: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
            if s.windows(2).all(|w| w[0] >= w[1]) {
                *out.entry(Partition::from_unsorted(&s)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Triangular solve: monomial coefficients to `C^α` coefficients, degree by degree,
/// peeling off the lexicographically largest monomial each step.
fn monomial_to_jack(p: &SymPolynomial, alpha: &Q) -> SymPolynomial {
    let q = p.rank;
    let mut residual = p.coeffs.clone();
    let mut out = SymPolynomial::zero(Basis::JackC(alpha.clone()), q);
    let max_degree = p.degree();
    for k in 0..=max_degree {
        for lam in enumerate_partitions(k, q) {
            let Some(r) = residual.get(&lam).cloned() else { continue };
            if r.is_zero() {
                continue;
            }
            let expansion = jack_c_exact(&lam, alpha, q);
            let c = r / &expansion[&lam];
            for (kappa, a) in expansion.iter() {
                let entry = residual.entry(kappa.clone()).or_insert_with(Q::zero);
                *entry -= &c * a;
            }
            out.add_term(lam, c);
        }
    }
    debug_assert!(residual.values().all(Zero::is_zero));
    out
}

/// `(ξ_1 + ... + ξ_q)^k` in the monomial basis.
pub fn power_sum_one(k: u32, q: usize) -> SymPolynomial {
    let e1 = SymPolynomial::monomial(Partition::row(1), q).expect("rank ≥ 1");
    e1.pow(k).expect("same basis")
}

/// Elementary symmetric polynomial `e_j = m_(1^j)`.
pub fn elementary(j: usize, q: usize) -> SymPolynomial {
    if j > q {
        return SymPolynomial::zero(Basis::MonomialSymmetric, q);
    }
    SymPolynomial::monomial(Partition::column(j), q).expect("j ≤ q")
}

/// `Δ(x) = ξ_1 ⋯ ξ_q = m_(1^q)`.
pub fn det_poly(q: usize) -> SymPolynomial {
    elementary(q, q)
}

/// `Δ(e − x) = Π (1 − ξ_i) = Σ_j (−1)^j e_j(ξ)`.
pub fn det_e_minus_x_poly(q: usize) -> SymPolynomial {
    let mut out = SymPolynomial::zero(Basis::MonomialSymmetric, q);
    for j in 0..=q {
        let sign = if j % 2 == 0 { Q::one() } else { -Q::one() };
        out = out.add(&elementary(j, q).scale(&sign)).expect("same basis");
    }
    out
}

/// Every monomial-symmetric basis element of degree ≤ `max_degree`.
pub fn monomial_basis(max_degree: usize, q: usize) -> Vec<SymPolynomial> {
    crate::partition::partitions_up_to(max_degree, q)
        .into_iter()
        .map(|k| SymPolynomial::monomial(k, q).expect("fits rank"))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{q_frac, q_int};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn square_of_first_power_sum() {
        let m1 = SymPolynomial::monomial(p(&[1]), 2).unwrap();
        let sq = m1.multiply(&m1).unwrap();
        assert_eq!(sq.coeff(&p(&[2])), q_int(1));
        assert_eq!(sq.coeff(&p(&[1, 1])), q_int(2));
        assert_eq!(sq.coeffs().len(), 2);
    }

    #[test]
    fn multiply_by_one_is_identity() {
        let poly = SymPolynomial::from_terms(
            Basis::MonomialSymmetric,
            3,
            [(p(&[2, 1]), q_frac(3, 7)), (p(&[1]), q_int(-2))],
        )
        .unwrap();
        let one = SymPolynomial::one(Basis::MonomialSymmetric, 3);
        assert_eq!(poly.multiply(&one).unwrap(), poly);
    }

    #[test]
    fn basis_mismatch_is_an_error() {
        let a = SymPolynomial::monomial(p(&[1]), 2).unwrap();
        let b = SymPolynomial::basis_element(p(&[1]), Basis::JackC(q_int(2)), 2).unwrap();
        assert!(matches!(a.multiply(&b), Err(Error::BasisMismatch { .. })));
        assert!(matches!(b.multiply(&b), Err(Error::BasisMismatch { .. })));
    }

    #[test]
    fn first_degree_conversion() {
        let cfg = SymConfig::default();
        let m1 = SymPolynomial::monomial(p(&[1]), 2).unwrap();
        let j = m1.convert(&Basis::JackC(q_int(2)), &cfg).unwrap();
        assert_eq!(j.coeff(&p(&[1])), q_int(1));
        let back = j.convert(&Basis::MonomialSymmetric, &cfg).unwrap();
        assert_eq!(back, m1);
    }

    #[test]
    fn power_sum_is_all_ones_in_jack_basis() {
        let cfg = SymConfig::default();
        for alpha in [q_int(2), q_int(1), q_frac(2, 3)] {
            for q in 1..=3 {
                for k in 0..=6u32 {
                    let j = power_sum_one(k, q).convert(&Basis::JackC(alpha.clone()), &cfg).unwrap();
                    let parts = enumerate_partitions(k as usize, q);
                    assert_eq!(j.coeffs().len(), parts.len());
                    for lam in parts {
                        assert_eq!(j.coeff(&lam), q_int(1), "k={k} q={q} α={alpha} λ={lam}");
                    }
                }
            }
        }
    }

    #[test]
    fn degree_cap_is_enforced() {
        let cfg = SymConfig::default();
        let big = SymPolynomial::monomial(p(&[9]), 2).unwrap();
        assert!(matches!(
            big.convert(&Basis::JackC(q_int(2)), &cfg),
            Err(Error::DegreeCapExceeded { degree: 9, cap: 8 })
        ));
        assert!(big.convert(&Basis::JackC(q_int(2)), &cfg.with_degree(9)).is_ok());
        let wide = SymPolynomial::monomial(p(&[1, 1, 1, 1]), 4).unwrap();
        assert!(matches!(
            wide.convert(&Basis::JackC(q_int(2)), &cfg),
            Err(Error::RankCapExceeded { .. })
        ));
    }

    #[test]
    fn det_e_minus_x_expansion() {
        let d = det_e_minus_x_poly(2);
        // 1 − (x1 + x2) + x1 x2
        assert_eq!(d.coeff(&Partition::empty()), q_int(1));
        assert_eq!(d.coeff(&p(&[1])), q_int(-1));
        assert_eq!(d.coeff(&p(&[1, 1])), q_int(1));
        let xi = [0.3, 0.6];
        assert!((d.eval(&xi) - 0.7 * 0.4).abs() < 1e-15);
    }

    #[test]
    fn rank_exceeded_rejected() {
        assert!(matches!(
            SymPolynomial::monomial(p(&[1, 1, 1]), 2),
            Err(Error::RankExceeded { .. })
        ));
    }
}
