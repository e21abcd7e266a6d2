//! Structure constants of the cones of positive definite real symmetric and
//! complex Hermitian matrices, and the scalar special functions attached to
//! them: cone gamma and beta functions, generalized Pochhammer symbols,
//! Wallach-set predicates and gamma pole sets.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::jack::{jack_c_exact, monomial_count};
use crate::partition::Partition;
use crate::rational::{q_frac, q_int, to_f64, Q};
use crate::special;

/// Tolerance for deciding set membership of floating-point parameters.
pub const MEMBERSHIP_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Field {
    #[serde(rename = "R")]
    Real,
    #[serde(rename = "C")]
    Complex,
}

impl Field {
    /// Peirce constant `d = dim_R F`.
    pub fn peirce(self) -> usize {
        match self {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Field::Real => "R",
            Field::Complex => "C",
        })
    }
}

impl FromStr for Field {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "R" | "r" | "real" => Ok(Field::Real),
            "C" | "c" | "complex" => Ok(Field::Complex),
            other => Err(Error::Parse(format!("unknown field {other:?} (expected R or C)"))),
        }
    }
}

/// The cone `Ω_q(F)` of positive definite `q×q` Hermitian matrices over `F`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ConeStructure {
    pub field: Field,
    pub q: usize,
}

impl ConeStructure {
    pub fn new(field: Field, q: usize) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parameter("rank must be at least 1".into()));
        }
        Ok(ConeStructure { field, q })
    }

    pub fn real(q: usize) -> Self {
        Self::new(Field::Real, q).expect("positive rank")
    }

    pub fn complex(q: usize) -> Self {
        Self::new(Field::Complex, q).expect("positive rank")
    }

    pub fn d(&self) -> usize {
        self.field.peirce()
    }

    /// Real dimension `n = q + d q(q−1)/2`.
    pub fn n(&self) -> usize {
        self.q + self.d() * self.q * (self.q - 1) / 2
    }

    /// `μ0 = n/q − 1 = d(q−1)/2`, exactly.
    pub fn mu0_exact(&self) -> Q {
        q_frac((self.d() * (self.q - 1)) as i64, 2)
    }

    pub fn mu0(&self) -> f64 {
        (self.d() * (self.q - 1)) as f64 / 2.0
    }

    /// Jack parameter `α = 2/d`, exactly.
    pub fn alpha_exact(&self) -> Q {
        q_frac(2, self.d() as i64)
    }

    pub fn alpha(&self) -> f64 {
        2.0 / self.d() as f64
    }

    /// `d/2` as a float.
    pub fn half_d(&self) -> f64 {
        self.d() as f64 / 2.0
    }

    /// `n/q` as a float.
    pub fn n_over_q(&self) -> f64 {
        self.n() as f64 / self.q as f64
    }

    /// The lattice `{0, d/2, ..., (q−1)d/2}`.
    pub fn wallach_lattice(&self) -> Vec<Q> {
        (0..self.q).map(|j| q_frac((j * self.d()) as i64, 2)).collect()
    }
}

impl fmt::Display for ConeStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Omega_{}({})", self.q, self.field)
    }
}

/// `Γ_Ω(z) = (2π)^{(n−q)/2} Π_j Γ(z − d(j−1)/2)`.
pub fn gamma_cone(z: Complex64, cone: &ConeStructure) -> Result<Complex64> {
    let mut acc = Complex64::new((2.0 * PI).powf((cone.n() - cone.q) as f64 / 2.0), 0.0);
    for j in 0..cone.q {
        let arg = z - cone.half_d() * j as f64;
        if special::near_gamma_pole(arg, MEMBERSHIP_TOL) {
            return Err(Error::GammaPole { z: format!("{z}"), factor: j + 1 });
        }
        acc *= special::gamma(arg);
    }
    Ok(acc)
}

/// `ln |Γ_Ω(x)|` for real `x` off the pole set.
pub fn ln_gamma_cone_abs(x: f64, cone: &ConeStructure) -> Result<f64> {
    let mut acc = (cone.n() - cone.q) as f64 / 2.0 * (2.0 * PI).ln();
    for j in 0..cone.q {
        let arg = x - cone.half_d() * j as f64;
        if special::near_gamma_pole(Complex64::new(arg, 0.0), MEMBERSHIP_TOL) {
            return Err(Error::GammaPole { z: format!("{x}"), factor: j + 1 });
        }
        acc += special::ln_gamma_abs(arg);
    }
    Ok(acc)
}

/// `B_Ω(z, w) = Γ_Ω(z) Γ_Ω(w) / Γ_Ω(z + w)`.
pub fn beta_cone(z: Complex64, w: Complex64, cone: &ConeStructure) -> Result<Complex64> {
    let gz = gamma_cone(z, cone)?;
    let gw = gamma_cone(w, cone)?;
    let gzw = gamma_cone(z + w, cone)?;
    Ok(gz * gw / gzw)
}

/// Generalized Pochhammer symbol `(μ)_λ = Π_j (μ − d(j−1)/2)_{λ_j}`.
pub fn pochhammer_gen(mu: Complex64, lambda: &Partition, cone: &ConeStructure) -> Complex64 {
    lambda
        .parts()
        .iter()
        .enumerate()
        .map(|(j, &p)| special::rising(mu - cone.half_d() * j as f64, p))
        .product()
}

/// Exact generalized Pochhammer symbol for rational `μ`.
pub fn pochhammer_gen_exact(mu: &Q, lambda: &Partition, cone: &ConeStructure) -> Q {
    let half_d = q_frac(cone.d() as i64, 2);
    lambda
        .parts()
        .iter()
        .enumerate()
        .fold(Q::one(), |acc, (j, &p)| {
            acc * crate::rational::rising(&(mu - &half_d * q_int(j as i64)), p)
        })
}

/// `Z_λ(e) = C^{2/d}_λ(1, ..., 1)`, exact.
pub fn zlambda_at_identity(lambda: &Partition, cone: &ConeStructure) -> Result<Q> {
    if lambda.len() > cone.q {
        return Err(Error::RankExceeded { partition: lambda.clone(), rank: cone.q });
    }
    let expansion = jack_c_exact(lambda, &cone.alpha_exact(), cone.q);
    Ok(expansion
        .iter()
        .fold(Q::zero(), |acc, (k, c)| acc + c * q_int(monomial_count(k, cone.q) as i64)))
}

/// Exact membership in the Wallach set `{0, d/2, ..., μ0} ∪ ]μ0, ∞[`.
pub fn wallach_contains_exact(nu: &Q, cone: &ConeStructure) -> bool {
    nu > &cone.mu0_exact() || cone.wallach_lattice().contains(nu)
}

/// Wallach-set membership for a float, lattice points matched to [`MEMBERSHIP_TOL`].
pub fn wallach_contains(nu: f64, cone: &ConeStructure) -> bool {
    on_lattice(nu, cone) || nu > cone.mu0()
}

fn on_lattice(nu: f64, cone: &ConeStructure) -> bool {
    cone.wallach_lattice()
        .iter()
        .any(|p| (nu - to_f64(p)).abs() <= MEMBERSHIP_TOL)
}

/// Membership in `W_{q,d} = {0, d/2, ..., (q−1)d/2} ∪ E_0`.
pub fn wqd_contains(nu: Complex64, cone: &ConeStructure) -> bool {
    (nu.im.abs() <= MEMBERSHIP_TOL && on_lattice(nu.re, cone)) || nu.re > cone.mu0()
}

/// Exact version of [`wqd_contains`] for rational `ν`.
pub fn wqd_contains_exact(nu: &Q, cone: &ConeStructure) -> bool {
    cone.wallach_lattice().contains(nu) || nu > &cone.mu0_exact()
}

/// A real interval with open or closed ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Window {
    pub lo: Q,
    pub hi: Q,
    pub lo_closed: bool,
    pub hi_closed: bool,
}

impl Window {
    pub fn closed(lo: Q, hi: Q) -> Self {
        Window { lo, hi, lo_closed: true, hi_closed: true }
    }

    pub fn open(lo: Q, hi: Q) -> Self {
        Window { lo, hi, lo_closed: false, hi_closed: false }
    }

    pub fn contains(&self, x: &Q) -> bool {
        let above = if self.lo_closed { x >= &self.lo } else { x > &self.lo };
        let below = if self.hi_closed { x <= &self.hi } else { x < &self.hi };
        above && below
    }
}

impl FromStr for Window {
    type Err = Error;

    /// Parses `[a,b]`, `(a,b)`, `[a,b)` or `(a,b]`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let lo_closed = match s.chars().next() {
            Some('[') => true,
            Some('(') => false,
            _ => return Err(Error::Parse(format!("window {s:?} must start with [ or (")))
        };
        let hi_closed = match s.chars().last() {
            Some(']') => true,
            Some(')') => false,
            _ => return Err(Error::Parse(format!("window {s:?} must end with ] or )")))
        };
        let inner = &s[1..s.len() - 1];
        let (a, b) = inner
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("window {s:?} needs two endpoints")))?;
        Ok(Window {
            lo: crate::rational::parse_q(a)?,
            hi: crate::rational::parse_q(b)?,
            lo_closed,
            hi_closed,
        })
    }
}

/// The poles of `Γ_Ω` inside `window`: `{0, d/2, ..., μ0} − ℕ0`, ascending.
pub fn gamma_poles(cone: &ConeStructure, window: &Window) -> Vec<Q> {
    let mut out: Vec<Q> = Vec::new();
    for base in cone.wallach_lattice() {
        let mut p = base;
        while p >= window.lo {
            if window.contains(&p) && !out.contains(&p) {
                out.push(p.clone());
            }
            p -= Q::one();
        }
    }
    out.sort();
    out
}

/// Which hypotheses on `Re μ` a parameter pair satisfies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Hypotheses {
    /// `Re μ, Re ν > μ0`: genuine beta density.
    pub density_regime: bool,
    /// `Re μ > μ0 + kq + 1`: analytic extension to `E_k` exists.
    pub extension: bool,
    /// `Re μ > μ0 + kq + 3/2` with `k ≥ 1`: the positivity dichotomy applies.
    pub dichotomy: bool,
    /// `Re μ > 2μ0 + 1`: composition of beta measures.
    pub composition: bool,
}

/// Beta parameters `(μ, ν)` with extension level `k` (`ν ∈ E_k`).
#[derive(Debug, Clone, PartialEq)]
pub struct BetaParams {
    pub mu: Complex64,
    pub nu: Complex64,
    pub k: usize,
    exact: Option<(Q, Q)>,
}

impl BetaParams {
    /// Real rational parameters; `k` is the smallest level with `ν ∈ E_k`.
    pub fn rational(mu: Q, nu: Q, cone: &ConeStructure) -> Self {
        let k = minimal_level(to_f64(&nu), cone);
        BetaParams {
            mu: Complex64::new(to_f64(&mu), 0.0),
            nu: Complex64::new(to_f64(&nu), 0.0),
            k,
            exact: Some((mu, nu)),
        }
    }

    /// Complex parameters; `k` is the smallest level with `ν ∈ E_k`.
    pub fn complex(mu: Complex64, nu: Complex64, cone: &ConeStructure) -> Self {
        let k = minimal_level(nu.re, cone);
        BetaParams { mu, nu, k, exact: None }
    }

    /// Real parameters, stored exactly as the binary values of the floats.
    pub fn real(mu: f64, nu: f64, cone: &ConeStructure) -> Self {
        match (Q::from_float(mu), Q::from_float(nu)) {
            (Some(m), Some(n)) => Self::rational(m, n, cone),
            _ => Self::complex(Complex64::new(mu, 0.0), Complex64::new(nu, 0.0), cone),
        }
    }

    /// Raises the extension level; fails if `ν ∉ E_k`.
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn with_level(mut self, k: usize, cone: &ConeStructure) -> Result<Self> {
        if !(self.nu.re > cone.mu0() - k as f64) {
            return Err(Error::Parameter(format!(
                "nu = {} is not in E_{k} (Re nu > {})",
                self.nu,
                cone.mu0() - k as f64
            )));
        }
        self.k = k;
        Ok(self)
    }

    /// Exact `(μ, ν)` when both are real rationals.
    pub fn exact(&self) -> Option<(&Q, &Q)> {
        self.exact.as_ref().map(|(m, n)| (m, n))
    }

    pub fn is_real(&self) -> bool {
        self.mu.im == 0.0 && self.nu.im == 0.0
    }

    pub fn hypotheses(&self, cone: &ConeStructure) -> Hypotheses {
        let mu0 = cone.mu0();
        let kq = (self.k * cone.q) as f64;
        let dichotomy_k = self.k.max(1) as f64 * cone.q as f64;
        Hypotheses {
            density_regime: self.mu.re > mu0 && self.nu.re > mu0,
            extension: self.mu.re > mu0 + kq + 1.0,
            dichotomy: self.mu.re > mu0 + dichotomy_k + 1.5,
            composition: self.mu.re > 2.0 * mu0 + 1.0,
        }
    }
}

/// Smallest `k ≥ 0` with `Re ν > μ0 − k`.
pub fn minimal_level(nu_re: f64, cone: &ConeStructure) -> usize {
    let gap = cone.mu0() - nu_re;
    if gap < 0.0 {
        0
    } else {
        (gap.floor() as usize) + 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::parse_q;

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn structure_table() {
        let r3 = ConeStructure::real(3);
        assert_eq!((r3.d(), r3.n()), (1, 6));
        assert_eq!(r3.mu0_exact(), q_int(1));
        let c3 = ConeStructure::complex(3);
        assert_eq!((c3.d(), c3.n()), (2, 9));
        assert_eq!(c3.mu0_exact(), q_int(2));
        assert_eq!(c3.alpha_exact(), q_int(1));
        // n/q − 1 = μ0
        for cone in [r3, c3, ConeStructure::real(1), ConeStructure::complex(2)] {
            assert!((cone.n_over_q() - 1.0 - cone.mu0()).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_cone_values() {
        let one = ConeStructure::real(1);
        assert!((gamma_cone(c(1.0), &one).unwrap() - 1.0).norm() < 1e-15);
        let r2 = ConeStructure::real(2);
        let expected = (2.0 * PI).sqrt() * 1.0 * special::gamma_real(1.5);
        let got = gamma_cone(c(2.0), &r2).unwrap();
        assert!((got.re - expected).abs() < 1e-13 * expected);
        assert!((got.re - 2.221441469079183).abs() < 1e-12);
    }

    #[test]
    fn gamma_cone_pole_names_factor() {
        let r2 = ConeStructure::real(2);
        match gamma_cone(c(0.5), &r2) {
            Err(Error::GammaPole { factor, .. }) => assert_eq!(factor, 2),
            other => panic!("expected pole, got {other:?}"),
        }
    }

    #[test]
    fn beta_cone_values() {
        let one = ConeStructure::real(1);
        assert!((beta_cone(c(1.0), c(1.0), &one).unwrap() - 1.0).norm() < 1e-15);
        let r2 = ConeStructure::real(2);
        let g2 = gamma_cone(c(2.0), &r2).unwrap();
        let g4 = gamma_cone(c(4.0), &r2).unwrap();
        let b = beta_cone(c(2.0), c(2.0), &r2).unwrap();
        assert!((b - g2 * g2 / g4).norm() < 1e-14);
    }

    #[test]
    fn pochhammer_examples() {
        let r2 = ConeStructure::real(2);
        let lam = Partition::new(&[2, 1]).unwrap();
        assert!((pochhammer_gen(c(3.0), &lam, &r2) - 30.0).norm() < 1e-13);
        assert_eq!(pochhammer_gen_exact(&q_int(3), &lam, &r2), q_int(30));
        assert_eq!(pochhammer_gen_exact(&q_frac(1, 2), &lam, &r2), q_int(0));
        let one = Partition::row(1);
        assert!((pochhammer_gen(c(2.7), &one, &r2) - 2.7).norm() < 1e-15);
    }

    #[test]
    fn zlambda_identity_values() {
        let r2 = ConeStructure::real(2);
        assert_eq!(zlambda_at_identity(&Partition::empty(), &r2).unwrap(), q_int(1));
        assert_eq!(zlambda_at_identity(&Partition::row(1), &r2).unwrap(), q_int(2));
        let v = zlambda_at_identity(&Partition::new(&[2, 2]).unwrap(), &r2).unwrap();
        assert!(v > q_int(0));
        assert!(zlambda_at_identity(&Partition::new(&[1, 1, 1]).unwrap(), &r2).is_err());
    }

    #[test]
    fn wallach_examples() {
        let c3 = ConeStructure::complex(3);
        assert!(wallach_contains(1.0, &c3));
        assert!(!wallach_contains(1.5, &c3));
        assert!(wallach_contains(c3.mu0() + 1e-9, &c3));
        assert!(wallach_contains_exact(&q_int(1), &c3));
        assert!(!wallach_contains_exact(&q_frac(3, 2), &c3));
        let r2 = ConeStructure::real(2);
        assert!(wqd_contains(c(r2.mu0() + 1.0), &r2));
        assert!(wqd_contains(c(0.0), &r2));
        assert!(!wqd_contains(c(-0.5), &r2));
        assert!(wqd_contains(Complex64::new(0.7, 3.0), &r2));
    }

    #[test]
    fn pole_windows() {
        let one = ConeStructure::real(1);
        let w: Window = "[-2,1]".parse().unwrap();
        assert_eq!(gamma_poles(&one, &w), vec![q_int(-2), q_int(-1), q_int(0)]);
        let r2 = ConeStructure::real(2);
        let w: Window = "[0,1]".parse().unwrap();
        assert_eq!(gamma_poles(&r2, &w), vec![q_int(0), q_frac(1, 2)]);
        let c2 = ConeStructure::complex(2);
        let w: Window = "(0,1)".parse().unwrap();
        assert!(gamma_poles(&c2, &w).is_empty());
        assert_eq!(parse_q("0.5").unwrap(), q_frac(1, 2));
    }

    #[test]
    fn extension_levels() {
        let r2 = ConeStructure::real(2);
        assert_eq!(minimal_level(0.25, &r2), 1);
        assert_eq!(minimal_level(-0.25, &r2), 1);
        assert_eq!(minimal_level(0.5, &r2), 1);
        assert_eq!(minimal_level(0.75, &r2), 0);
        assert_eq!(minimal_level(-0.5, &r2), 2);
        let p = BetaParams::rational(q_int(12), q_frac(1, 4), &r2);
        assert_eq!(p.k, 1);
        let h = p.hypotheses(&r2);
        assert!(h.dichotomy && h.extension && !h.density_regime);
        assert!(p.clone().with_level(0, &r2).is_err());
    }
}
