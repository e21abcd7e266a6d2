//! Checks of the Sonine-type integral representations.

use num_complex::Complex64;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::bessel::{BesselSeries, TruncationControl};
use crate::beta::{classify_point, dist_ext_rank1_exact, BetaSampler, ClassifiedPoint, MomentFunctional};
use crate::cone::{pochhammer_gen_exact, zlambda_at_identity, ConeStructure};
use crate::error::{Error, Result};
use crate::jack::jack_c_eval;
use crate::jordan::ConeElement;
use crate::mc::{run_chunks, Estimate, Stats};
use crate::partition::{partitions_up_to, Partition};
use crate::quadrature::{integrate, QuadConfig};
use crate::rational::{factorial, q_int, rising, to_f64, Q};
use crate::special::gamma_real;
use crate::symfun::{Basis, SymPolynomial};

/// Normalized Bessel function `j_α(z) = ₀F₁(α+1; −z²/4)` evaluated through the rank-one series.
#[derive(Debug, Clone)]
pub struct RankOneBessel {
    series: BesselSeries,
}

impl RankOneBessel {
    pub fn new(alpha: f64) -> Result<Self> {
        let series = BesselSeries::real(alpha + 1.0, &ConeStructure::real(1), TruncationControl::default())?;
        Ok(RankOneBessel { series })
    }

    pub fn eval(&self, z: f64) -> Result<f64> {
        Ok(self.series.eval_spectrum(&[z * z / 4.0])?.re)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank1Point {
    pub z: f64,
    pub series: f64,
    pub integral: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Rank1Report {
    pub alpha: f64,
    pub beta: f64,
    pub max_residual: f64,
    pub points: Vec<Rank1Point>,
}

/// Compares `j_{α+β}(z)` with
/// `2Γ(α+β+1)/(Γ(α+1)Γ(β)) ∫_0^1 j_α(zx) x^{2α+1} (1−x²)^{β−1} dx`.
///
/// The integral is split at `x = 1/2`. For `α < −1/2` the left piece uses
/// `w = x^{2α+2}`; for `β < 1` the right piece uses `t = (1−x²)^β`. Both
/// substitutions remove the endpoint singularities.
pub fn sonine_rank1_quadrature(alpha: f64, beta: f64, zs: &[f64]) -> Result<Rank1Report> {
    if !(alpha > -1.0 && beta > 0.0) {
        return Err(Error::Parameter(format!("need alpha > -1 and beta > 0 (alpha = {alpha}, beta = {beta})")));
    }
    let inner = RankOneBessel::new(alpha)?;
    let outer = RankOneBessel::new(alpha + beta)?;
    let norm = 2.0 * gamma_real(alpha + beta + 1.0) / (gamma_real(alpha + 1.0) * gamma_real(beta));
    let cfg = QuadConfig::default();
    let mut points = Vec::with_capacity(zs.len());
    let mut max_residual: f64 = 0.0;
    for &z in zs {
        let j = |x: f64| inner.eval(z * x).unwrap_or(f64::NAN);
        let left = if alpha < -0.5 {
            let a2 = 2.0 * alpha + 2.0;
            integrate(|w| j(w.powf(1.0 / a2)) * (1.0 - w.powf(2.0 / a2)).powf(beta - 1.0) / a2, 0.0, 0.5f64.powf(a2), &cfg)?
        } else {
            integrate(|x| j(x) * x.powf(2.0 * alpha + 1.0) * (1.0 - x * x).powf(beta - 1.0), 0.0, 0.5, &cfg)?
        };
        let right = if beta < 1.0 {
            integrate(
                |t| {
                    let x = (1.0 - t.powf(1.0 / beta)).sqrt();
                    j(x) * x.powf(2.0 * alpha) / (2.0 * beta)
                },
                0.0,
                0.75f64.powf(beta),
                &cfg,
            )?
        } else {
            integrate(|x| j(x) * x.powf(2.0 * alpha + 1.0) * (1.0 - x * x).powf(beta - 1.0), 0.5, 1.0, &cfg)?
        };
        let integral = norm * (left.value + right.value);
        let series = outer.eval(z)?;
        if !integral.is_finite() {
            return Err(Error::Quadrature(format!("non-finite value at z = {z}")));
        }
        max_residual = max_residual.max((series - integral).abs());
        points.push(Rank1Point { z, series, integral });
    }
    Ok(Rank1Report { alpha, beta, max_residual, points })
}

/// Outcome of a Monte Carlo Sonine check.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SonineMcReport {
    /// `J_{μ+ν}(r)` by the series.
    pub series: f64,
    /// Mean of `J_μ(P(√s) r)` over beta samples `s`.
    pub mc_mean: f64,
    pub std_error: f64,
    pub residual: f64,
    pub samples: u64,
}

impl SonineMcReport {
    /// `residual < max(k·SE, floor)`.
    pub fn passes(&self, k: f64, floor: f64) -> bool {
        self.residual < (k * self.std_error).max(floor)
    }
}

/// `J_{μ+ν}(r)` against the beta average of `J_μ(P(√s) r)`.
///
/// `P(√s) r` and `P(√r) s` have the same spectrum, so the square root is
/// taken once, of `r`.
pub fn sonine_mc_with_sampler(
    sampler: &BetaSampler,
    r: &ConeElement,
    cone: &ConeStructure,
    n: usize,
    seed: u64,
    ctl: TruncationControl,
) -> Result<SonineMcReport> {
    let (mu, nu) = sampler.params();
    let series = BesselSeries::real(mu + nu, cone, ctl)?.eval(r)?.re;
    let inner = BesselSeries::real(mu, cone, ctl)?;
    let root = r.sqrt_psd()?;
    let parts = run_chunks(n, seed, |rng, count| -> Result<Stats> {
        let mut st = Stats::default();
        for _ in 0..count {
            let s = sampler.sample(rng);
            st.push(inner.eval(&root.quad_rep(&s))?.re);
        }
        Ok(st)
    });
    let mut tot = Stats::default();
    for p in parts {
        tot.merge(&p?);
    }
    Ok(SonineMcReport {
        series,
        mc_mean: tot.mean,
        std_error: tot.std_error(),
        residual: (series - tot.mean).abs(),
        samples: tot.n,
    })
}

/// Sonine check in the density regime `μ, ν > μ0`.
pub fn sonine_cone_mc(
    mu: f64,
    nu: f64,
    r: &ConeElement,
    cone: &ConeStructure,
    n: usize,
    seed: u64,
    ctl: TruncationControl,
) -> Result<SonineMcReport> {
    sonine_mc_with_sampler(&BetaSampler::density(mu, nu, cone)?, r, cone, n, seed, ctl)
}

/// Term-by-term check of `J_{μ+ν}(r) = β_{μ,ν}(s ↦ J_μ(P(√s) r))` on truncations.
#[derive(Debug, Clone, Serialize)]
pub struct ExtendedReport {
    pub degree: usize,
    /// `Σ_λ |a_λ − b_λ|` over coefficients of `Z_λ(r)`, exact.
    pub exact_discrepancy: String,
    pub exact_zero: bool,
    /// Largest difference between the two truncations on the grid.
    pub max_float_residual: f64,
    /// Largest difference between the truncation and the full series.
    pub max_tail: f64,
}

/// For each `|λ| ≤ K`, the coefficient of `Z_λ(r)` on the left is
/// `(−1)^{|λ|}/((μ+ν)_λ |λ|!)`. On the right the functional acts on the
/// K-averaged integrand `Z_λ(P(√s) r) → Z_λ(r) Z_λ(s)/Z_λ(e)`, giving
/// `(−1)^{|λ|}/((μ)_λ |λ|!) · L(Z_λ)/Z_λ(e)`.
pub fn sonine_extended_polynomial(
    mu: &Q,
    nu: &Q,
    cone: &ConeStructure,
    spectra: &[Vec<f64>],
    degree: usize,
) -> Result<ExtendedReport> {
    let mf = MomentFunctional::new(mu.clone(), nu.clone(), cone);
    let basis = Basis::JackC(cone.alpha_exact());
    let mut lhs = Vec::new();
    let mut rhs = Vec::new();
    let mut discrepancy = Q::zero();
    let sum = mu + nu;
    for lam in partitions_up_to(degree, cone.q) {
        let k = lam.weight() as u32;
        let sign = if k.is_multiple_of(2) { q_int(1) } else { q_int(-1) };
        let den_l = pochhammer_gen_exact(&sum, &lam, cone) * factorial(k);
        let den_r = pochhammer_gen_exact(mu, &lam, cone) * factorial(k);
        if den_l.is_zero() {
            return Err(Error::MomentPole { partition: lam });
        }
        if den_r.is_zero() {
            return Err(Error::PochhammerZero { partition: lam });
        }
        let a = &sign / den_l;
        let z_lam = SymPolynomial::basis_element(lam.clone(), basis.clone(), cone.q)?;
        let b = &sign / den_r * mf.of_polynomial(&z_lam)? / zlambda_at_identity(&lam, cone)?;
        discrepancy += (&a - &b).abs();
        lhs.push((lam.clone(), to_f64(&a)));
        rhs.push((lam, to_f64(&b)));
    }
    let full = BesselSeries::real(to_f64(&sum), cone, TruncationControl::default())?;
    let mut max_float_residual: f64 = 0.0;
    let mut max_tail: f64 = 0.0;
    for xi in spectra {
        let eval = |terms: &[(Partition, f64)]| -> f64 {
            terms.iter().map(|(l, c)| c * jack_c_eval(l, cone.alpha(), xi)).sum()
        };
        let tl = eval(&lhs);
        let tr = eval(&rhs);
        max_float_residual = max_float_residual.max((tl - tr).abs());
        max_tail = max_tail.max((full.eval_spectrum(xi)?.re - tl).abs());
    }
    Ok(ExtendedReport {
        degree,
        exact_zero: discrepancy.is_zero(),
        exact_discrepancy: discrepancy.to_string(),
        max_float_residual,
        max_tail,
    })
}

/// Rank-one version through the independent distributional pairing:
/// applies [`dist_ext_rank1_exact`] to the truncated Bessel polynomial
/// `s ↦ Σ_{m ≤ K} (−rs)^m / ((μ)_m m!)` and compares with
/// `Σ_{m ≤ K} (−r)^m / ((μ+ν)_m m!)`. Returns the exact difference.
pub fn sonine_extended_rank1(mu: &Q, nu: &Q, k: usize, r: &Q, degree: usize) -> Result<Q> {
    let mut poly = Vec::with_capacity(degree + 1);
    let mut expected = Q::zero();
    for m in 0..=degree as u32 {
        let sign = if m % 2 == 0 { q_int(1) } else { q_int(-1) };
        let rm = num_traits::pow(r.clone(), m as usize);
        let den = rising(mu, m) * factorial(m);
        if den.is_zero() {
            return Err(Error::PochhammerZero { partition: Partition::row(m) });
        }
        poly.push(&sign * &rm / den);
        let den2 = rising(&(mu + nu), m) * factorial(m);
        if den2.is_zero() {
            return Err(Error::MomentPole { partition: Partition::row(m) });
        }
        expected += sign * rm / den2;
    }
    Ok(dist_ext_rank1_exact(&poly, mu, nu, k)? - expected)
}

/// Empirical against exact moment for one partition.
#[derive(Debug, Clone, Serialize)]
pub struct MomentComparison {
    pub partition: Partition,
    pub empirical: Estimate,
    pub exact: f64,
    /// `|empirical − exact| / SE`.
    pub z_score: f64,
}

impl MomentComparison {
    pub fn within(&self, k: f64) -> bool {
        (self.empirical.value - self.exact).abs() <= k * self.empirical.std_error
    }
}

/// Empirical `Z_λ` moments (`1 ≤ |λ| ≤ degree`) of `P(√s) r` with
/// `r ~ β_{μ,ν1}` and `s ~ β_{μ+ν1,ν2}`, against `L_{μ,ν1+ν2}(Z_λ)`.
/// `ν2 = 0` makes the second factor the identity.
pub fn composition_check(
    mu: &Q,
    nu1: &Q,
    nu2: &Q,
    cone: &ConeStructure,
    n: usize,
    seed: u64,
    degree: usize,
) -> Result<Vec<MomentComparison>> {
    let (m, a, b) = (to_f64(mu), to_f64(nu1), to_f64(nu2));
    if m <= 2.0 * cone.mu0() + 1.0 {
        return Err(Error::Parameter(format!("mu = {m} must exceed 2 mu0 + 1 = {}", 2.0 * cone.mu0() + 1.0)));
    }
    let first = BetaSampler::density(m, a, cone)?;
    let second = if nu2.is_zero() { None } else { Some(BetaSampler::density(m + a, b, cone)?) };
    let lambdas: Vec<Partition> = partitions_up_to(degree, cone.q).into_iter().filter(|l| !l.is_empty()).collect();
    let alpha = cone.alpha();
    let parts = run_chunks(n, seed, |rng, count| -> Result<Vec<Stats>> {
        let mut st = vec![Stats::default(); lambdas.len()];
        for _ in 0..count {
            let r = first.sample(rng);
            let t = match &second {
                Some(sm) => sm.sample(rng).sqrt_psd()?.quad_rep(&r),
                None => r,
            };
            for (s, l) in st.iter_mut().zip(&lambdas) {
                s.push(jack_c_eval(l, alpha, t.eigenvalues()));
            }
        }
        Ok(st)
    });
    let mut tot = vec![Stats::default(); lambdas.len()];
    for p in parts {
        for (t, s) in tot.iter_mut().zip(p?) {
            t.merge(&s);
        }
    }
    let target = MomentFunctional::new(mu.clone(), nu1 + nu2, cone);
    lambdas
        .into_iter()
        .zip(tot)
        .map(|(partition, st)| {
            let exact = to_f64(&target.value(&partition)?);
            let empirical = Estimate::from(st);
            let z_score = (empirical.value - exact).abs() / empirical.std_error.max(f64::MIN_POSITIVE);
            Ok(MomentComparison { partition, empirical, exact, z_score })
        })
        .collect()
}

/// Wallach predicate against the detector for a list of `ν`.
#[derive(Debug, Clone)]
pub struct TheoremBTable {
    pub cone: ConeStructure,
    pub mu: Q,
    pub dmax: usize,
    pub rows: Vec<ClassifiedPoint>,
}

impl TheoremBTable {
    pub fn hard_failures(&self) -> impl Iterator<Item = &ClassifiedPoint> {
        self.rows.iter().filter(|r| r.hard_failure())
    }

    pub fn inconclusive(&self) -> impl Iterator<Item = &ClassifiedPoint> {
        self.rows.iter().filter(|r| r.inconclusive())
    }
}

pub fn theorem_b_table(cone: &ConeStructure, mu: &Q, nus: &[Q], dmax: usize) -> Result<TheoremBTable> {
    let rows = nus.iter().map(|nu| classify_point(mu, nu, cone, dmax)).collect::<Result<_>>()?;
    Ok(TheoremBTable { cone: *cone, mu: mu.clone(), dmax, rows })
}

/// Complex helper used by reports: `J_μ` of a spectrum with complex `μ`.
pub fn bessel_complex(mu: Complex64, cone: &ConeStructure, xi: &[f64]) -> Result<Complex64> {
    Ok(BesselSeries::new(mu, cone, TruncationControl::default())?.eval_spectrum(xi)?.value())
}
