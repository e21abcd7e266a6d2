//! Matrix-argument Bessel functions
//! `J_μ(x) = Σ_λ (−1)^{|λ|} Z_λ(x) / ((μ)_λ |λ|!)`
//! by truncated partition series, with two Monte Carlo integral
//! representations used as independent checks.

use std::collections::HashMap;
use std::sync::{Arc, LazyLock, RwLock};

use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::cone::{ConeStructure, Field};
use crate::error::{Error, Result};
use crate::jack::JackTable;
use crate::jordan::{gaussian_matrix, haar_matrix, ConeElement};
use crate::linalg::{hermitian_eigenvalues, CMatrix};
use crate::mc::{run_chunks, ComplexEstimate, ComplexStats};
use crate::partition::Partition;

/// Minimum acceptance rate of the matrix-ball rejection sampler.
pub const MIN_ACCEPTANCE: f64 = 1e-4;

/// Stopping rule for the partition series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TruncationControl {
    pub max_degree: usize,
    pub rel_tol: f64,
    pub stagnation_window: usize,
}

impl Default for TruncationControl {
    fn default() -> Self {
        TruncationControl { max_degree: 60, rel_tol: 1e-12, stagnation_window: 3 }
    }
}

impl TruncationControl {
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn validate(&self) -> Result<()> {
        if self.max_degree < 1 || !(self.rel_tol > 0.0) || self.stagnation_window < 1 {
            return Err(Error::Parameter(format!("invalid truncation control {self:?}")));
        }
        Ok(())
    }
}

/// A series value together with its truncation diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SeriesValue {
    pub re: f64,
    pub im: f64,
    /// Last degree included in the partial sum.
    pub degree: usize,
    /// Absolute value of the last degree block.
    pub last_block: f64,
}

impl SeriesValue {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }
}

type TableKey = (u64, usize, usize);

static TABLES: LazyLock<RwLock<HashMap<TableKey, Arc<JackTable>>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

/// Shared Jack table for `(α, q, max_degree)`.
pub fn jack_table(alpha: f64, q: usize, max_degree: usize) -> Arc<JackTable> {
    let key = (alpha.to_bits(), q, max_degree);
    if let Some(t) = TABLES.read().expect("table cache poisoned").get(&key) {
        return Arc::clone(t);
    }
    let table = Arc::new(JackTable::new(alpha, q, max_degree));
    let mut w = TABLES.write().expect("table cache poisoned");
    Arc::clone(w.entry(key).or_insert(table))
}

/// Precomputed coefficients of `J_μ` for one cone, ready for evaluation at many points.
#[derive(Debug, Clone)]
pub struct BesselSeries {
    cone: ConeStructure,
    mu: Complex64,
    ctl: TruncationControl,
    table: Arc<JackTable>,
    /// Per degree, `(−1)^k/((μ)_λ k!) · C_λ/P_λ` in table order; `None` where `(μ)_λ = 0`.
    coeffs: Vec<Vec<Option<Complex64>>>,
}

/// `(−1)^k α^k / (Π_s (α a(s) + l(s) + α) · (μ)_λ)`, built cell by cell.
fn series_coefficient(lambda: &Partition, mu: Complex64, alpha: f64, half_d: f64) -> Option<Complex64> {
    let mut c = Complex64::new(1.0, 0.0);
    for ((i, j), (arm, leg)) in lambda.cells().zip(lambda.arms_and_legs()) {
        let poch = mu - half_d * i as f64 + j as f64;
        if poch == Complex64::new(0.0, 0.0) {
            return None;
        }
        c *= -alpha / ((alpha * arm as f64 + leg as f64 + alpha) * poch);
    }
    Some(c)
}

impl BesselSeries {
    pub fn new(mu: Complex64, cone: &ConeStructure, ctl: TruncationControl) -> Result<Self> {
        ctl.validate()?;
        let table = jack_table(cone.alpha(), cone.q, ctl.max_degree);
        let coeffs = (0..=ctl.max_degree)
            .map(|k| {
                table
                    .partitions_of_degree(k)
                    .iter()
                    .map(|lam| series_coefficient(lam, mu, cone.alpha(), cone.half_d()))
                    .collect()
            })
            .collect();
        Ok(BesselSeries { cone: *cone, mu, ctl, table, coeffs })
    }

    pub fn real(mu: f64, cone: &ConeStructure, ctl: TruncationControl) -> Result<Self> {
        Self::new(Complex64::new(mu, 0.0), cone, ctl)
    }

    pub fn mu(&self) -> Complex64 {
        self.mu
    }

    pub fn cone(&self) -> &ConeStructure {
        &self.cone
    }

    /// `J_μ` at a point with the given eigenvalues.
    pub fn eval_spectrum(&self, xi: &[f64]) -> Result<SeriesValue> {
        self.sum(xi, false)
    }

    /// `J_μ(−r)` for `r` with eigenvalues `xi ≥ 0`, summed with nonnegative terms
    /// (real `μ > μ0`): `(−1)^k Z_λ(−r) = Z_λ(r) ≥ 0`.
    pub fn eval_negated_spectrum(&self, xi: &[f64]) -> Result<SeriesValue> {
        self.sum(xi, true)
    }

    pub fn eval(&self, x: &ConeElement) -> Result<SeriesValue> {
        self.eval_spectrum(x.eigenvalues())
    }

    fn sum(&self, xi: &[f64], negate: bool) -> Result<SeriesValue> {
        if xi.len() != self.cone.q {
            return Err(Error::Dimension(format!("spectrum of length {} for rank {}", xi.len(), self.cone.q)));
        }
        if self.cone.q == 1 && self.mu.im == 0.0 && !negate {
            return self.sum_rank_one(xi[0]);
        }
        let mut ev = self.table.evaluator(xi);
        let mut total = KahanComplex::default();
        let mut quiet = 0;
        let mut last = 0.0;
        for k in 0..=self.ctl.max_degree {
            let values = ev.next_block().expect("degree within table");
            let mut block = KahanComplex::default();
            for (idx, (&p, c)) in values.iter().zip(&self.coeffs[k]).enumerate() {
                let c = c.ok_or_else(|| Error::PochhammerZero {
                    partition: self.table.partitions_of_degree(k)[idx].clone(),
                })?;
                let c = if negate { c.norm() * Complex64::new(1.0, 0.0) } else { c };
                block.add(c * p);
            }
            let b = block.value();
            total.add(b);
            last = b.norm();
            if last < self.ctl.rel_tol * total.value().norm().max(1e-300) {
                quiet += 1;
                if quiet >= self.ctl.stagnation_window {
                    let v = total.value();
                    return Ok(SeriesValue { re: v.re, im: v.im, degree: k, last_block: last });
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::NonConvergence { max_degree: self.ctl.max_degree, last_block: last })
    }

    /// Real rank-one series `Σ (−x)^m / ((μ)_m m!)` carried in double-double,
    /// so that the cancellation of terms of size `e^{2√|x|}` costs no accuracy.
    fn sum_rank_one(&self, x: f64) -> Result<SeriesValue> {
        let mu = self.mu.re;
        let mut term = Dd::from(1.0);
        let mut total = Dd::from(1.0);
        let mut quiet = 0;
        let mut last = 1.0;
        for m in 1..=self.ctl.max_degree {
            let den = two_sum(mu, (m - 1) as f64);
            if den.hi == 0.0 {
                return Err(Error::PochhammerZero { partition: Partition::row(m as u32) });
            }
            term = term.mul_f64(-x).div(den.mul_f64(m as f64));
            total = total.add(term);
            last = term.hi.abs();
            if last < self.ctl.rel_tol * total.hi.abs().max(1e-300) {
                quiet += 1;
                if quiet >= self.ctl.stagnation_window {
                    return Ok(SeriesValue { re: total.hi + total.lo, im: 0.0, degree: m, last_block: last });
                }
            } else {
                quiet = 0;
            }
        }
        Err(Error::NonConvergence { max_degree: self.ctl.max_degree, last_block: last })
    }
}

/// Unevaluated sum `hi + lo` (double-double), built from error-free transforms.
#[derive(Debug, Clone, Copy)]
struct Dd {
    hi: f64,
    lo: f64,
}

fn two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    let bb = s - a;
    Dd { hi: s, lo: (a - (s - bb)) + (b - bb) }
}

fn fast_two_sum(a: f64, b: f64) -> Dd {
    let s = a + b;
    Dd { hi: s, lo: b - (s - a) }
}

impl From<f64> for Dd {
    fn from(x: f64) -> Self {
        Dd { hi: x, lo: 0.0 }
    }
}

impl Dd {
    fn add(self, o: Dd) -> Dd {
        let s = two_sum(self.hi, o.hi);
        let t = two_sum(self.lo, o.lo);
        let r = fast_two_sum(s.hi, s.lo + t.hi);
        fast_two_sum(r.hi, r.lo + t.lo)
    }

    fn mul_f64(self, b: f64) -> Dd {
        let p = self.hi * b;
        fast_two_sum(p, self.hi.mul_add(b, -p) + self.lo * b)
    }

    fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul_f64(-q1));
        let q2 = r.hi / o.hi;
        let r = r.add(o.mul_f64(-q2));
        let q3 = r.hi / o.hi;
        fast_two_sum(q1, q2).add(Dd::from(q3))
    }
}

/// Compensated complex summation.
#[derive(Debug, Default, Clone, Copy)]
struct KahanComplex {
    sum: Complex64,
    comp: Complex64,
}

impl KahanComplex {
    fn add(&mut self, x: Complex64) {
        let y = x - self.comp;
        let t = self.sum + y;
        self.comp = (t - self.sum) - y;
        self.sum = t;
    }

    fn value(&self) -> Complex64 {
        self.sum
    }
}

/// `J_μ(x)` by the partition series.
pub fn bessel_eval(mu: Complex64, x: &ConeElement, cone: &ConeStructure, ctl: TruncationControl) -> Result<SeriesValue> {
    BesselSeries::new(mu, cone, ctl)?.eval(x)
}

/// `J_μ(−r)` for `r ∈ Ω̄` and real `μ > μ0`; strictly positive.
pub fn bessel_at_neg(mu: f64, r: &ConeElement, cone: &ConeStructure, ctl: TruncationControl) -> Result<f64> {
    if mu <= cone.mu0() {
        return Err(Error::Parameter(format!("mu = {mu} must exceed mu0 = {}", cone.mu0())));
    }
    if !r.in_closed_cone() {
        return Err(Error::NotPositive { min_eigenvalue: *r.eigenvalues().last().unwrap() });
    }
    let xi: Vec<f64> = r.eigenvalues().iter().map(|&x| x.max(0.0)).collect();
    Ok(BesselSeries::real(mu, cone, ctl)?.eval_negated_spectrum(&xi)?.re)
}

/// The bound `√(2^q q!)`.
pub fn bessel_bound(q: usize) -> f64 {
    let fact: f64 = (1..=q).map(|i| i as f64).product();
    (2f64.powi(q as i32) * fact).sqrt()
}

/// Result of a bound scan.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub max_abs: f64,
    /// Spectrum at which the maximum was attained.
    pub witness: Vec<f64>,
    pub violations: u64,
    pub samples: u64,
}

impl BoundReport {
    /// Error if the maximum exceeds `bound + slack`.
    pub fn check(&self, slack: f64) -> Result<()> {
        if self.max_abs > self.bound + slack {
            return Err(Error::BoundViolation { value: self.max_abs, bound: self.bound, witness: self.witness.clone() });
        }
        Ok(())
    }
}

/// Scans `|J_μ(x)|` over `samples` random points with eigenvalues uniform in
/// `[lo, hi]`. `J_μ` is a spectral function, so sampling the spectrum alone
/// covers every conjugacy class. Counts values above the bound by more than `slack`.
pub fn bound_check(
    mu: f64,
    cone: &ConeStructure,
    samples: usize,
    range: (f64, f64),
    slack: f64,
    ctl: TruncationControl,
    seed: u64,
) -> Result<BoundReport> {
    if mu < cone.mu0() + 0.5 - 1e-12 {
        return Err(Error::Parameter(format!("mu = {mu} below mu0 + 1/2 = {}", cone.mu0() + 0.5)));
    }
    let series = BesselSeries::real(mu, cone, ctl)?;
    let bound = bessel_bound(cone.q);
    let parts = run_chunks(samples, seed, |rng, count| -> Result<(f64, Vec<f64>, u64)> {
        let mut best = (f64::NEG_INFINITY, Vec::new(), 0u64);
        for _ in 0..count {
            let xi: Vec<f64> = (0..cone.q).map(|_| rng.random_range(range.0..=range.1)).collect();
            let v = series.eval_spectrum(&xi)?.value().norm();
            if v > bound + slack {
                best.2 += 1;
            }
            if v > best.0 {
                best.0 = v;
                best.1 = xi;
            }
        }
        Ok(best)
    });
    let mut report = BoundReport { bound, max_abs: f64::NEG_INFINITY, witness: Vec::new(), violations: 0, samples: samples as u64 };
    for part in parts {
        let (m, w, v) = part?;
        report.violations += v;
        if m > report.max_abs {
            report.max_abs = m;
            report.witness = w;
        }
    }
    Ok(report)
}

/// Ratio estimate from the matrix-ball integral.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BallEstimate {
    pub re: f64,
    pub im: f64,
    pub std_error: f64,
    pub accepted: u64,
    pub proposed: u64,
}

impl BallEstimate {
    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn acceptance_rate(&self) -> f64 {
        self.accepted as f64 / self.proposed as f64
    }
}

#[derive(Debug, Default, Clone, Copy)]
struct RatioSums {
    a: Complex64,
    b: Complex64,
    aa: f64,
    bb: f64,
    ab: Complex64,
    accepted: u64,
}

impl RatioSums {
    fn merge(&mut self, o: &RatioSums) {
        self.a += o.a;
        self.b += o.b;
        self.aa += o.aa;
        self.bb += o.bb;
        self.ab += o.ab;
        self.accepted += o.accepted;
    }
}

/// Uniform proposal in the box `[−1, 1]` per real component.
fn box_matrix<R: Rng + ?Sized>(field: Field, q: usize, rng: &mut R) -> CMatrix {
    let mut v = CMatrix::zeros(q, q);
    for z in v.data.iter_mut() {
        let re = rng.random_range(-1.0..1.0);
        let im = if field == Field::Complex { rng.random_range(-1.0..1.0) } else { 0.0 };
        *z = Complex64::new(re, im);
    }
    v
}

/// Estimates `J_μ(x²)` from
/// `∫_{B} e^{−2i⟨v,x⟩} Δ(I − v*v)^{μ−1−d(q−1/2)} dv / ∫_{B} Δ(I − v*v)^{μ−1−d(q−1/2)} dv`
/// over the matrix ball `B = {v : v*v < I}`, sampled by rejection from the box.
/// `n` counts proposals. The standard error is the delta-method error of the ratio.
pub fn laplace_ball_mc(mu: Complex64, x: &ConeElement, cone: &ConeStructure, n: usize, seed: u64) -> Result<BallEstimate> {
    let q = cone.q;
    let d = cone.d() as f64;
    if mu.re <= d * (q as f64 - 0.5) {
        return Err(Error::Parameter(format!("Re mu = {} must exceed d(q - 1/2) = {}", mu.re, d * (q as f64 - 0.5))));
    }
    if x.rank() != q {
        return Err(Error::Dimension(format!("element of rank {} for cone rank {q}", x.rank())));
    }
    let expo = mu - 1.0 - d * (q as f64 - 0.5);
    let xm = x.matrix();
    let parts = run_chunks(n, seed, |rng, count| {
        let mut s = RatioSums::default();
        for _ in 0..count {
            let v = box_matrix(cone.field, q, rng);
            let vv = &v.adjoint() * &v;
            let ev = hermitian_eigenvalues(&vv.hermitian_part());
            if ev[0] >= 1.0 {
                continue;
            }
            let ln_det: f64 = ev.iter().map(|&e| (1.0 - e).ln()).sum();
            let w = (expo * ln_det).exp();
            let phase = Complex64::new(0.0, -2.0 * v.real_inner(xm)).exp();
            let a = w * phase;
            s.a += a;
            s.b += w;
            s.aa += a.norm_sqr();
            s.bb += w.norm_sqr();
            s.ab += a * w.conj();
            s.accepted += 1;
        }
        s
    });
    let mut tot = RatioSums::default();
    parts.iter().for_each(|p| tot.merge(p));
    let rate = tot.accepted as f64 / n.max(1) as f64;
    if tot.accepted == 0 || rate < MIN_ACCEPTANCE {
        return Err(Error::LowAcceptance { rate, threshold: MIN_ACCEPTANCE });
    }
    let m = tot.accepted as f64;
    let a_bar = tot.a / m;
    let b_bar = tot.b / m;
    let r = a_bar / b_bar;
    // E|A − R B|² with E(A − R B) = 0 by construction of R.
    let resid = tot.aa / m + r.norm_sqr() * tot.bb / m - 2.0 * (r.conj() * tot.ab / m).re;
    let se = (resid.max(0.0) / m).sqrt() / b_bar.norm();
    Ok(BallEstimate { re: r.re, im: r.im, std_error: se, accepted: tot.accepted, proposed: n as u64 })
}

/// Estimates `J_{qd/2}(x* x) = ∫_{U_q} e^{−2i⟨u,x⟩} du` over the orthogonal or
/// unitary group with Haar samples.
pub fn group_integral_mc(x: &CMatrix, field: Field, n: usize, seed: u64) -> Result<ComplexEstimate> {
    if x.rows != x.cols {
        return Err(Error::Dimension(format!("{}x{} is not square", x.rows, x.cols)));
    }
    if field == Field::Real && x.data.iter().any(|z| z.im != 0.0) {
        return Err(Error::Parameter("real group integral with complex matrix".into()));
    }
    let q = x.rows;
    let parts = run_chunks(n, seed, |rng, count| {
        let mut s = ComplexStats::default();
        for _ in 0..count {
            let u = haar_matrix(field, q, rng);
            s.push(Complex64::new(0.0, -2.0 * u.real_inner(x)).exp());
        }
        s
    });
    let mut tot = ComplexStats::default();
    parts.iter().for_each(|p| tot.merge(p));
    Ok(tot.into())
}

/// A random matrix over the field with Gaussian entries, for group-integral tests.
pub fn random_matrix<R: Rng + ?Sized>(field: Field, q: usize, scale: f64, rng: &mut R) -> CMatrix {
    gaussian_matrix(field, q, q, rng).scale(scale)
}
