//! Acceptance suite: one line per criterion.
//!
//! Runs without the libtest harness so that the verdict lines always reach
//! the output. Criterion 8 is known to fail as stated (the bound does not
//! hold for spectra with negative eigenvalues); it is reported as FAIL and
//! the process still succeeds as long as it fails in exactly that way.
//! A Monte Carlo miss in criterion 7 is printed as FAIL as well and is
//! followed by a larger bias check.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use sonine::bessel::{bessel_at_neg, bound_check, group_integral_mc, laplace_ball_mc, BesselSeries, TruncationControl};
use sonine::beta::{classify_point, dist_ext_rank1_exact, product_relation_check};
use sonine::cone::{beta_cone, gamma_cone, gamma_poles, ConeStructure, Window};
use sonine::jack::jack_c_exact;
use sonine::jordan::{haar_matrix, random_with_spectrum, ConeElement};
use sonine::linalg::CMatrix;
use sonine::partition::{enumerate_partitions, Partition};
use sonine::rational::{factorial, parse_q, q_frac, q_int, rising, Q};
use sonine::sonine::{composition_check, sonine_cone_mc, sonine_extended_polynomial, sonine_rank1_quadrature};

const SEED: u64 = 20_240_601;

struct Outcome {
    passed: bool,
    detail: String,
}

fn outcome(passed: bool, detail: impl Into<String>) -> Outcome {
    Outcome { passed, detail: detail.into() }
}

fn q(s: &str) -> Q {
    parse_q(s).unwrap()
}

fn ctl() -> TruncationControl {
    TruncationControl::default()
}

fn all_cones() -> Vec<ConeStructure> {
    (1..=3).flat_map(|q| [ConeStructure::real(q), ConeStructure::complex(q)]).collect()
}

fn rank1_sonine() -> Outcome {
    let start = Instant::now();
    let zs: Vec<f64> = (0..=100).map(|i| i as f64 / 10.0).collect();
    let mut worst: f64 = 0.0;
    for alpha in [-0.5, 0.0, 1.0, 2.5] {
        for beta in [0.5, 1.0, 3.0] {
            match sonine_rank1_quadrature(alpha, beta, &zs) {
                Ok(r) => worst = worst.max(r.max_residual),
                Err(e) => return outcome(false, format!("alpha={alpha}, beta={beta}: {e}")),
            }
        }
    }
    let t = start.elapsed();
    outcome(worst < 1e-8 && t < Duration::from_secs(10), format!("max residual {worst:.2e}, {t:.2?}"))
}

fn cone_sonine_mc() -> Outcome {
    let start = Instant::now();
    let mut lines = Vec::new();
    let mut ok = true;
    for cone in [ConeStructure::real(2), ConeStructure::complex(2)] {
        for spectrum in [[0.5, 0.2], [2.0, 0.5], [5.0, 1.0]] {
            let r = ConeElement::diag(cone.field, &spectrum);
            match sonine_cone_mc(3.0, 3.0, &r, &cone, 1_000_000, SEED, ctl()) {
                Ok(rep) => {
                    ok &= rep.passes(3.0, 1e-2);
                    lines.push(format!("d={} r={spectrum:?}: {:.1e}/{:.1e}", cone.d(), rep.residual, rep.std_error));
                }
                Err(e) => return outcome(false, e.to_string()),
            }
        }
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(120);
    outcome(ok, format!("residual/SE {}; {t:.1?}", lines.join(", ")))
}

fn extended_sonine() -> Outcome {
    let cases = [
        (ConeStructure::real(2), "12", "-1/4"),
        (ConeStructure::complex(2), "14", "-1/2"),
        (ConeStructure::real(1), "3", "-1/2"),
    ];
    let mut details = Vec::new();
    let mut ok = true;
    for (cone, mu, nu) in cases {
        let spectra: Vec<Vec<f64>> = [[0.5, 0.2], [2.0, 0.5]].iter().map(|s| s[..cone.q].to_vec()).collect();
        match sonine_extended_polynomial(&q(mu), &q(nu), &cone, &spectra, 8) {
            Ok(rep) => {
                ok &= rep.exact_zero;
                details.push(format!("(q={},d={},{mu},{nu}) discrepancy {}", cone.q, cone.d(), rep.exact_discrepancy));
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(ok, details.join("; "))
}

fn rank1_distribution() -> Outcome {
    let (mu, nu) = (q_int(3), q("-1/2"));
    for m in 0..=8usize {
        let mut p = vec![Q::zero(); m + 1];
        p[m] = Q::one();
        let got = match dist_ext_rank1_exact(&p, &mu, &nu, 1) {
            Ok(v) => v,
            Err(e) => return outcome(false, e.to_string()),
        };
        let want = rising(&mu, m as u32) / rising(&q("5/2"), m as u32);
        if got != want {
            return outcome(false, format!("m={m}: {got} vs {want}"));
        }
    }
    outcome(true, "exact for m <= 8")
}

fn wallach_detector() -> Outcome {
    let start = Instant::now();
    // (cone, mu, nu, witness expected)
    let rows = [
        (ConeStructure::real(2), "12", "0", false),
        (ConeStructure::real(2), "12", "1/2", false),
        (ConeStructure::real(2), "12", "1", false),
        (ConeStructure::real(2), "12", "3", false),
        (ConeStructure::real(2), "12", "1/4", true),
        (ConeStructure::real(2), "12", "-1/4", true),
        (ConeStructure::complex(2), "14", "0", false),
        (ConeStructure::complex(2), "14", "1", false),
        (ConeStructure::complex(2), "14", "3", false),
        (ConeStructure::complex(2), "14", "1/2", true),
        // 3/2 > mu0 = 1 is a Wallach point for q = 2, d = 2.
        (ConeStructure::complex(2), "14", "3/2", false),
        (ConeStructure::complex(3), "14", "3/2", true),
    ];
    let mut ok = true;
    let mut bad = Vec::new();
    for (cone, mu, nu, expect) in rows {
        match classify_point(&q(mu), &q(nu), &cone, 8) {
            Ok(p) => {
                if p.hard_failure() || p.verdict.is_witness() != expect {
                    ok = false;
                    bad.push(format!("q={},d={},nu={nu}", cone.q, cone.d()));
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    let t = start.elapsed();
    ok &= t < Duration::from_secs(300);
    let detail = if bad.is_empty() { format!("12 points as expected, {t:.1?}") } else { format!("mismatch at {}", bad.join(", ")) };
    outcome(ok, detail)
}

fn product_relation() -> Outcome {
    for qq in [1, 2] {
        for cone in [ConeStructure::real(qq), ConeStructure::complex(qq)] {
            for nu in [q_int(2), q_frac(cone.d() as i64, 2)] {
                match product_relation_check(&q_int(3), &nu, &cone, 4) {
                    Ok(d) if d.is_zero() => {}
                    Ok(d) => return outcome(false, format!("q={qq}, d={}, nu={nu}: {d}", cone.d())),
                    Err(e) => return outcome(false, e.to_string()),
                }
            }
        }
    }
    outcome(true, "discrepancy 0 on 8 cases")
}

fn composition() -> Outcome {
    composition_run(100_000, SEED)
}

/// At q = 1 the field does not change the law, so only d = 1 is run. At
/// q = 2 the sampler needs ν1 = 1 > μ0, which holds for d = 1 only.
fn composition_run(n: usize, seed: u64) -> Outcome {
    let mut worst: f64 = 0.0;
    let mut ok = true;
    let mut count = 0;
    for cone in [ConeStructure::real(1), ConeStructure::real(2)] {
        match composition_check(&q_int(4), &q_int(1), &q_int(1), &cone, n, seed, 3) {
            Ok(rows) => {
                for r in rows {
                    ok &= r.within(3.0);
                    worst = worst.max(r.z_score);
                    count += 1;
                }
            }
            Err(e) => return outcome(false, e.to_string()),
        }
    }
    outcome(ok, format!("{count} moments, largest |z| = {worst:.2}"))
}

/// Returns (literal outcome, supplementary closed-cone run passed).
fn bessel_bound() -> (Outcome, bool) {
    let cones = [ConeStructure::real(1), ConeStructure::real(2), ConeStructure::complex(2)];
    let mut literal_ok = true;
    let mut closed_ok = true;
    let mut parts = Vec::new();
    for cone in cones {
        let mu = cone.mu0() + 0.5;
        let lit = bound_check(mu, &cone, 10_000, (-20.0, 20.0), 1e-6, ctl(), SEED);
        let closed = bound_check(mu, &cone, 10_000, (0.0, 20.0), 1e-6, ctl(), SEED);
        match (lit, closed) {
            (Ok(l), Ok(c)) => {
                literal_ok &= l.violations == 0;
                closed_ok &= c.violations == 0 && l.witness.iter().any(|&x| x < 0.0);
                parts.push(format!(
                    "(q={},d={}) {} violations, max {:.3e} at {:?}; on [0,20] max {:.3}",
                    cone.q,
                    cone.d(),
                    l.violations,
                    l.max_abs,
                    l.witness.iter().map(|x| (x * 100.0).round() / 100.0).collect::<Vec<_>>(),
                    c.max_abs
                ));
            }
            (Err(e), _) | (_, Err(e)) => return (outcome(false, e.to_string()), false),
        }
    }
    let note = if literal_ok { "" } else { "bound fails for negative eigenvalues; " };
    (outcome(literal_ok, format!("{note}{}", parts.join("; "))), closed_ok)
}

fn power_sum() -> Outcome {
    for qq in 1..=3 {
        for alpha in [q_int(2), q_int(1), q_frac(2, 3)] {
            for k in 0..=8usize {
                let mut sum = std::collections::BTreeMap::<Partition, Q>::new();
                for lam in enumerate_partitions(k, qq) {
                    for (kappa, c) in jack_c_exact(&lam, &alpha, qq).iter() {
                        *sum.entry(kappa.clone()).or_insert_with(Q::zero) += c;
                    }
                }
                // (x1 + ... + xq)^k = Σ_κ k!/Π κ_i! m_κ
                for kappa in enumerate_partitions(k, qq) {
                    let multinomial = kappa.parts().iter().fold(factorial(k as u32), |a, &p| a / factorial(p));
                    if sum.get(&kappa).cloned().unwrap_or_else(Q::zero) != multinomial {
                        return outcome(false, format!("q={qq}, alpha={alpha}, kappa={kappa}"));
                    }
                }
                if sum.len() != enumerate_partitions(k, qq).len() {
                    return outcome(false, format!("stray monomials at q={qq}, k={k}"));
                }
            }
        }
    }
    outcome(true, "exact for k <= 8, q <= 3, alpha in {2, 1, 2/3}")
}

fn gamma_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst: f64 = 0.0;
    let mut pairs = 0;
    while pairs < 100 {
        let cone = all_cones()[rng.random_range(0..6)];
        let z = Complex64::new(rng.random_range(-3.0..6.0), rng.random_range(-2.0..2.0));
        let w = Complex64::new(rng.random_range(-3.0..6.0), rng.random_range(-2.0..2.0));
        let (Ok(b), Ok(gzw), Ok(gz), Ok(gw)) =
            (beta_cone(z, w, &cone), gamma_cone(z + w, &cone), gamma_cone(z, &cone), gamma_cone(w, &cone))
        else {
            continue;
        };
        let rhs = gz * gw;
        worst = worst.max((b * gzw - rhs).norm() / rhs.norm());
        pairs += 1;
    }
    // pole set on [-3, mu0] against {j d/2 - m}
    for cone in all_cones() {
        let window = Window::closed(q_int(-3), cone.mu0_exact());
        let mut expected: Vec<Q> = Vec::new();
        for j in 0..cone.q {
            let mut p = q_frac((j * cone.d()) as i64, 2);
            while p >= q_int(-3) {
                if !expected.contains(&p) {
                    expected.push(p.clone());
                }
                p -= Q::one();
            }
        }
        expected.sort();
        let got = gamma_poles(&cone, &window);
        if got != expected {
            return outcome(false, format!("poles of {cone}: {got:?} vs {expected:?}"));
        }
        for p in &got {
            let z = Complex64::new(sonine::rational::to_f64(p), 0.0);
            if gamma_cone(z, &cone).is_ok() || gamma_cone(z + 0.25, &cone).is_err() {
                return outcome(false, format!("pole behaviour of {cone} at {p}"));
            }
        }
    }
    outcome(worst < 1e-10, format!("max relative error {worst:.1e} on 100 pairs; pole sets match"))
}

fn integral_representations() -> Outcome {
    let n = 1_000_000;
    let mut ok = true;
    let mut parts = Vec::new();
    let ball = [
        (ConeStructure::real(1), 1.5, vec![0.8]),
        (ConeStructure::real(2), 3.0, vec![0.7, 0.2]),
        (ConeStructure::complex(2), 4.0, vec![0.7, 0.2]),
    ];
    for (cone, mu, x) in ball {
        let xe = ConeElement::diag(cone.field, &x);
        let sq: Vec<f64> = x.iter().map(|v| v * v).collect();
        let exact = BesselSeries::real(mu, &cone, ctl()).unwrap().eval_spectrum(&sq).unwrap().value();
        match laplace_ball_mc(Complex64::new(mu, 0.0), &xe, &cone, n, SEED) {
            Ok(e) => {
                let diff = (e.value() - exact).norm();
                ok &= diff <= 3.0 * e.std_error;
                parts.push(format!("ball q={},d={} {:.1}SE", cone.q, cone.d(), diff / e.std_error));
            }
            Err(err) => return outcome(false, err.to_string()),
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for cone in [ConeStructure::real(1), ConeStructure::real(2), ConeStructure::complex(2)] {
        let spectrum: Vec<f64> = if cone.q == 1 { vec![0.9] } else { vec![0.9, 0.4] };
        let u = haar_matrix(cone.field, cone.q, &mut rng);
        let x: CMatrix = &(&u * &CMatrix::diag(&spectrum)) * &haar_matrix(cone.field, cone.q, &mut rng);
        let sq: Vec<f64> = spectrum.iter().map(|v| v * v).collect();
        let mu = (cone.q * cone.d()) as f64 / 2.0;
        let exact = BesselSeries::real(mu, &cone, ctl()).unwrap().eval_spectrum(&sq).unwrap().value();
        match group_integral_mc(&x, cone.field, n, SEED) {
            Ok(e) => {
                let diff = (e.value() - exact).norm();
                ok &= diff <= 3.0 * e.std_error;
                if cone.q == 1 {
                    let cos = (2.0 * spectrum[0]).cos();
                    ok &= (e.re - cos).abs() <= 3.0 * e.std_error && (exact.re - cos).abs() < 1e-13;
                }
                parts.push(format!("group q={},d={} {:.1}SE", cone.q, cone.d(), diff / e.std_error));
            }
            Err(err) => return outcome(false, err.to_string()),
        }
    }
    outcome(ok, parts.join(", "))
}

fn negative_argument_positivity() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut min = f64::INFINITY;
    for cone in all_cones() {
        let mu = cone.mu0() + 1.0;
        for i in 0..1000 {
            let mut spectrum: Vec<f64> = (0..cone.q).map(|_| rng.random_range(0.0..=10.0)).collect();
            if i % 10 == 0 {
                spectrum[0] = 0.0;
            }
            if i == 0 {
                spectrum.iter_mut().for_each(|s| *s = 0.0);
            }
            let r = random_with_spectrum(&cone, &spectrum, &mut rng);
            match bessel_at_neg(mu, &r, &cone, ctl()) {
                Ok(v) => min = min.min(v),
                Err(e) => return outcome(false, e.to_string()),
            }
        }
    }
    outcome(min > 0.0 && min.is_finite(), format!("6000 points, smallest value {min:.3}"))
}

type Criterion = (&'static str, Box<dyn Fn() -> Outcome>);

fn main() -> ExitCode {
    let start = Instant::now();
    let criteria: Vec<Criterion> = vec![
        ("rank-1 Sonine quadrature", Box::new(rank1_sonine)),
        ("cone Sonine Monte Carlo", Box::new(cone_sonine_mc)),
        ("extended Sonine on polynomials", Box::new(extended_sonine)),
        ("rank-1 distributional extension", Box::new(rank1_distribution)),
        ("Wallach dichotomy detector", Box::new(wallach_detector)),
        ("product relation", Box::new(product_relation)),
        ("composition of beta measures", Box::new(composition)),
    ];
    let mut unexpected = 0;
    let mut n = 0;
    let mut report = |name: &str, o: &Outcome| {
        n += 1;
        let verdict = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict}  {name}: {}", o.detail);
    };
    for (i, (name, f)) in criteria.iter().enumerate() {
        let o = f();
        report(name, &o);
        if o.passed {
            continue;
        }
        if i == 6 {
            // Eleven correlated moments at 3 SE miss now and then by chance.
            // A miss counts as unexpected only if a larger independent run
            // also misses, which would point to a bias.
            let check = composition_run(3_000_000, SEED + 1);
            println!("             bias check, 3e6 samples on a fresh stream: {}", check.detail);
            if check.passed {
                continue;
            }
        }
        unexpected += 1;
    }
    let (bound, closed_ok) = bessel_bound();
    report("Bessel bound", &bound);
    if !closed_ok {
        unexpected += 1;
        println!("             supplementary closed-cone bound check FAILED");
    } else if !bound.passed {
        println!("             (known: the bound holds on the closed cone, not on all of V; see README)");
    }
    let rest: Vec<Criterion> = vec![
        ("power-sum identity", Box::new(power_sum)),
        ("gamma identities", Box::new(gamma_identities)),
        ("integral representations", Box::new(integral_representations)),
        ("positivity at negative argument", Box::new(negative_argument_positivity)),
    ];
    for (name, f) in &rest {
        let o = f();
        if !o.passed {
            unexpected += 1;
        }
        report(name, &o);
    }
    println!("acceptance finished in {:.1?}; unexpected failures: {unexpected}", start.elapsed());
    if unexpected == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
