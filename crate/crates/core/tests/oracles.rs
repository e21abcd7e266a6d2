// Comparisons against oracles written independently of the library code.

use num_traits::{One, Zero};
use rand::SeedableRng;

use sonine::bessel::{BesselSeries, TruncationControl};
use sonine::beta::{moment_value, sample_beta, MomentFunctional, WishartSampler};
use sonine::cone::{gamma_cone, zlambda_at_identity, ConeStructure};
use sonine::jack::{jack_c_eval, jack_p_exact};
use sonine::mc::{run_chunks, Stats};
use sonine::partition::{partitions_up_to, Partition};
use sonine::rational::{factorial, parse_q, q_frac, q_int, rising, to_f64, Q};

/// Two-variable Jack P from the one-row generating function:
/// `P_(m) ∝ Σ_k (1/α)_k (1/α)_{m−k} / (k!(m−k)!) x^k y^{m−k}` and
/// `P_(a,b) = (xy)^b P_(a−b)`.
fn jack_p_two_variables(lam: &Partition, alpha: &Q) -> Vec<(Partition, Q)> {
    let a = lam.part(0);
    let b = lam.part(1);
    let m = a - b;
    let inv = Q::one() / alpha;
    let norm = rising(&inv, m) / factorial(m);
    (0..=m / 2)
        .map(|j| {
            let c = rising(&inv, j) * rising(&inv, m - j) / (factorial(j) * factorial(m - j)) / &norm;
            (Partition::new(&[a - j, b + j]).unwrap(), c)
        })
        .collect()
}

#[test]
fn jack_p_matches_two_variable_formula() {
    for alpha in ["2", "1", "2/3", "1/2", "3"] {
        let alpha = parse_q(alpha).unwrap();
        for lam in partitions_up_to(8, 2) {
            let got = jack_p_exact(&lam, &alpha, 2);
            let want = jack_p_two_variables(&lam, &alpha);
            assert_eq!(got.len(), want.len(), "support of P_{lam}");
            for (kappa, c) in want {
                assert_eq!(got.get(&kappa), Some(&c), "coefficient of m_{kappa} in P_{lam}, alpha = {alpha}");
            }
        }
    }
}

/// `₀F₁(μ; −x)` summed in exact rational arithmetic.
fn hyp0f1_neg_exact(mu: &Q, x: &Q, terms: u32) -> f64 {
    let mut term = Q::one();
    let mut sum = Q::one();
    for m in 1..terms {
        term = -term * x / ((mu + q_int(m as i64 - 1)) * q_int(m as i64));
        sum += &term;
    }
    to_f64(&sum)
}

#[test]
fn rank_one_bessel_matches_exact_series_up_to_z_20() {
    let c1 = ConeStructure::real(1);
    for mu in ["1/2", "1", "23/10", "5"] {
        let mu = parse_q(mu).unwrap();
        let series = BesselSeries::real(to_f64(&mu), &c1, TruncationControl::default()).unwrap();
        for i in (0..=200).step_by(4) {
            // x = z²/4 with z = i/10
            let x = q_int(i * i) / q_int(400);
            let want = hyp0f1_neg_exact(&mu, &x, 110);
            let got = series.eval_spectrum(&[to_f64(&x)]).unwrap().re;
            assert!((got - want).abs() < 1e-10, "mu = {mu}, z = {}: {got} vs {want}", i as f64 / 10.0);
        }
    }
}

#[test]
fn bessel_on_a_rank_one_point_of_a_larger_cone() {
    // Only one-row partitions survive at (x, 0, ..., 0), and C_(m)(x, 0, ...) = x^m.
    for cone in [ConeStructure::real(2), ConeStructure::complex(2), ConeStructure::real(3), ConeStructure::complex(3)] {
        let mu = parse_q("7/2").unwrap() + cone.mu0_exact();
        let series = BesselSeries::real(to_f64(&mu), &cone, TruncationControl::default()).unwrap();
        for x in [q_frac(1, 4), q_int(2), q_int(9)] {
            let mut xi = vec![0.0; cone.q];
            xi[0] = to_f64(&x);
            let got = series.eval_spectrum(&xi).unwrap().re;
            let want = hyp0f1_neg_exact(&mu, &x, 80);
            assert!((got - want).abs() < 1e-12, "{cone}, x = {x}: {got} vs {want}");
        }
    }
}

#[test]
fn cone_gamma_against_classical_products() {
    use statrs::function::gamma::gamma;
    use std::f64::consts::PI;
    let cases = [
        (ConeStructure::real(2), 2.0, (2.0 * PI).sqrt() * gamma(2.0) * gamma(1.5)),
        (ConeStructure::complex(2), 2.5, 2.0 * PI * gamma(2.5) * gamma(1.5)),
        (ConeStructure::real(3), 3.2, (2.0 * PI).powf(1.5) * gamma(3.2) * gamma(2.7) * gamma(2.2)),
    ];
    for (cone, z, want) in cases {
        let got = gamma_cone(num_complex::Complex64::new(z, 0.0), &cone).unwrap().re;
        assert!((got - want).abs() < 1e-12 * want, "{cone}: {got} vs {want}");
    }
    let g = gamma_cone(num_complex::Complex64::new(2.0, 0.0), &ConeStructure::real(2)).unwrap().re;
    assert!((g - 2.221441469079183).abs() < 1e-6);
}

fn empirical_moments(samples: &[sonine::jordan::ConeElement], lambdas: &[Partition], alpha: f64) -> Vec<Stats> {
    let mut st = vec![Stats::default(); lambdas.len()];
    for s in samples {
        for (t, l) in st.iter_mut().zip(lambdas) {
            t.push(jack_c_eval(l, alpha, s.eigenvalues()));
        }
    }
    st
}

#[test]
fn beta_sampler_moments_match_moment_functional() {
    for cone in [ConeStructure::real(1), ConeStructure::real(2), ConeStructure::complex(2)] {
        let (mu, nu) = (q_int(3), q_frac(5, 2));
        let samples = sample_beta(to_f64(&mu), to_f64(&nu), &cone, 100_000, 5).unwrap();
        let lambdas: Vec<Partition> = partitions_up_to(4, cone.q).into_iter().filter(|l| !l.is_empty()).collect();
        let st = empirical_moments(&samples, &lambdas, cone.alpha());
        for (l, s) in lambdas.iter().zip(st) {
            let exact = to_f64(&moment_value(l, &mu, &nu, &cone).unwrap());
            let z = (s.mean - exact) / s.std_error();
            assert!(z.abs() < 3.0, "{cone} {l}: {} vs {exact} (z = {z:.2})", s.mean);
        }
    }
}

#[test]
fn wishart_moments_q1_are_gamma_moments() {
    let cone = ConeStructure::real(1);
    let mu = 2.7;
    let w = WishartSampler::new(mu, &cone).unwrap();
    let parts = run_chunks(200_000, 9, |rng, count| {
        let mut st = vec![Stats::default(); 4];
        for _ in 0..count {
            let x = w.sample(rng).eigenvalues()[0];
            for (m, s) in st.iter_mut().enumerate() {
                s.push(x.powi(m as i32 + 1));
            }
        }
        st
    });
    let st = sonine::mc::merge_all(&parts);
    for (m, s) in st.iter().enumerate() {
        let k = m as f64 + 1.0;
        let want = statrs::function::gamma::gamma(mu + k) / statrs::function::gamma::gamma(mu);
        assert!((s.mean - want).abs() < 3.0 * s.std_error(), "E x^{k}: {} vs {want}", s.mean);
    }
}

#[test]
fn wishart_moments_match_pochhammer() {
    for cone in [ConeStructure::real(2), ConeStructure::complex(2)] {
        let mu = q_int(3);
        let w = WishartSampler::new(to_f64(&mu), &cone).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let samples: Vec<_> = (0..100_000).map(|_| w.sample(&mut rng)).collect();
        let lambdas: Vec<Partition> = partitions_up_to(2, cone.q).into_iter().filter(|l| !l.is_empty()).collect();
        for (l, s) in lambdas.iter().zip(empirical_moments(&samples, &lambdas, cone.alpha())) {
            let want = to_f64(&(sonine::cone::pochhammer_gen_exact(&mu, l, &cone) * zlambda_at_identity(l, &cone).unwrap()));
            assert!((s.mean - want).abs() < 3.0 * s.std_error(), "{cone} {l}: {} vs {want}", s.mean);
        }
    }
}

#[test]
fn trace_moment_by_hand() {
    // L(tr x) = (μ)_(1) Z_(1)(e) / (μ+ν)_(1) = qμ/(μ+ν).
    for cone in [ConeStructure::real(3), ConeStructure::complex(2)] {
        let mf = MomentFunctional::new(q_int(5), q_frac(-1, 3), &cone);
        let v = mf.value(&Partition::row(1)).unwrap();
        assert_eq!(v, q_int(cone.q as i64) * q_int(5) / (q_int(5) + q_frac(-1, 3)));
        assert!(mf.value(&Partition::empty()).unwrap().is_one());
    }
}

#[test]
fn extended_sonine_regression_guard() {
    for (cone, mu, nu) in [
        (ConeStructure::real(2), "9", "1/3"),
        (ConeStructure::complex(2), "11", "-3/4"),
        (ConeStructure::real(3), "10", "7/5"),
    ] {
        let rep = sonine::sonine::sonine_extended_polynomial(
            &parse_q(mu).unwrap(),
            &parse_q(nu).unwrap(),
            &cone,
            &[vec![0.3; cone.q]],
            5,
        )
        .unwrap();
        assert!(rep.exact_zero, "{cone}: {}", rep.exact_discrepancy);
        assert!(Q::zero() == parse_q(&rep.exact_discrepancy).unwrap());
    }
}
