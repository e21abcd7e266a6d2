//! Jack polynomials in the C-normalization, `Σ_{|λ|=k} C_λ(ξ) = (Σ ξ_i)^k`.
//!
//! Two independent routes are provided:
//!
//! * exact monomial expansions, obtained from the Laplace–Beltrami type
//!   eigen-operator `D = (α/2) Σ x_i² ∂_i² + Σ_{i≠j} x_i²/(x_i − x_j) ∂_i`,
//!   which is triangular on monomial symmetric functions in dominance order;
//! * floating-point evaluation through the branching rule
//!   `P_λ(x_1..x_n) = Σ_{μ ≺ λ} ψ_{λ/μ} x_n^{|λ/μ|} P_μ(x_1..x_{n−1})`,
//!   used for high degrees and for the Bessel series.

use std::collections::{BTreeMap, HashMap};
use std::sync::{Arc, LazyLock, RwLock};

use num_traits::{One, Zero};

use crate::partition::{distinct_permutations, enumerate_partitions, Partition};
use crate::rational::{q_int, Q};

type Expansion = Arc<BTreeMap<Partition, Q>>;
type CacheKey = (Partition, Q, usize);

static P_CACHE: LazyLock<RwLock<HashMap<CacheKey, Expansion>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));
static C_CACHE: LazyLock<RwLock<HashMap<CacheKey, Expansion>>> =
    LazyLock::new(|| RwLock::new(HashMap::new()));

fn cached(
    cache: &RwLock<HashMap<CacheKey, Expansion>>,
    key: CacheKey,
    build: impl FnOnce() -> BTreeMap<Partition, Q>,
) -> Expansion {
    if let Some(hit) = cache.read().unwrap().get(&key) {
        return hit.clone();
    }
    let value = Arc::new(build());
    cache.write().unwrap().entry(key).or_insert(value).clone()
}

/// Eigenvalue of the eigen-operator on the leading monomial `m_μ` in `q` variables.
fn eigenvalue(mu: &Partition, alpha: &Q, q: usize) -> Q {
    let half_alpha = alpha / q_int(2);
    let mut e = Q::zero();
    for (u, &p) in mu.padded(q).iter().enumerate() {
        let p = p as i64;
        e += &half_alpha * q_int(p * (p - 1)) + q_int((q - 1 - u) as i64 * p);
    }
    e
}

/// Off-diagonal action of the eigen-operator: coefficients of `m_ν` (ν ≺ μ)
/// in `D m_μ`, computed by brute force over the monomials of `m_μ`.
fn lowering_terms(mu: &Partition, q: usize) -> BTreeMap<Partition, i64> {
    let mut out = BTreeMap::new();
    for a in distinct_permutations(mu.parts(), q) {
        for u in 0..q {
            for v in u + 1..q {
                if a[u] <= a[v] {
                    continue;
                }
                let gap = a[u] - a[v];
                for t in 1..gap {
                    let mut b = a.clone();
                    b[u] -= t;
                    b[v] += t;
                    if b.windows(2).all(|w| w[0] >= w[1]) {
                        *out.entry(Partition::from_unsorted(&b)).or_insert(0) += gap as i64;
                    }
                }
            }
        }
    }
    out
}

/// Monomial coefficients of the monic Jack polynomial `P_λ` in `q` variables.
pub fn jack_p_exact(lambda: &Partition, alpha: &Q, q: usize) -> Expansion {
    cached(&P_CACHE, (lambda.clone(), alpha.clone(), q), || {
        let mut coeffs: BTreeMap<Partition, Q> = BTreeMap::new();
        if lambda.len() > q {
            return coeffs;
        }
        let candidates: Vec<Partition> = enumerate_partitions(lambda.weight(), q)
            .into_iter()
            .filter(|mu| mu.dominated_by(lambda))
            .collect();
        let top = eigenvalue(lambda, alpha, q);
        let mut lowering: Vec<(Partition, BTreeMap<Partition, i64>)> = Vec::new();
        for nu in &candidates {
            let c = if nu == lambda {
                Q::one()
            } else {
                let mut acc = Q::zero();
                for (mu, terms) in &lowering {
                    if let Some(&d) = terms.get(nu) {
                        acc += &coeffs[mu] * q_int(d);
                    }
                }
                acc / (&top - eigenvalue(nu, alpha, q))
            };
            if !c.is_zero() {
                coeffs.insert(nu.clone(), c);
                lowering.push((nu.clone(), lowering_terms(nu, q)));
            }
        }
        coeffs
    })
}

/// `C_λ / P_λ = α^k k! / Π_s (α a(s) + l(s) + α)`.
pub fn c_over_p_exact(lambda: &Partition, alpha: &Q) -> Q {
    let mut r = Q::one();
    for (t, (arm, leg)) in lambda.arms_and_legs().into_iter().enumerate() {
        let hook = alpha * q_int(arm as i64) + q_int(leg as i64) + alpha;
        r *= alpha * q_int(t as i64 + 1) / hook;
    }
    r
}

/// Same ratio in floating point, accumulated cell by cell to avoid overflow.
pub fn c_over_p(lambda: &Partition, alpha: f64) -> f64 {
    lambda
        .arms_and_legs()
        .into_iter()
        .enumerate()
        .map(|(t, (arm, leg))| alpha * (t as f64 + 1.0) / (alpha * arm as f64 + leg as f64 + alpha))
        .product()
}

/// Monomial coefficients of `C^α_λ` in `q` variables (exact, memoized).
pub fn jack_c_exact(lambda: &Partition, alpha: &Q, q: usize) -> Expansion {
    cached(&C_CACHE, (lambda.clone(), alpha.clone(), q), || {
        let scale = c_over_p_exact(lambda, alpha);
        jack_p_exact(lambda, alpha, q)
            .iter()
            .map(|(k, v)| (k.clone(), v * &scale))
            .collect()
    })
}

/// `m_κ(ξ)`: sum of the distinct monomials with exponent multiset κ.
pub fn monomial_symmetric(kappa: &Partition, xi: &[f64]) -> f64 {
    if kappa.len() > xi.len() {
        return 0.0;
    }
    distinct_permutations(kappa.parts(), xi.len())
        .iter()
        .map(|a| a.iter().zip(xi).map(|(&e, &x)| x.powi(e as i32)).product::<f64>())
        .sum()
}

/// Exact `m_κ(ξ)` for rational arguments.
pub fn monomial_symmetric_exact(kappa: &Partition, xi: &[Q]) -> Q {
    if kappa.len() > xi.len() {
        return Q::zero();
    }
    distinct_permutations(kappa.parts(), xi.len())
        .iter()
        .map(|a| {
            a.iter()
                .zip(xi)
                .fold(Q::one(), |acc, (&e, x)| acc * num_traits::pow(x.clone(), e as usize))
        })
        .fold(Q::zero(), |acc, t| acc + t)
}

/// `m_κ(1, ..., 1)` = number of distinct permutations of κ padded to `q`.
pub fn monomial_count(kappa: &Partition, q: usize) -> u64 {
    if kappa.len() > q {
        return 0;
    }
    distinct_permutations(kappa.parts(), q).len() as u64
}

fn upper_hook_factor(lambda: &Partition, cells: &[(usize, usize)], alpha: f64) -> f64 {
    // product over the given cells of b_λ(s) = (α a + l + 1)/(α a + l + α)
    let conj = lambda.conjugate();
    cells
        .iter()
        .map(|&(i, j)| {
            let arm = (lambda.part(i) as usize - j - 1) as f64;
            let leg = (conj.part(j) as usize - i - 1) as f64;
            (alpha * arm + leg + 1.0) / (alpha * arm + leg + alpha)
        })
        .product()
}

/// Branching coefficient `ψ_{λ/μ}` for a horizontal strip `λ/μ`.
pub fn psi(lambda: &Partition, mu: &Partition, alpha: f64) -> f64 {
    let rows: Vec<usize> = (0..lambda.len()).filter(|&i| lambda.part(i) > mu.part(i)).collect();
    let cols: Vec<usize> = (0..lambda.len())
        .flat_map(|i| mu.part(i) as usize..lambda.part(i) as usize)
        .collect();
    let cells: Vec<(usize, usize)> = rows
        .iter()
        .flat_map(|&i| (0..mu.part(i) as usize).map(move |j| (i, j)))
        .filter(|(_, j)| !cols.contains(j))
        .collect();
    upper_hook_factor(mu, &cells, alpha) / upper_hook_factor(lambda, &cells, alpha)
}

/// Partitions μ with `λ/μ` a horizontal strip and at most `n` parts.
fn strip_predecessors(lambda: &Partition, n: usize) -> Vec<Partition> {
    let l = lambda.padded(n + 1);
    let mut out = Vec::new();
    let mut cur = vec![0u32; n];
    fn rec(i: usize, l: &[u32], cur: &mut Vec<u32>, out: &mut Vec<Partition>) {
        if i == cur.len() {
            out.push(Partition::from_unsorted(cur));
            return;
        }
        for m in l[i + 1]..=l[i] {
            cur[i] = m;
            rec(i + 1, l, cur, out);
        }
    }
    if lambda.len() <= n + 1 {
        rec(0, &l, &mut cur, &mut out);
    }
    out
}

/// `P_λ(ξ)` by the branching rule (floating point).
pub fn jack_p_eval(lambda: &Partition, alpha: f64, xi: &[f64]) -> f64 {
    let mut memo = HashMap::new();
    p_eval_rec(lambda, alpha, xi, &mut memo)
}

fn p_eval_rec(
    lambda: &Partition,
    alpha: f64,
    xi: &[f64],
    memo: &mut HashMap<(Partition, usize), f64>,
) -> f64 {
    let n = xi.len();
    if lambda.len() > n {
        return 0.0;
    }
    if lambda.is_empty() {
        return 1.0;
    }
    if n == 1 {
        return xi[0].powi(lambda.weight() as i32);
    }
    if let Some(&v) = memo.get(&(lambda.clone(), n)) {
        return v;
    }
    let last = xi[n - 1];
    let mut acc = 0.0;
    for mu in strip_predecessors(lambda, n - 1) {
        let e = (lambda.weight() - mu.weight()) as i32;
        let xe = if e == 0 { 1.0 } else { last.powi(e) };
        if xe == 0.0 {
            continue;
        }
        acc += psi(lambda, &mu, alpha) * xe * p_eval_rec(&mu, alpha, &xi[..n - 1], memo);
    }
    memo.insert((lambda.clone(), n), acc);
    acc
}

/// `C^α_λ(ξ)` by the branching rule.
pub fn jack_c_eval(lambda: &Partition, alpha: f64, xi: &[f64]) -> f64 {
    c_over_p(lambda, alpha) * jack_p_eval(lambda, alpha, xi)
}

/// Precomputed branching data for evaluating every `P_λ(ξ)` with `|λ| ≤ K`
/// and `ℓ(λ) ≤ q` at many points.
///
/// Partitions are handled as `λ = λ° + c·(1^n)` with `P_λ = e_n^c P_{λ°}`
/// (`e_n` the product of the variables), so the branching rule is only
/// applied to partitions with fewer than `n` parts.
#[derive(Debug, Clone)]
pub struct JackTable {
    alpha: f64,
    q: usize,
    max_degree: usize,
    levels: Vec<Level>,
}

#[derive(Debug, Clone)]
struct Level {
    /// Partitions with at most `n` parts, grouped by degree (canonical order).
    full: Vec<Partition>,
    /// `(index into reduced, number of full columns stripped)` for each full entry.
    full_src: Vec<(usize, u32)>,
    /// `degree_start[k]..degree_start[k+1]` indexes the degree-`k` slice of `full`.
    degree_start: Vec<usize>,
    /// Branching terms `(index into previous level's full, ψ, exponent)`.
    branches: Vec<Vec<(usize, f64, u32)>>,
    reduced_degree_start: Vec<usize>,
}

impl JackTable {
    pub fn new(alpha: f64, q: usize, max_degree: usize) -> Self {
        assert!(q >= 1, "rank must be positive");
        let mut levels: Vec<Level> = Vec::with_capacity(q);
        for n in 1..=q {
            let mut full = Vec::new();
            let mut degree_start = Vec::with_capacity(max_degree + 2);
            let mut reduced = Vec::new();
            let mut reduced_degree_start = Vec::with_capacity(max_degree + 2);
            for k in 0..=max_degree {
                degree_start.push(full.len());
                reduced_degree_start.push(reduced.len());
                for lam in enumerate_partitions(k, n) {
                    if lam.len() < n {
                        reduced.push(lam.clone());
                    }
                    full.push(lam);
                }
            }
            degree_start.push(full.len());
            reduced_degree_start.push(reduced.len());
            let reduced_index: HashMap<&Partition, usize> =
                reduced.iter().enumerate().map(|(i, p)| (p, i)).collect();
            let full_src = full
                .iter()
                .map(|lam| {
                    let c = if lam.len() == n { lam.part(n - 1) } else { 0 };
                    let base = lam.strip_columns(n, c);
                    (reduced_index[&base], c)
                })
                .collect();
            let branches = if n == 1 {
                Vec::new()
            } else {
                let prev = &levels[n - 2];
                let prev_index: HashMap<&Partition, usize> =
                    prev.full.iter().enumerate().map(|(i, p)| (p, i)).collect();
                reduced
                    .iter()
                    .map(|lam| {
                        strip_predecessors(lam, n - 1)
                            .into_iter()
                            .map(|mu| {
                                let e = (lam.weight() - mu.weight()) as u32;
                                (prev_index[&mu], psi(lam, &mu, alpha), e)
                            })
                            .collect()
                    })
                    .collect()
            };
            levels.push(Level {
                full,
                full_src,
                degree_start,
                branches,
                reduced_degree_start,
            });
        }
        JackTable { alpha, q, max_degree, levels }
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn rank(&self) -> usize {
        self.q
    }

    pub fn max_degree(&self) -> usize {
        self.max_degree
    }

    /// Partitions of degree `k` with at most `q` parts, in canonical order.
    pub fn partitions_of_degree(&self, k: usize) -> &[Partition] {
        let top = &self.levels[self.q - 1];
        &top.full[top.degree_start[k]..top.degree_start[k + 1]]
    }

    /// All partitions (with at most `q` parts, weight ≤ K) in canonical order.
    pub fn partitions(&self) -> &[Partition] {
        &self.levels[self.q - 1].full
    }

    /// Starts an incremental evaluation at the point `xi` (length `q`).
    pub fn evaluator<'a>(&'a self, xi: &[f64]) -> JackEvaluator<'a> {
        assert_eq!(xi.len(), self.q, "point dimension must equal the rank");
        let mut prefix_products = Vec::with_capacity(self.q);
        let mut acc = 1.0;
        for &x in xi {
            acc *= x;
            prefix_products.push(acc);
        }
        JackEvaluator {
            table: self,
            xi: xi.to_vec(),
            prefix_products,
            full: vec![Vec::new(); self.q],
            reduced: vec![Vec::new(); self.q],
            next_degree: 0,
        }
    }
}

/// Degree-by-degree evaluation of `P_λ(ξ)` for all partitions of a [`JackTable`].
#[derive(Debug)]
pub struct JackEvaluator<'a> {
    table: &'a JackTable,
    xi: Vec<f64>,
    prefix_products: Vec<f64>,
    full: Vec<Vec<f64>>,
    reduced: Vec<Vec<f64>>,
    next_degree: usize,
}

impl JackEvaluator<'_> {
    /// Computes and returns the values `P_λ(ξ)` for all `|λ| = k`, in the order
    /// of [`JackTable::partitions_of_degree`]. Degrees must be requested in order.
    pub fn next_block(&mut self) -> Option<&[f64]> {
        let k = self.next_degree;
        if k > self.table.max_degree {
            return None;
        }
        for n in 1..=self.table.q {
            let level = &self.table.levels[n - 1];
            // reduced entries of degree k
            for r in level.reduced_degree_start[k]..level.reduced_degree_start[k + 1] {
                let v = if n == 1 {
                    // only the empty partition has fewer than one part
                    1.0
                } else {
                    let x = self.xi[n - 1];
                    let prev = &self.full[n - 2];
                    level.branches[r]
                        .iter()
                        .map(|&(idx, psi, e)| psi * powi(x, e) * prev[idx])
                        .sum()
                };
                debug_assert_eq!(self.reduced[n - 1].len(), r);
                self.reduced[n - 1].push(v);
            }
            let en = self.prefix_products[n - 1];
            for f in level.degree_start[k]..level.degree_start[k + 1] {
                let (src, c) = level.full_src[f];
                let v = if n == 1 {
                    powi(self.xi[0], k as u32)
                } else {
                    powi(en, c) * self.reduced[n - 1][src]
                };
                self.full[n - 1].push(v);
            }
        }
        self.next_degree += 1;
        let top = &self.table.levels[self.table.q - 1];
        Some(&self.full[self.table.q - 1][top.degree_start[k]..top.degree_start[k + 1]])
    }
}

#[inline]
fn powi(x: f64, e: u32) -> f64 {
    if e == 0 {
        1.0
    } else {
        x.powi(e as i32)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::partitions_up_to;
    use crate::rational::{q_frac, to_f64};

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn two_variable_row_matches_known_coefficient() {
        for alpha in [q_int(1), q_int(2), q_frac(2, 3)] {
            let e = jack_p_exact(&p(&[2]), &alpha, 2);
            assert_eq!(e[&p(&[2])], q_int(1));
            assert_eq!(e[&p(&[1, 1])], q_int(2) / (&alpha + q_int(1)));
        }
    }

    #[test]
    fn zonal_degree_two() {
        // C^2_(2) = m_2 + (2/3) m_11, C^2_(1,1) = (4/3) m_11
        let c2 = jack_c_exact(&p(&[2]), &q_int(2), 2);
        assert_eq!(c2[&p(&[2])], q_int(1));
        assert_eq!(c2[&p(&[1, 1])], q_frac(2, 3));
        let c11 = jack_c_exact(&p(&[1, 1]), &q_int(2), 2);
        assert_eq!(c11.len(), 1);
        assert_eq!(c11[&p(&[1, 1])], q_frac(4, 3));
    }

    #[test]
    fn lowering_terms_degree_two() {
        let t = lowering_terms(&p(&[2]), 2);
        assert_eq!(t.get(&p(&[1, 1])), Some(&2));
    }

    #[test]
    fn psi_single_row() {
        // ψ_{(2)/(1)} = 2/(α+1)
        assert!((psi(&p(&[2]), &p(&[1]), 2.0) - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn branching_matches_exact_expansion() {
        let xi = [0.7, -0.3, 1.9];
        for (alpha_q, alpha) in [(q_int(2), 2.0), (q_int(1), 1.0), (q_frac(2, 3), 2.0 / 3.0)] {
            for q in 1..=3 {
                for lam in partitions_up_to(7, q) {
                    let exact: f64 = jack_p_exact(&lam, &alpha_q, q)
                        .iter()
                        .map(|(k, v)| to_f64(v) * monomial_symmetric(k, &xi[..q]))
                        .sum();
                    let branched = jack_p_eval(&lam, alpha, &xi[..q]);
                    assert!(
                        (exact - branched).abs() <= 1e-11 * exact.abs().max(1.0),
                        "λ={lam} q={q} α={alpha}: {exact} vs {branched}"
                    );
                }
            }
        }
    }

    #[test]
    fn table_matches_direct_branching() {
        let xi = [1.3, 0.4, -0.8];
        for q in 1..=3 {
            let table = JackTable::new(2.0, q, 9);
            let mut ev = table.evaluator(&xi[..q]);
            let mut k = 0;
            while let Some(block) = ev.next_block() {
                let block = block.to_vec();
                for (lam, v) in table.partitions_of_degree(k).iter().zip(block) {
                    let direct = jack_p_eval(lam, 2.0, &xi[..q]);
                    assert!((v - direct).abs() <= 1e-12 * direct.abs().max(1.0), "{lam}: {v} vs {direct}");
                }
                k += 1;
            }
            assert_eq!(k, 10);
        }
    }
}
