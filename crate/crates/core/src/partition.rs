//! Integer partitions: the index set of spherical polynomials, Pochhammer
//! symbols and the Bessel series.
//!
//! The canonical order used everywhere (map iteration, moment-matrix rows,
//! report output) is: increasing weight, and within one weight reverse
//! lexicographic, so `(4) < (3,1) < (2,2)`.

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A weakly decreasing tuple of positive integers (trailing zeros dropped).
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<u32>", into = "Vec<u32>")]
pub struct Partition {
    parts: Vec<u32>,
}

impl Partition {
    /// The empty partition `()`.
    pub fn empty() -> Self {
        Partition { parts: Vec::new() }
    }

    /// Builds a partition from parts, dropping trailing zeros.
    ///
    /// Fails if the parts are not weakly decreasing.
    pub fn new(parts: &[u32]) -> Result<Self> {
        if parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Parse(format!("parts {parts:?} are not weakly decreasing")));
        }
        let mut parts = parts.to_vec();
        while parts.last() == Some(&0) {
            parts.pop();
        }
        Ok(Partition { parts })
    }

    /// Sorts arbitrary nonnegative parts into a partition.
    pub fn from_unsorted(parts: &[u32]) -> Self {
        let mut parts: Vec<u32> = parts.iter().copied().filter(|&p| p > 0).collect();
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Partition { parts }
    }

    /// The one-row partition `(k)`.
    pub fn row(k: u32) -> Self {
        Self::from_unsorted(&[k])
    }

    /// The column `(1, ..., 1)` with `k` parts.
    pub fn column(k: usize) -> Self {
        Partition { parts: vec![1; k] }
    }

    pub fn parts(&self) -> &[u32] {
        &self.parts
    }

    /// Number of nonzero parts.
    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    /// `|λ|`.
    pub fn weight(&self) -> usize {
        self.parts.iter().map(|&p| p as usize).sum()
    }

    /// Part `i` (0-based), zero beyond the length.
    pub fn part(&self, i: usize) -> u32 {
        self.parts.get(i).copied().unwrap_or(0)
    }

    /// Parts padded with zeros to length `q`.
    pub fn padded(&self, q: usize) -> Vec<u32> {
        let mut v = self.parts.clone();
        v.resize(q.max(v.len()), 0);
        v
    }

    pub fn conjugate(&self) -> Partition {
        let first = self.part(0);
        let parts = (1..=first)
            .map(|j| self.parts.iter().filter(|&&p| p >= j).count() as u32)
            .collect();
        Partition { parts }
    }

    /// Cells `(i, j)` of the Young diagram, 0-based, row by row.
    pub fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.parts
            .iter()
            .enumerate()
            .flat_map(|(i, &p)| (0..p as usize).map(move |j| (i, j)))
    }

    /// Arm and leg lengths of every cell, in the order of [`Partition::cells`].
    pub fn arms_and_legs(&self) -> Vec<(usize, usize)> {
        let conj = self.conjugate();
        self.cells()
            .map(|(i, j)| {
                let arm = self.parts[i] as usize - j - 1;
                let leg = conj.parts[j] as usize - i - 1;
                (arm, leg)
            })
            .collect()
    }

    /// Dominance order: `self ≼ other` (same weight, partial sums bounded).
    pub fn dominated_by(&self, other: &Partition) -> bool {
        if self.weight() != other.weight() {
            return false;
        }
        let n = self.len().max(other.len());
        let (mut a, mut b) = (0u64, 0u64);
        for i in 0..n {
            a += self.part(i) as u64;
            b += other.part(i) as u64;
            if a > b {
                return false;
            }
        }
        true
    }

    /// Adds one box to row `row`, if the result is still a partition.
    pub fn add_box(&self, row: usize) -> Option<Partition> {
        if row > self.len() {
            return None;
        }
        if row > 0 && self.part(row - 1) == self.part(row) {
            return None;
        }
        let mut parts = self.parts.clone();
        if row == parts.len() {
            parts.push(1);
        } else {
            parts[row] += 1;
        }
        Some(Partition { parts })
    }

    /// Subtracts `c` from every part (assumes all `q` parts are at least `c`).
    pub fn strip_columns(&self, q: usize, c: u32) -> Partition {
        let parts: Vec<u32> = self.padded(q).iter().map(|&p| p - c).collect();
        Partition::from_unsorted(&parts)
    }

    /// Whether `self / mu` is a horizontal strip (`mu` interlaces `self`).
    pub fn is_horizontal_strip_over(&self, mu: &Partition) -> bool {
        if mu.len() > self.len() || mu.len() + 1 < self.len() {
            return false;
        }
        (0..self.len()).all(|i| {
            let m = mu.part(i);
            m <= self.part(i) && m >= self.part(i + 1)
        })
    }
}

impl Ord for Partition {
    fn cmp(&self, other: &Self) -> Ordering {
        self.weight()
            .cmp(&other.weight())
            .then_with(|| other.parts.cmp(&self.parts))
    }
}

impl PartialOrd for Partition {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.parts.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Debug for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl TryFrom<Vec<u32>> for Partition {
    type Error = Error;
    fn try_from(v: Vec<u32>) -> Result<Self> {
        Partition::new(&v)
    }
}

impl From<Partition> for Vec<u32> {
    fn from(p: Partition) -> Self {
        p.parts
    }
}

impl std::str::FromStr for Partition {
    type Err = Error;

    /// Accepts `()`, `(3,1)`, `3,1` or `3 1`.
    fn from_str(s: &str) -> Result<Self> {
        let inner = s.trim().trim_start_matches('(').trim_end_matches(')');
        let parts = inner
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .map(|t| t.parse::<u32>().map_err(|e| Error::Parse(format!("{t}: {e}"))))
            .collect::<Result<Vec<_>>>()?;
        Partition::new(&parts)
    }
}

/// All partitions of `k` with at most `q` parts, in reverse lexicographic order.
pub fn enumerate_partitions(k: usize, q: usize) -> Vec<Partition> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(q);
    fill(k as u32, k as u32, q, &mut current, &mut out);
    out
}

fn fill(remaining: u32, max_part: u32, slots: usize, current: &mut Vec<u32>, out: &mut Vec<Partition>) {
    if remaining == 0 {
        out.push(Partition { parts: current.clone() });
        return;
    }
    if slots == 0 {
        return;
    }
    for p in (1..=max_part.min(remaining)).rev() {
        current.push(p);
        fill(remaining - p, p, slots - 1, current, out);
        current.pop();
    }
}

/// All partitions of weight `0..=max_weight` with at most `q` parts, in canonical order.
pub fn partitions_up_to(max_weight: usize, q: usize) -> Vec<Partition> {
    (0..=max_weight).flat_map(|k| enumerate_partitions(k, q)).collect()
}

/// All distinct permutations of `parts` padded to length `q`.
pub fn distinct_permutations(parts: &[u32], q: usize) -> Vec<Vec<u32>> {
    let mut v = parts.to_vec();
    v.resize(q, 0);
    v.sort_unstable();
    let mut out = vec![v.clone()];
    while next_permutation(&mut v) {
        out.push(v.clone());
    }
    out
}

fn next_permutation(v: &mut [u32]) -> bool {
    if v.len() < 2 {
        return false;
    }
    let mut i = v.len() - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = v.len() - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(parts: &[u32]) -> Partition {
        Partition::new(parts).unwrap()
    }

    #[test]
    fn enumerate_small_cases() {
        assert_eq!(enumerate_partitions(4, 2), vec![p(&[4]), p(&[3, 1]), p(&[2, 2])]);
        assert_eq!(enumerate_partitions(0, 3), vec![Partition::empty()]);
    }

    #[test]
    fn enumerate_matches_brute_force_triples() {
        for k in 0..=12u32 {
            let mut brute = 0;
            for a in 0..=k {
                for b in 0..=a {
                    for c in 0..=b {
                        if a + b + c == k {
                            brute += 1;
                        }
                    }
                }
            }
            assert_eq!(enumerate_partitions(k as usize, 3).len(), brute, "k = {k}");
        }
        assert_eq!(enumerate_partitions(6, 3).len(), 7);
    }

    #[test]
    fn canonical_order_is_weight_then_reverse_lex() {
        let all = partitions_up_to(4, 3);
        let mut sorted = all.clone();
        sorted.sort();
        assert_eq!(all, sorted);
        assert!(p(&[2]) < p(&[1, 1]));
        assert!(p(&[1, 1]) < p(&[3]));
    }

    #[test]
    fn trailing_zeros_dropped_and_order_checked() {
        assert_eq!(p(&[2, 1, 0, 0]), p(&[2, 1]));
        assert!(Partition::new(&[1, 2]).is_err());
        assert_eq!("(3,1)".parse::<Partition>().unwrap(), p(&[3, 1]));
        assert_eq!("()".parse::<Partition>().unwrap(), Partition::empty());
    }

    #[test]
    fn conjugate_and_hooks() {
        let lam = p(&[3, 1]);
        assert_eq!(lam.conjugate(), p(&[2, 1, 1]));
        // hooks of (3,1): 4 2 1 / 1
        let hooks: Vec<usize> = lam.arms_and_legs().iter().map(|(a, l)| a + l + 1).collect();
        assert_eq!(hooks, vec![4, 2, 1, 1]);
    }

    #[test]
    fn dominance() {
        assert!(p(&[2, 2]).dominated_by(&p(&[3, 1])));
        assert!(p(&[1, 1, 1, 1]).dominated_by(&p(&[2, 2])));
        assert!(!p(&[3, 1]).dominated_by(&p(&[2, 2])));
        assert!(!p(&[3, 3]).dominated_by(&p(&[4, 1, 1])));
        assert!(!p(&[4, 1, 1]).dominated_by(&p(&[3, 3])));
    }

    #[test]
    fn horizontal_strips() {
        assert!(p(&[3, 1]).is_horizontal_strip_over(&p(&[2])));
        assert!(p(&[3, 1]).is_horizontal_strip_over(&p(&[1, 1])));
        assert!(p(&[3, 1]).is_horizontal_strip_over(&p(&[1])));
        assert!(!p(&[2, 2]).is_horizontal_strip_over(&p(&[1])));
        assert!(!p(&[2, 2]).is_horizontal_strip_over(&p(&[2, 1, 1])));
    }

    #[test]
    fn permutations_of_multiset() {
        assert_eq!(distinct_permutations(&[2, 1], 3).len(), 6);
        assert_eq!(distinct_permutations(&[1, 1], 3).len(), 3);
        assert_eq!(distinct_permutations(&[], 2), vec![vec![0, 0]]);
    }
}
