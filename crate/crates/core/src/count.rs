//! Exact linear-extension counting.
//!
//! Two independent counters live here: [`count_brute`] walks permutations
//! directly, and [`count_ideal_dp`] counts maximal chains in the lattice of
//! order ideals. Trace arithmetic is the third route (see [`crate::trace`]).

use std::collections::HashMap;
use std::fmt;
use std::hash::Hash;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::poset::{words_for, Poset};

pub const DEFAULT_BRUTE_CAP: usize = 10;
pub const DEFAULT_IDEAL_CAP: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CountError {
    #[error("brute-force oracle infeasible: poset has {size} elements, cap is {cap}")]
    OracleInfeasible { size: usize, cap: usize },
    #[error("ideal-lattice counter infeasible: more than {cap} order ideals")]
    CounterInfeasible { cap: usize },
}

/// A number of linear extensions. Unbounded; an antichain of 21 elements
/// already has more than 2^64.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExtensionCount(pub BigUint);

impl ExtensionCount {
    pub fn one() -> Self {
        ExtensionCount(BigUint::one())
    }

    pub fn to_u64(&self) -> Option<u64> {
        u64::try_from(&self.0).ok()
    }
}

impl From<u64> for ExtensionCount {
    fn from(v: u64) -> Self {
        ExtensionCount(BigUint::from(v))
    }
}

impl From<BigUint> for ExtensionCount {
    fn from(v: BigUint) -> Self {
        ExtensionCount(v)
    }
}

impl PartialEq<u64> for ExtensionCount {
    fn eq(&self, other: &u64) -> bool {
        self.0 == BigUint::from(*other)
    }
}

impl fmt::Display for ExtensionCount {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// `n choose k` by the multiplicative formula; every partial product is an
/// exact binomial so the division never truncates.
pub fn binomial(n: u64, k: u64) -> BigUint {
    if k > n {
        return BigUint::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigUint::one();
    for t in 1..=k {
        acc *= n - k + t;
        acc /= t;
    }
    acc
}

/// Counts permutations of the elements that respect the order, by
/// extending prefixes one element at a time. An element may be appended
/// only when nothing below it is still unplaced.
pub fn count_brute(p: &Poset) -> Result<ExtensionCount, CountError> {
    count_brute_with_cap(p, DEFAULT_BRUTE_CAP)
}

pub fn count_brute_with_cap(p: &Poset, cap: usize) -> Result<ExtensionCount, CountError> {
    let n = p.size();
    if n > cap {
        return Err(CountError::OracleInfeasible { size: n, cap });
    }
    let mut placed = vec![false; n];
    let total = extend_prefix(p, &mut placed, 0);
    Ok(ExtensionCount(BigUint::from(total)))
}

fn extend_prefix(p: &Poset, placed: &mut [bool], depth: usize) -> u128 {
    let n = placed.len();
    if depth == n {
        return 1;
    }
    let mut total = 0;
    for x in 0..n {
        if placed[x] || p.below(x).any(|y| !placed[y]) {
            continue;
        }
        placed[x] = true;
        total += extend_prefix(p, placed, depth + 1);
        placed[x] = false;
    }
    total
}

/// Counts linear extensions as maximal chains `∅ ⊂ I_1 ⊂ ... ⊂ X` in the
/// lattice of order ideals: `f(∅) = 1` and `f(I) = Σ f(I \ {x})` over the
/// maximal elements `x` of `I`. The lattice is swept level by level, keeping
/// only two levels in memory.
pub fn count_ideal_dp(p: &Poset) -> Result<ExtensionCount, CountError> {
    count_ideal_dp_with_cap(p, DEFAULT_IDEAL_CAP)
}

pub fn count_ideal_dp_with_cap(p: &Poset, cap: usize) -> Result<ExtensionCount, CountError> {
    if p.size() <= 64 {
        sweep::<u64>(p, cap)
    } else {
        sweep::<WideMask>(p, cap)
    }
}

/// Element subsets used as ideal keys.
trait Mask: Clone + Eq + Hash {
    fn empty(n: usize) -> Self;
    fn contains(&self, v: usize) -> bool;
    fn with(&self, v: usize) -> Self;
    fn covers(&self, row: &[u64]) -> bool;
}

impl Mask for u64 {
    fn empty(_: usize) -> Self {
        0
    }
    fn contains(&self, v: usize) -> bool {
        self >> v & 1 == 1
    }
    fn with(&self, v: usize) -> Self {
        self | 1 << v
    }
    fn covers(&self, row: &[u64]) -> bool {
        row.first().is_none_or(|&w| w & !self == 0)
    }
}

#[derive(Clone, PartialEq, Eq, Hash)]
struct WideMask(Box<[u64]>);

impl Mask for WideMask {
    fn empty(n: usize) -> Self {
        WideMask(vec![0; words_for(n)].into_boxed_slice())
    }
    fn contains(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }
    fn with(&self, v: usize) -> Self {
        let mut out = self.clone();
        out.0[v / 64] |= 1 << (v % 64);
        out
    }
    fn covers(&self, row: &[u64]) -> bool {
        row.iter().zip(self.0.iter()).all(|(r, m)| r & !m == 0)
    }
}

fn sweep<M: Mask>(p: &Poset, cap: usize) -> Result<ExtensionCount, CountError> {
    let n = p.size();
    let mut level: HashMap<M, BigUint> = HashMap::from([(M::empty(n), BigUint::one())]);
    let mut seen = 1usize;
    for _ in 0..n {
        let mut next: HashMap<M, BigUint> = HashMap::with_capacity(level.len());
        for (ideal, ways) in &level {
            // x can be added when everything below it is already in the ideal;
            // read backwards, x is then a maximal element of the larger ideal.
            for x in 0..n {
                if !ideal.contains(x) && ideal.covers(p.down_row(x)) {
                    *next.entry(ideal.with(x)).or_insert_with(BigUint::zero) += ways;
                }
            }
        }
        seen += next.len();
        if seen > cap {
            return Err(CountError::CounterInfeasible { cap });
        }
        level = next;
    }
    let total = level.into_values().next().unwrap_or_else(BigUint::zero);
    Ok(ExtensionCount(total))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::from_cover_pairs(4, &[(0, 1), (2, 3), (2, 1)]).unwrap()
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(3, 2), BigUint::from(3u32));
        assert_eq!(binomial(9, 8), BigUint::from(9u32));
        assert_eq!(binomial(0, 0), BigUint::one());
        assert_eq!(binomial(4, 5), BigUint::zero());
        assert_eq!(binomial(10, 5), BigUint::from(252u32));
        // 100 choose 50 exceeds u64
        assert_eq!(
            binomial(100, 50).to_string(),
            "100891344545564193334812497256"
        );
    }

    #[test]
    fn brute_examples() {
        assert_eq!(count_brute(&Poset::chain(5)).unwrap(), 1);
        assert_eq!(count_brute(&Poset::antichain(3)).unwrap(), 6);
        assert_eq!(count_brute(&n_poset()).unwrap(), 5);
        assert_eq!(count_brute(&Poset::empty()).unwrap(), 1);
        assert_eq!(
            count_brute(&Poset::antichain(11)),
            Err(CountError::OracleInfeasible { size: 11, cap: 10 })
        );
        assert_eq!(count_brute_with_cap(&Poset::chain(30), 30).unwrap(), 1);
    }

    #[test]
    fn dp_examples() {
        assert_eq!(count_ideal_dp(&Poset::empty()).unwrap(), 1);
        assert_eq!(count_ideal_dp(&n_poset()).unwrap(), 5);
        let p = Poset::direct_sum(&Poset::chain(8), &Poset::chain(1));
        assert_eq!(count_ideal_dp(&p).unwrap(), 9);
        assert_eq!(count_ideal_dp(&Poset::chain(300)).unwrap(), 1);
    }

    #[test]
    fn dp_wide_masks_beyond_64_elements() {
        let p = Poset::direct_sum(&Poset::chain(99), &Poset::chain(1));
        assert_eq!(count_ideal_dp(&p).unwrap(), 100);
        let q = Poset::ordinal_sum(&Poset::chain(70), &Poset::antichain(3));
        assert_eq!(count_ideal_dp(&q).unwrap(), 6);
    }

    #[test]
    fn dp_exceeds_u64() {
        let anti = Poset::antichain(21);
        let expect: BigUint = (1..=21u32).map(BigUint::from).product();
        assert_eq!(count_ideal_dp(&anti).unwrap().0, expect);
        assert!(count_ideal_dp(&anti).unwrap().to_u64().is_none());
    }

    #[test]
    fn dp_cap() {
        assert_eq!(
            count_ideal_dp_with_cap(&Poset::antichain(10), 100),
            Err(CountError::CounterInfeasible { cap: 100 })
        );
        assert!(count_ideal_dp_with_cap(&Poset::antichain(10), 1024).is_ok());
    }
}
