//! Exact λ(n) by exhaustive enumeration.
//!
//! Posets of size `m` are enumerated once per isomorphism class. Every
//! poset has a natural labeling (relations only from lower to higher
//! index), and sorting any linear extension by down-set size still gives
//! one, so it suffices to generate labelings whose down-sets have
//! non-decreasing size. Element `k` is added with a down-set that must be an
//! order ideal of the elements before it; the resulting labeled posets are
//! deduplicated by canonical key.
//!
//! The search space is split by the down-sets of the first few elements and
//! the parts run in parallel. Parts are merged as sets and the final
//! representatives are sorted by canonical key, so the output does not
//! depend on scheduling.

use std::collections::{BTreeMap, HashSet};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::count::{count_ideal_dp, CountError};
use crate::poset::{CanonicalKey, Poset};
use crate::synth::two_sqrt_floor;

/// Default largest size the enumerator accepts.
pub const DEFAULT_SIZE_CAP: usize = 9;

const PREFIX_DEPTH: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("enumeration infeasible: size {size} exceeds cap {cap}")]
    EnumerationInfeasible { size: usize, cap: usize },
    #[error(transparent)]
    Count(#[from] CountError),
    #[error("reference data line {line}: {message}")]
    Reference { line: usize, message: String },
}

/// One representative per isomorphism class of `m`-element posets, sorted
/// by canonical key. Each representative is canonically labeled.
pub fn enumerate_posets(m: usize) -> Result<Vec<Poset>, SearchError> {
    enumerate_posets_capped(m, DEFAULT_SIZE_CAP)
}

pub fn enumerate_posets_capped(m: usize, cap: usize) -> Result<Vec<Poset>, SearchError> {
    Ok(enumerate_classes(m, cap)?
        .into_iter()
        .map(|key| key.to_poset())
        .collect())
}

/// Canonical keys of all `m`-element posets, sorted.
pub fn enumerate_classes(m: usize, cap: usize) -> Result<Vec<CanonicalKey>, SearchError> {
    if m > cap || m > 32 {
        return Err(SearchError::EnumerationInfeasible { size: m, cap });
    }
    let mut prefixes = Vec::new();
    collect_prefixes(m.min(PREFIX_DEPTH), &mut Vec::new(), &mut prefixes);
    let merged = prefixes
        .into_par_iter()
        .map(|mut downs| {
            let mut seen = HashSet::new();
            extend(m, &mut downs, &mut seen);
            seen
        })
        .reduce(HashSet::new, |mut a, b| {
            if a.len() < b.len() {
                return merge(b, a);
            }
            a.extend(b);
            a
        });
    let mut keys: Vec<CanonicalKey> = merged.into_iter().collect();
    keys.sort_unstable();
    Ok(keys)
}

fn merge(mut big: HashSet<CanonicalKey>, small: HashSet<CanonicalKey>) -> HashSet<CanonicalKey> {
    big.extend(small);
    big
}

/// Admissible down-sets for the next element: order ideals of the elements
/// placed so far, no smaller than the previous element's down-set.
fn candidates(downs: &[u32]) -> impl Iterator<Item = u32> + '_ {
    let k = downs.len();
    let floor = downs.last().map_or(0, |d| d.count_ones());
    (0u32..1 << k).filter(move |&set| {
        set.count_ones() >= floor && (0..k).all(|j| set >> j & 1 == 0 || downs[j] & !set == 0)
    })
}

fn collect_prefixes(depth: usize, downs: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
    if downs.len() == depth {
        out.push(downs.clone());
        return;
    }
    let next: Vec<u32> = candidates(downs).collect();
    for set in next {
        downs.push(set);
        collect_prefixes(depth, downs, out);
        downs.pop();
    }
}

fn extend(m: usize, downs: &mut Vec<u32>, seen: &mut HashSet<CanonicalKey>) {
    if downs.len() == m {
        let p = Poset::from_relation(m, |u, v| downs[v] >> u & 1 == 1)
            .expect("down-sets are order ideals");
        seen.insert(p.canonical_key());
        return;
    }
    let next: Vec<u32> = candidates(downs).collect();
    for set in next {
        downs.push(set);
        extend(m, downs, seen);
        downs.pop();
    }
}

/// An exact value of λ(n) with a witness of that size.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchResult {
    pub n: u64,
    pub lambda: usize,
    pub witness: Poset,
    /// Largest size fully enumerated.
    pub exhausted_through: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LambdaOutcome {
    Exact(SearchResult),
    /// No poset of size `<= exhausted_through` has `n` linear extensions.
    ExceedsBound {
        n: u64,
        exhausted_through: usize,
    },
}

impl LambdaOutcome {
    pub fn n(&self) -> u64 {
        match self {
            LambdaOutcome::Exact(r) => r.n,
            LambdaOutcome::ExceedsBound { n, .. } => *n,
        }
    }

    pub fn lambda(&self) -> Option<usize> {
        match self {
            LambdaOutcome::Exact(r) => Some(r.lambda),
            LambdaOutcome::ExceedsBound { .. } => None,
        }
    }
}

fn factorial_at_least(m: usize, n: u64) -> bool {
    let mut f: u64 = 1;
    for k in 2..=m as u64 {
        f = f.saturating_mul(k);
    }
    f >= n
}

/// λ(n), scanning sizes `0..=max_size` in order. A size whose factorial is
/// below `n` cannot contain a witness and is skipped without enumeration.
pub fn lambda_exact(n: u64, max_size: usize) -> Result<LambdaOutcome, SearchError> {
    lambda_exact_capped(n, max_size, DEFAULT_SIZE_CAP)
}

pub fn lambda_exact_capped(
    n: u64,
    max_size: usize,
    cap: usize,
) -> Result<LambdaOutcome, SearchError> {
    if max_size > cap {
        return Err(SearchError::EnumerationInfeasible {
            size: max_size,
            cap,
        });
    }
    for m in 0..=max_size {
        if !factorial_at_least(m, n) {
            continue;
        }
        let reps = enumerate_posets_capped(m, cap)?;
        let counts = count_all(&reps)?;
        if let Some(idx) = counts.iter().position(|&c| c == Some(n)) {
            return Ok(LambdaOutcome::Exact(SearchResult {
                n,
                lambda: m,
                witness: reps[idx].clone(),
                exhausted_through: m,
            }));
        }
    }
    Ok(LambdaOutcome::ExceedsBound {
        n,
        exhausted_through: max_size,
    })
}

fn count_all(reps: &[Poset]) -> Result<Vec<Option<u64>>, SearchError> {
    let counts: Result<Vec<_>, CountError> = reps
        .par_iter()
        .map(|p| count_ideal_dp(p).map(|c| c.to_u64()))
        .collect();
    Ok(counts?)
}

/// λ(n) for every `n <= max_n` in a single pass over the enumeration. Each
/// representative is counted once; the first (least-key) representative of
/// the smallest size achieving `n` is the witness.
pub fn lambda_table(max_n: u64, max_size: usize) -> Result<Vec<LambdaOutcome>, SearchError> {
    lambda_table_capped(max_n, max_size, DEFAULT_SIZE_CAP)
}

pub fn lambda_table_capped(
    max_n: u64,
    max_size: usize,
    cap: usize,
) -> Result<Vec<LambdaOutcome>, SearchError> {
    if max_size > cap {
        return Err(SearchError::EnumerationInfeasible {
            size: max_size,
            cap,
        });
    }
    let mut found: BTreeMap<u64, (usize, Poset)> = BTreeMap::new();
    let mut exhausted = 0;
    for m in 0..=max_size {
        let Some(smallest_missing) = (1..=max_n).find(|n| !found.contains_key(n)) else {
            break;
        };
        exhausted = m;
        if !factorial_at_least(m, smallest_missing) {
            continue;
        }
        let reps = enumerate_posets_capped(m, cap)?;
        let counts = count_all(&reps)?;
        for (rep, count) in reps.into_iter().zip(counts) {
            if let Some(c) = count.filter(|&c| c <= max_n) {
                found.entry(c).or_insert((m, rep));
            }
        }
    }
    Ok((1..=max_n)
        .map(|n| match found.remove(&n) {
            Some((lambda, witness)) => LambdaOutcome::Exact(SearchResult {
                n,
                lambda,
                witness,
                exhausted_through: lambda,
            }),
            None => LambdaOutcome::ExceedsBound {
                n,
                exhausted_through: exhausted,
            },
        })
        .collect())
}

/// `n lambda size_bound witness`, with the witness in the poset text format
/// flattened onto one line (`; ` between lines). An unresolved entry prints
/// `>m` for λ and `-` for the witness.
pub fn format_table_row(outcome: &LambdaOutcome) -> String {
    let n = outcome.n();
    match outcome {
        LambdaOutcome::Exact(r) => {
            let witness = crate::poset::write_poset(&r.witness);
            format!(
                "{n} {} {} {}",
                r.lambda,
                two_sqrt_floor(n),
                witness.trim_end().replace('\n', "; ")
            )
        }
        LambdaOutcome::ExceedsBound {
            exhausted_through, ..
        } => {
            format!("{n} >{exhausted_through} {} -", two_sqrt_floor(n))
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRecord {
    pub n: u64,
    pub lambda: Option<usize>,
    pub size_bound: u64,
    pub exhausted_through: usize,
    pub witness_size: Option<usize>,
    pub witness_covers: Option<Vec<(usize, usize)>>,
}

impl From<&LambdaOutcome> for TableRecord {
    fn from(outcome: &LambdaOutcome) -> Self {
        match outcome {
            LambdaOutcome::Exact(r) => TableRecord {
                n: r.n,
                lambda: Some(r.lambda),
                size_bound: two_sqrt_floor(r.n),
                exhausted_through: r.exhausted_through,
                witness_size: Some(r.witness.size()),
                witness_covers: Some(r.witness.cover_relation().covers),
            },
            &LambdaOutcome::ExceedsBound {
                n,
                exhausted_through,
            } => TableRecord {
                n,
                lambda: None,
                size_bound: two_sqrt_floor(n),
                exhausted_through,
                witness_size: None,
                witness_covers: None,
            },
        }
    }
}

/// Reads a reference sequence in OEIS b-file form: one `index value` pair
/// per line, `#` comments and blank lines ignored.
pub fn parse_reference(text: &str) -> Result<Vec<(u64, u64)>, SearchError> {
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let err = |message: &str| SearchError::Reference {
            line: idx + 1,
            message: message.to_owned(),
        };
        let mut parts = line.split_whitespace();
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(err("expected `index value`"));
        };
        let a = a.parse().map_err(|_| err("invalid index"))?;
        let b = b.parse().map_err(|_| err("invalid value"))?;
        out.push((a, b));
    }
    Ok(out)
}

/// Entries of `reference` that disagree with `table`, as
/// `(n, expected, computed)`. Entries beyond the table are ignored;
/// unresolved table entries count as disagreements.
pub fn compare_reference(
    table: &[LambdaOutcome],
    reference: &[(u64, u64)],
) -> Vec<(u64, u64, Option<usize>)> {
    reference
        .iter()
        .filter_map(|&(n, expected)| {
            let computed = table.iter().find(|o| o.n() == n)?.lambda();
            (computed != Some(expected as usize)).then_some((n, expected, computed))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_class_counts() {
        let counts: Vec<usize> = (0..=5)
            .map(|m| enumerate_posets(m).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 1, 2, 5, 16, 63]);
        assert!(enumerate_posets(0).unwrap()[0].is_empty());
    }

    #[test]
    fn representatives_are_canonical_and_sorted() {
        let reps = enumerate_posets(4).unwrap();
        let keys: Vec<_> = reps.iter().map(Poset::canonical_key).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
        for (p, k) in reps.iter().zip(&keys) {
            assert_eq!(&k.to_poset(), p);
        }
    }

    #[test]
    fn cap_enforced() {
        assert_eq!(
            enumerate_posets(10),
            Err(SearchError::EnumerationInfeasible { size: 10, cap: 9 })
        );
        assert!(lambda_exact(5, 12).is_err());
    }

    #[test]
    fn lambda_examples() {
        let n_poset = Poset::from_cover_pairs(4, &[(0, 1), (2, 3), (2, 1)]).unwrap();
        match lambda_exact(5, 6).unwrap() {
            LambdaOutcome::Exact(r) => {
                assert_eq!(r.lambda, 4);
                assert_eq!(r.witness.canonical_key(), n_poset.canonical_key());
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(lambda_exact(6, 6).unwrap().lambda(), Some(3));
        assert_eq!(lambda_exact(1, 0).unwrap().lambda(), Some(0));
        assert_eq!(
            lambda_exact(7, 4).unwrap(),
            LambdaOutcome::ExceedsBound {
                n: 7,
                exhausted_through: 4
            }
        );
    }

    #[test]
    fn table_rows() {
        let table = lambda_table(12, 5).unwrap();
        let lambdas: Vec<_> = table.iter().map(|o| o.lambda().unwrap()).collect();
        assert_eq!(lambdas, vec![0, 2, 3, 4, 4, 3, 5, 4, 5, 5, 5, 4]);
        assert_eq!(format_table_row(&table[0]), "1 0 2 poset 0");
        assert_eq!(format_table_row(&table[2]), "3 3 3 poset 3; 1 2");
        let short = lambda_table(7, 4).unwrap();
        assert_eq!(format_table_row(&short[6]), "7 >4 5 -");
        assert_eq!(lambda_table(1, 0).unwrap()[0].lambda(), Some(0));
    }

    #[test]
    fn reference_comparison() {
        let table = lambda_table(6, 4).unwrap();
        let reference = parse_reference("# A160371\n1 0\n2 2\n3 3\n4 4\n5 4\n6 3\n7 5\n").unwrap();
        assert!(compare_reference(&table, &reference).is_empty());
        let wrong = parse_reference("5 5\n").unwrap();
        assert_eq!(compare_reference(&table, &wrong), vec![(5, 5, Some(4))]);
        assert!(parse_reference("1 2 3\n").is_err());
    }
}
