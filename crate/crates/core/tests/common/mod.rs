//! Independent oracles shared by the integration and acceptance tests.
//! Nothing here goes through the library's enumerator or counters.

#![allow(dead_code)]

use std::collections::BTreeSet;

use linext::{CanonicalKey, Poset};
use rand::seq::SliceRandom;
use rand::Rng;

/// Counts linear extensions by generating every permutation of the
/// elements and testing each one pair by pair.
pub fn count_all_permutations(p: &Poset) -> u64 {
    let n = p.size();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0;
    heap_permutations(n, &mut perm, &mut |order| {
        let compatible = (0..n).all(|i| (i + 1..n).all(|j| !p.less(order[j], order[i])));
        total += compatible as u64;
    });
    total
}

fn heap_permutations(k: usize, a: &mut Vec<usize>, visit: &mut impl FnMut(&[usize])) {
    if k <= 1 {
        visit(a);
        return;
    }
    for i in 0..k - 1 {
        heap_permutations(k - 1, a, visit);
        if k.is_multiple_of(2) {
            a.swap(i, k - 1);
        } else {
            a.swap(0, k - 1);
        }
    }
    heap_permutations(k - 1, a, visit);
}

pub fn all_permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut perm: Vec<usize> = (0..n).collect();
    heap_permutations(n, &mut perm, &mut |p| out.push(p.to_vec()));
    out
}

/// Every labeled poset on `m` elements: each element is related to each
/// earlier one as below, above or incomparable, and the full relation is
/// kept when it is transitive. Returns the labeled count and the distinct
/// canonical keys.
pub fn labeled_posets(m: usize) -> (usize, BTreeSet<CanonicalKey>) {
    let mut rel = vec![vec![false; m]; m];
    let mut labeled = 0;
    let mut keys = BTreeSet::new();
    grow_labeled(0, m, &mut rel, &mut labeled, &mut keys);
    (labeled, keys)
}

fn transitive_on(rel: &[Vec<bool>], k: usize) -> bool {
    (0..k).all(|a| (0..k).all(|b| !rel[a][b] || (0..k).all(|c| !rel[b][c] || rel[a][c])))
}

// writes both rel[j][k] and rel[k][j], so an iterator does not fit
#[allow(clippy::needless_range_loop)]
fn grow_labeled(
    k: usize,
    m: usize,
    rel: &mut Vec<Vec<bool>>,
    labeled: &mut usize,
    keys: &mut BTreeSet<CanonicalKey>,
) {
    if k == m {
        *labeled += 1;
        let p = Poset::from_relation(m, |u, v| rel[u][v]).unwrap();
        keys.insert(p.canonical_key());
        return;
    }
    let choices = 3usize.pow(k as u32);
    for code in 0..choices {
        let mut c = code;
        for j in 0..k {
            (rel[j][k], rel[k][j]) = (c % 3 == 1, c % 3 == 2);
            c /= 3;
        }
        if transitive_on(rel, k + 1) {
            grow_labeled(k + 1, m, rel, labeled, keys);
        }
        for j in 0..k {
            (rel[j][k], rel[k][j]) = (false, false);
        }
    }
}

/// Isomorphism classes built upward from the empty poset: each class of
/// size `m` arises from a class of size `m - 1` by adding a new maximal
/// element above a down-closed subset.
pub fn classes_by_maximal_extension(max_m: usize) -> Vec<BTreeSet<CanonicalKey>> {
    let mut levels = vec![BTreeSet::from([Poset::empty().canonical_key()])];
    for m in 1..=max_m {
        let mut next = BTreeSet::new();
        for key in &levels[m - 1] {
            let p = key.to_poset();
            let k = p.size();
            for set in 0u32..1 << k {
                let closed =
                    (0..k).all(|j| set >> j & 1 == 0 || p.below(j).all(|i| set >> i & 1 == 1));
                if !closed {
                    continue;
                }
                let q = Poset::from_relation(m, |u, v| {
                    if v == k {
                        set >> u & 1 == 1
                    } else {
                        u < k && v < k && p.less(u, v)
                    }
                })
                .unwrap();
                next.insert(q.canonical_key());
            }
        }
        levels.push(next);
    }
    levels
}

/// A random poset on `size` elements: random pairs oriented from lower to
/// higher index, closed transitively, then randomly relabeled.
pub fn random_poset(rng: &mut impl Rng, size: usize) -> Poset {
    let density: f64 = rng.gen();
    let mut pairs = Vec::new();
    for u in 0..size {
        for v in u + 1..size {
            if rng.gen_bool(density) {
                pairs.push((u, v));
            }
        }
    }
    let p = Poset::from_cover_pairs(size, &pairs).unwrap();
    let mut perm: Vec<usize> = (0..size).collect();
    perm.shuffle(rng);
    p.relabel(&perm)
}

pub fn binomial(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, t| acc * (n - k + t) / t)
}
