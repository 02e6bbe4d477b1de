//! Finite strict partial orders.
//!
//! A [`Poset`] stores the full transitive closure of its order as two bit
//! matrices (one row of successors and one row of predecessors per element),
//! so comparability queries are a single bit test. The Hasse diagram is
//! derived on demand by [`Poset::cover_relation`].

mod canon;
mod text;

use std::fmt;

use thiserror::Error;

pub use canon::{canonical_form, CanonicalKey};
pub use text::{parse_poset, write_poset};

/// Errors raised while building or parsing a poset.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosetError {
    #[error("element index {index} out of range for a poset of size {size}")]
    IndexOutOfRange { index: usize, size: usize },
    #[error("not a partial order: the relation contains a cycle")]
    NotPartialOrder,
    #[error("invalid gadget parameters (i={i}, j={j}, m={m}): need 1 <= i < j <= m-2")]
    InvalidGadget { i: usize, j: usize, m: usize },
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
}

pub(crate) const WORD: usize = 64;

#[inline]
pub(crate) fn words_for(n: usize) -> usize {
    n.div_ceil(WORD)
}

#[inline]
fn bit(row: &[u64], v: usize) -> bool {
    row[v / WORD] >> (v % WORD) & 1 == 1
}

#[inline]
fn set_bit(row: &mut [u64], v: usize) {
    row[v / WORD] |= 1 << (v % WORD);
}

fn set_range(row: &mut [u64], lo: usize, hi: usize) {
    for v in lo..hi {
        set_bit(row, v);
    }
}

/// Iterates the set bits of a row in increasing order.
pub(crate) fn ones(row: &[u64]) -> impl Iterator<Item = usize> + '_ {
    row.iter().enumerate().flat_map(|(w, &word)| {
        let mut rest = word;
        std::iter::from_fn(move || {
            if rest == 0 {
                return None;
            }
            let b = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            Some(w * WORD + b)
        })
    })
}

/// A finite strict partial order on the elements `0..size`.
///
/// Posets are immutable once built; every constructor returns a
/// transitively closed, irreflexive, antisymmetric relation.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poset {
    size: usize,
    stride: usize,
    up: Vec<u64>,
    down: Vec<u64>,
}

/// The cover pairs (Hasse diagram edges) of a poset: `(u, v)` means `v`
/// covers `u`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverList {
    pub size: usize,
    pub covers: Vec<(usize, usize)>,
}

impl Poset {
    /// The antichain on `size` elements (no relations at all).
    pub fn antichain(size: usize) -> Self {
        let stride = words_for(size);
        Poset {
            size,
            stride,
            up: vec![0; size * stride],
            down: vec![0; size * stride],
        }
    }

    /// The empty poset.
    pub fn empty() -> Self {
        Self::antichain(0)
    }

    /// The chain `0 < 1 < ... < length-1`.
    pub fn chain(length: usize) -> Self {
        let mut p = Self::antichain(length);
        for u in 0..length {
            set_range(p.up_mut(u), u + 1, length);
            set_range(p.down_mut(u), 0, u);
        }
        p
    }

    /// Disjoint union with no relations between the two parts. Elements of
    /// `q` are shifted by `p.size()`.
    pub fn direct_sum(p: &Poset, q: &Poset) -> Self {
        let mut out = Self::antichain(p.size + q.size);
        out.embed(p, 0);
        out.embed(q, p.size);
        out
    }

    /// Disjoint union with every element of `p` below every element of `q`.
    /// Elements of `q` are shifted by `p.size()`.
    pub fn ordinal_sum(p: &Poset, q: &Poset) -> Self {
        let n = p.size + q.size;
        let mut out = Self::antichain(n);
        out.embed(p, 0);
        out.embed(q, p.size);
        for u in 0..p.size {
            set_range(out.up_mut(u), p.size, n);
        }
        for v in p.size..n {
            set_range(out.down_mut(v), 0, p.size);
        }
        out
    }

    /// The non-series-parallel gadget on `m` elements: a chain
    /// `c_1 < ... < c_{m-2}` (indices `0..m-2`), an element `a = m-2` lying
    /// above `c_i` only, and an element `b = m-1` lying below `c_j` only.
    pub fn gadget_q(i: usize, j: usize, m: usize) -> Result<Self, PosetError> {
        if !(1 <= i && i < j && j + 2 <= m) {
            return Err(PosetError::InvalidGadget { i, j, m });
        }
        let len = m - 2;
        let mut covers: Vec<(usize, usize)> = (1..len).map(|c| (c - 1, c)).collect();
        covers.push((i - 1, m - 2));
        covers.push((m - 1, j - 1));
        Self::from_cover_pairs(m, &covers)
    }

    /// Builds the transitive closure of `pairs` (each `(u, v)` read as
    /// `u < v`). Pairs need not be a reduction; duplicates are allowed.
    pub fn from_cover_pairs(size: usize, pairs: &[(usize, usize)]) -> Result<Self, PosetError> {
        let mut succ = vec![Vec::new(); size];
        let mut pred = vec![Vec::new(); size];
        for &(u, v) in pairs {
            for index in [u, v] {
                if index >= size {
                    return Err(PosetError::IndexOutOfRange { index, size });
                }
            }
            succ[u].push(v);
            pred[v].push(u);
        }
        let order = topological_order(size, &succ, &pred).ok_or(PosetError::NotPartialOrder)?;

        let mut p = Self::antichain(size);
        let stride = p.stride;
        let mut scratch = vec![0u64; stride];
        for &u in order.iter().rev() {
            scratch.fill(0);
            for &v in &succ[u] {
                set_bit(&mut scratch, v);
                for (s, w) in scratch.iter_mut().zip(p.up_row(v)) {
                    *s |= w;
                }
            }
            p.up[u * stride..(u + 1) * stride].copy_from_slice(&scratch);
        }
        for &v in &order {
            scratch.fill(0);
            for &u in &pred[v] {
                set_bit(&mut scratch, u);
                for (s, w) in scratch.iter_mut().zip(p.down_row(u)) {
                    *s |= w;
                }
            }
            p.down[v * stride..(v + 1) * stride].copy_from_slice(&scratch);
        }
        Ok(p)
    }

    /// Builds a poset from a full relation matrix given as an oracle
    /// `less(u, v)`. The relation must already be a strict partial order;
    /// this is checked.
    pub fn from_relation(
        size: usize,
        less: impl Fn(usize, usize) -> bool,
    ) -> Result<Self, PosetError> {
        let mut p = Self::antichain(size);
        for u in 0..size {
            for v in 0..size {
                if less(u, v) {
                    set_bit(p.up_mut(u), v);
                    set_bit(p.down_mut(v), u);
                }
            }
        }
        p.check_invariants()?;
        Ok(p)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    /// Whether `u < v` in the order.
    #[inline]
    pub fn less(&self, u: usize, v: usize) -> bool {
        bit(self.up_row(u), v)
    }

    pub fn comparable(&self, u: usize, v: usize) -> bool {
        self.less(u, v) || self.less(v, u)
    }

    /// Elements strictly above `u`, as a bit row.
    #[inline]
    pub fn up_row(&self, u: usize) -> &[u64] {
        &self.up[u * self.stride..(u + 1) * self.stride]
    }

    /// Elements strictly below `v`, as a bit row.
    #[inline]
    pub fn down_row(&self, v: usize) -> &[u64] {
        &self.down[v * self.stride..(v + 1) * self.stride]
    }

    pub fn above(&self, u: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.up_row(u))
    }

    pub fn below(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        ones(self.down_row(v))
    }

    pub fn up_degree(&self, u: usize) -> usize {
        self.up_row(u).iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn down_degree(&self, v: usize) -> usize {
        self.down_row(v)
            .iter()
            .map(|w| w.count_ones() as usize)
            .sum()
    }

    /// All ordered pairs `(u, v)` with `u < v`, in lexicographic order.
    pub fn relation_pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |u| self.above(u).map(move |v| (u, v)))
    }

    pub fn relation_count(&self) -> usize {
        self.up.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// The isomorphic copy in which element `u` is renamed `perm[u]`.
    pub fn relabel(&self, perm: &[usize]) -> Poset {
        assert_eq!(perm.len(), self.size, "permutation length mismatch");
        let mut out = Self::antichain(self.size);
        for (u, v) in self.relation_pairs() {
            let (pu, pv) = (perm[u], perm[v]);
            set_bit(out.up_mut(pu), pv);
            set_bit(out.down_mut(pv), pu);
        }
        out
    }

    /// Elements sorted so that every element precedes everything above it.
    pub fn topological_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = (0..self.size).collect();
        // u < v implies down(u) is a proper subset of down(v)
        order.sort_by_key(|&v| (self.down_degree(v), v));
        order
    }

    /// The transitive reduction, sorted lexicographically.
    pub fn cover_relation(&self) -> CoverList {
        let order = self.topological_order();
        let mut covers = Vec::new();
        let mut dominated = vec![0u64; self.stride];
        for u in 0..self.size {
            dominated.fill(0);
            let row = self.up_row(u);
            for &v in &order {
                if bit(row, v) && !bit(&dominated, v) {
                    covers.push((u, v));
                    for (d, w) in dominated.iter_mut().zip(self.up_row(v)) {
                        *d |= w;
                    }
                }
            }
        }
        covers.sort_unstable();
        CoverList {
            size: self.size,
            covers,
        }
    }

    /// Checks irreflexivity, antisymmetry, transitivity and that the two
    /// stored matrices are transposes of each other.
    pub fn check_invariants(&self) -> Result<(), PosetError> {
        for u in 0..self.size {
            if self.less(u, u) {
                return Err(PosetError::NotPartialOrder);
            }
            for v in self.above(u) {
                if self.less(v, u) || !bit(self.down_row(v), u) {
                    return Err(PosetError::NotPartialOrder);
                }
                for w in self.above(v) {
                    if !self.less(u, w) {
                        return Err(PosetError::NotPartialOrder);
                    }
                }
            }
        }
        if self.relation_count()
            != self
                .down
                .iter()
                .map(|w| w.count_ones() as usize)
                .sum::<usize>()
        {
            return Err(PosetError::NotPartialOrder);
        }
        Ok(())
    }

    fn up_mut(&mut self, u: usize) -> &mut [u64] {
        &mut self.up[u * self.stride..(u + 1) * self.stride]
    }

    fn down_mut(&mut self, v: usize) -> &mut [u64] {
        &mut self.down[v * self.stride..(v + 1) * self.stride]
    }

    fn embed(&mut self, part: &Poset, offset: usize) {
        for (u, v) in part.relation_pairs() {
            set_bit(self.up_mut(u + offset), v + offset);
            set_bit(self.down_mut(v + offset), u + offset);
        }
    }
}

impl CoverList {
    pub fn to_poset(&self) -> Result<Poset, PosetError> {
        Poset::from_cover_pairs(self.size, &self.covers)
    }
}

impl fmt::Debug for Poset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Poset({}; {:?})",
            self.size,
            self.cover_relation().covers
        )
    }
}

/// Kahn's algorithm; `None` when the pairs contain a cycle.
fn topological_order(size: usize, succ: &[Vec<usize>], pred: &[Vec<usize>]) -> Option<Vec<usize>> {
    let mut indegree: Vec<usize> = pred.iter().map(Vec::len).collect();
    let mut ready: Vec<usize> = (0..size).filter(|&v| indegree[v] == 0).collect();
    let mut order = Vec::with_capacity(size);
    while let Some(u) = ready.pop() {
        order.push(u);
        for &v in &succ[u] {
            indegree[v] -= 1;
            if indegree[v] == 0 {
                ready.push(v);
            }
        }
    }
    (order.len() == size).then_some(order)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::from_cover_pairs(4, &[(0, 1), (2, 3), (2, 1)]).unwrap()
    }

    #[test]
    fn chain_shapes() {
        assert_eq!(Poset::chain(0).size(), 0);
        let one = Poset::chain(1);
        assert_eq!(one.size(), 1);
        assert_eq!(one.relation_count(), 0);
        let three = Poset::chain(3);
        let pairs: Vec<_> = three.relation_pairs().collect();
        assert_eq!(pairs, vec![(0, 1), (0, 2), (1, 2)]);
        three.check_invariants().unwrap();
    }

    #[test]
    fn sums() {
        let anti = Poset::direct_sum(&Poset::chain(1), &Poset::chain(1));
        assert_eq!(anti, Poset::antichain(2));

        let p = n_poset();
        assert_eq!(Poset::direct_sum(&p, &Poset::chain(0)), p);
        assert_eq!(Poset::ordinal_sum(&p, &Poset::chain(0)), p);
        assert_eq!(
            Poset::ordinal_sum(&Poset::chain(2), &Poset::chain(3)),
            Poset::chain(5)
        );

        let three = Poset::direct_sum(&Poset::chain(2), &Poset::chain(1));
        assert_eq!(three.size(), 3);
        assert_eq!(three.relation_pairs().collect::<Vec<_>>(), vec![(0, 1)]);

        let four = Poset::ordinal_sum(&Poset::antichain(2), &Poset::antichain(2));
        four.check_invariants().unwrap();
        assert_eq!(four.relation_count(), 4);
    }

    #[test]
    fn gadget_structure() {
        let q = Poset::gadget_q(1, 2, 4).unwrap();
        q.check_invariants().unwrap();
        let covers = q.cover_relation().covers;
        assert_eq!(covers, vec![(0, 1), (0, 2), (3, 1)]);

        let q = Poset::gadget_q(1, 3, 5).unwrap();
        assert_eq!(q.size(), 5);
        assert!(!q.comparable(3, 4));

        assert_eq!(
            Poset::gadget_q(2, 3, 4),
            Err(PosetError::InvalidGadget { i: 2, j: 3, m: 4 })
        );
        assert!(Poset::gadget_q(0, 1, 4).is_err());
        assert!(Poset::gadget_q(2, 2, 6).is_err());
    }

    #[test]
    fn gadget_cover_count() {
        for m in 4..=9 {
            for j in 2..=m - 2 {
                for i in 1..j {
                    let q = Poset::gadget_q(i, j, m).unwrap();
                    q.check_invariants().unwrap();
                    assert_eq!(q.size(), m);
                    assert_eq!(
                        q.cover_relation().covers.len(),
                        3 + (m - 4),
                        "Q({i},{j},{m})"
                    );
                }
            }
        }
    }

    #[test]
    fn from_pairs() {
        let p = Poset::from_cover_pairs(3, &[(0, 1), (1, 2)]).unwrap();
        assert!(p.less(0, 2));
        assert_eq!(n_poset().relation_count(), 3);
        assert_eq!(
            Poset::from_cover_pairs(2, &[(0, 1), (1, 0)]),
            Err(PosetError::NotPartialOrder)
        );
        assert_eq!(
            Poset::from_cover_pairs(2, &[(1, 1)]),
            Err(PosetError::NotPartialOrder)
        );
        assert_eq!(
            Poset::from_cover_pairs(2, &[(0, 2)]),
            Err(PosetError::IndexOutOfRange { index: 2, size: 2 })
        );
    }

    #[test]
    fn covers() {
        assert_eq!(
            Poset::chain(3).cover_relation().covers,
            vec![(0, 1), (1, 2)]
        );
        assert!(Poset::antichain(2).cover_relation().covers.is_empty());
        let big = Poset::chain(200);
        assert_eq!(big.cover_relation().covers.len(), 199);
        assert_eq!(big.cover_relation().to_poset().unwrap(), big);
    }

    #[test]
    fn relabel_preserves_structure() {
        let p = n_poset();
        let q = p.relabel(&[3, 2, 1, 0]);
        q.check_invariants().unwrap();
        assert!(q.less(3, 2) && q.less(1, 0) && q.less(1, 2));
        assert_eq!(q.relation_count(), 3);
    }

    #[test]
    fn from_relation_rejects_non_orders() {
        assert!(Poset::from_relation(3, |u, v| (u, v) == (0, 1) || (u, v) == (1, 2)).is_err());
        let p = Poset::from_relation(3, |u, v| u < v).unwrap();
        assert_eq!(p, Poset::chain(3));
    }
}
