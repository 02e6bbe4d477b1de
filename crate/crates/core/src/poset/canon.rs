//! Canonical labeling of posets up to isomorphism.
//!
//! Elements are first colored by `(down-degree, up-degree)` and the coloring
//! is refined until every element's color determines the multisets of colors
//! below and above it. If classes remain, an element of the first
//! non-singleton class is individualized and the search recurses; the
//! canonical labeling is the one whose relation matrix encodes to the least
//! byte string. Elements with identical up- and down-sets are interchangeable
//! by an automorphism, so only one of them is individualized per class.

use super::Poset;

/// A byte string identifying an isomorphism class of posets.
///
/// The first four bytes hold the size (big-endian), followed by the relation
/// matrix of the canonically labeled poset packed row-major, most
/// significant bit first. Keys therefore sort by size first.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CanonicalKey(Vec<u8>);

impl CanonicalKey {
    pub fn as_bytes(&self) -> &[u8] {
        &self.0
    }

    pub fn size(&self) -> usize {
        u32::from_be_bytes(self.0[..4].try_into().unwrap()) as usize
    }

    /// The canonically labeled representative of the class.
    pub fn to_poset(&self) -> Poset {
        let n = self.size();
        let bits = &self.0[4..];
        Poset::from_relation(n, |u, v| {
            let k = u * n + v;
            bits[k / 8] >> (7 - k % 8) & 1 == 1
        })
        .expect("canonical keys encode partial orders")
    }
}

impl Poset {
    pub fn canonical_key(&self) -> CanonicalKey {
        canonical_form(self).0
    }

    /// The canonically labeled copy of this poset.
    pub fn canonical(&self) -> Poset {
        let (_, perm) = canonical_form(self);
        self.relabel(&perm)
    }
}

/// Returns the canonical key together with a labeling `perm` such that
/// `p.relabel(&perm)` is the canonical representative.
pub fn canonical_form(p: &Poset) -> (CanonicalKey, Vec<usize>) {
    let n = p.size();
    let below: Vec<Vec<usize>> = (0..n).map(|v| p.below(v).collect()).collect();
    let above: Vec<Vec<usize>> = (0..n).map(|v| p.above(v).collect()).collect();
    let ctx = Search {
        poset: p,
        below,
        above,
    };
    let mut colors: Vec<u32> = Vec::with_capacity(n);
    let mut degrees: Vec<(usize, usize)> = (0..n)
        .map(|v| (ctx.below[v].len(), ctx.above[v].len()))
        .collect();
    let sig = degrees.clone();
    degrees.sort_unstable();
    degrees.dedup();
    for s in sig {
        colors.push(degrees.binary_search(&s).unwrap() as u32);
    }
    let mut best: Option<(Vec<u8>, Vec<usize>)> = None;
    ctx.search(colors, &mut best);
    let (bytes, perm) = best.unwrap_or_else(|| (ctx.encode(&[]), Vec::new()));
    (CanonicalKey(bytes), perm)
}

struct Search<'a> {
    poset: &'a Poset,
    below: Vec<Vec<usize>>,
    above: Vec<Vec<usize>>,
}

impl Search<'_> {
    /// Splits color classes until the coloring is equitable. Colors stay
    /// dense (`0..k`) and the relative order of existing classes is kept.
    fn refine(&self, colors: &mut [u32]) -> usize {
        let n = colors.len();
        let mut classes = distinct(colors);
        loop {
            let sigs: Vec<(u32, Vec<u32>, Vec<u32>)> = (0..n)
                .map(|v| {
                    let mut lo: Vec<u32> = self.below[v].iter().map(|&u| colors[u]).collect();
                    let mut hi: Vec<u32> = self.above[v].iter().map(|&u| colors[u]).collect();
                    lo.sort_unstable();
                    hi.sort_unstable();
                    (colors[v], lo, hi)
                })
                .collect();
            let mut sorted: Vec<&(u32, Vec<u32>, Vec<u32>)> = sigs.iter().collect();
            sorted.sort_unstable();
            sorted.dedup();
            for (v, sig) in sigs.iter().enumerate() {
                colors[v] = sorted.binary_search(&sig).unwrap() as u32;
            }
            if sorted.len() == classes {
                return classes;
            }
            classes = sorted.len();
        }
    }

    fn search(&self, mut colors: Vec<u32>, best: &mut Option<(Vec<u8>, Vec<usize>)>) {
        let n = colors.len();
        let classes = self.refine(&mut colors);
        if classes == n {
            let perm: Vec<usize> = colors.iter().map(|&c| c as usize).collect();
            let enc = self.encode(&perm);
            if best.as_ref().is_none_or(|(b, _)| enc < *b) {
                *best = Some((enc, perm));
            }
            return;
        }
        let mut counts = vec![0usize; classes];
        for &c in &colors {
            counts[c as usize] += 1;
        }
        let target = counts.iter().position(|&k| k > 1).unwrap() as u32;
        let mut tried: Vec<usize> = Vec::new();
        for v in (0..n).filter(|&v| colors[v] == target) {
            if tried.iter().any(|&u| self.twins(u, v)) {
                continue;
            }
            tried.push(v);
            let next: Vec<u32> = colors
                .iter()
                .enumerate()
                .map(|(w, &c)| if w == v { 2 * c } else { 2 * c + 1 })
                .collect();
            self.search(next, best);
        }
    }

    fn twins(&self, u: usize, v: usize) -> bool {
        self.poset.up_row(u) == self.poset.up_row(v)
            && self.poset.down_row(u) == self.poset.down_row(v)
    }

    fn encode(&self, perm: &[usize]) -> Vec<u8> {
        let n = perm.len();
        let mut inv = vec![0usize; n];
        for (v, &pos) in perm.iter().enumerate() {
            inv[pos] = v;
        }
        let mut out = Vec::with_capacity(4 + (n * n).div_ceil(8));
        out.extend_from_slice(&(n as u32).to_be_bytes());
        let mut byte = 0u8;
        let mut filled = 0;
        for i in 0..n {
            for j in 0..n {
                byte = byte << 1 | self.poset.less(inv[i], inv[j]) as u8;
                filled += 1;
                if filled == 8 {
                    out.push(byte);
                    byte = 0;
                    filled = 0;
                }
            }
        }
        if filled > 0 {
            out.push(byte << (8 - filled));
        }
        out
    }
}

fn distinct(colors: &[u32]) -> usize {
    let mut c = colors.to_vec();
    c.sort_unstable();
    c.dedup();
    c.len()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n_poset() -> Poset {
        Poset::from_cover_pairs(4, &[(0, 1), (2, 3), (2, 1)]).unwrap()
    }

    fn permutations(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in permutations(n - 1) {
            for pos in 0..n {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    #[test]
    fn chain_vs_antichain() {
        assert_ne!(
            Poset::chain(3).canonical_key(),
            Poset::antichain(3).canonical_key()
        );
    }

    #[test]
    fn n_poset_all_relabelings() {
        let p = n_poset();
        let key = p.canonical_key();
        for perm in permutations(4) {
            assert_eq!(p.relabel(&perm).canonical_key(), key);
        }
    }

    #[test]
    fn direct_sum_is_symmetric() {
        let p = n_poset();
        let q = Poset::chain(2);
        assert_eq!(
            Poset::direct_sum(&p, &q).canonical_key(),
            Poset::direct_sum(&q, &p).canonical_key()
        );
    }

    #[test]
    fn representative_round_trip() {
        let p = Poset::gadget_q(2, 4, 7).unwrap();
        let key = p.canonical_key();
        assert_eq!(key.size(), 7);
        let rep = key.to_poset();
        assert_eq!(rep, p.canonical());
        assert_eq!(rep.canonical_key(), key);
    }

    #[test]
    fn empty_and_singleton() {
        assert_eq!(Poset::empty().canonical_key().as_bytes(), &[0, 0, 0, 0]);
        assert_eq!(Poset::chain(1).canonical_key().to_poset(), Poset::chain(1));
    }

    #[test]
    fn symmetric_posets_are_fast_and_stable() {
        let anti = Poset::antichain(12);
        assert_eq!(anti.canonical_key().to_poset(), anti);
        let chains = (0..4).fold(Poset::empty(), |acc, _| {
            Poset::direct_sum(&acc, &Poset::chain(3))
        });
        let key = chains.canonical_key();
        let shuffled = chains.relabel(&[11, 3, 7, 0, 5, 9, 1, 10, 2, 6, 4, 8]);
        assert_eq!(shuffled.canonical_key(), key);
    }
}
