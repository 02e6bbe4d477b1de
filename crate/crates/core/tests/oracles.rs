mod common;

use std::collections::BTreeSet;

use linext::count::binomial;
use linext::trace::realize;
use linext::{
    count_brute, count_ideal_dp, count_trace, enumerate_posets, ConstructionTrace, Poset,
};
use proptest::prelude::*;

use common::*;

fn dp(p: &Poset) -> u64 {
    count_ideal_dp(p).unwrap().to_u64().unwrap()
}

fn all_classes_through(m: usize) -> Vec<Poset> {
    (0..=m).flat_map(|k| enumerate_posets(k).unwrap()).collect()
}

#[test]
fn brute_matches_dp_on_every_class_through_six() {
    let classes = all_classes_through(6);
    assert_eq!(classes.len(), 406);
    for p in &classes {
        p.check_invariants().unwrap();
        assert_eq!(count_brute(p).unwrap(), dp(p), "{p:?}");
    }
}

#[test]
fn brute_matches_full_permutation_scan() {
    for p in all_classes_through(5) {
        assert_eq!(
            count_brute(&p).unwrap(),
            count_all_permutations(&p),
            "{p:?}"
        );
    }
}

#[test]
fn covers_reproduce_closure_through_six() {
    for p in all_classes_through(6) {
        let covers = p.cover_relation();
        assert_eq!(covers.to_poset().unwrap(), p);
        // no cover is implied by the others
        for &(u, v) in &covers.covers {
            assert!((0..p.size()).all(|w| !(p.less(u, w) && p.less(w, v))));
        }
    }
}

#[test]
fn canonical_key_invariant_under_every_relabeling() {
    for m in 0..=5 {
        let perms = all_permutations(m);
        for p in enumerate_posets(m).unwrap() {
            let key = p.canonical_key();
            for perm in &perms {
                assert_eq!(p.relabel(perm).canonical_key(), key);
            }
        }
    }
}

#[test]
fn labeled_enumeration_agrees_through_six() {
    let known_labeled = [1, 1, 3, 19, 219, 4231, 130023];
    for (m, &known) in known_labeled.iter().enumerate() {
        let (labeled, keys) = labeled_posets(m);
        assert_eq!(labeled, known);
        let ours: BTreeSet<_> = enumerate_posets(m)
            .unwrap()
            .iter()
            .map(Poset::canonical_key)
            .collect();
        assert_eq!(ours, keys, "size {m}");
    }
}

#[test]
fn gadget_formula_through_nine() {
    for m in 4..=9 {
        for j in 2..=m - 2 {
            for i in 1..j {
                let q = Poset::gadget_q(i, j, m).unwrap();
                let expect = ((m - i) * j - i) as u64;
                assert_eq!(dp(&q), expect);
                assert_eq!(count_all_permutations(&q), expect);
            }
        }
    }
}

#[test]
fn traces_realize_to_their_counts() {
    type T = ConstructionTrace;
    let leaves = vec![
        T::chain(0),
        T::chain(1),
        T::chain(3),
        T::atlas(5).unwrap(),
        T::atlas(7).unwrap(),
        T::gadget(1, 2, 4).unwrap(),
        T::gadget(2, 3, 5).unwrap(),
    ];
    let mut traces = leaves.clone();
    for a in &leaves {
        for b in &leaves {
            traces.push(T::direct_sum(a.clone(), b.clone()));
            traces.push(T::ordinal_sum(a.clone(), b.clone()));
        }
    }
    for t in traces.into_iter().filter(|t| t.claimed_size <= 10) {
        let p = realize(&t).unwrap();
        assert_eq!(p.size(), t.claimed_size);
        assert_eq!(count_trace(&t).unwrap(), dp(&p));
    }
}

fn arb_poset(max: usize) -> impl Strategy<Value = Poset> {
    (0..=max)
        .prop_flat_map(|n| {
            let pairs = n * n.saturating_sub(1) / 2;
            (
                Just(n),
                prop::collection::vec(any::<bool>(), pairs),
                Just((0..n).collect::<Vec<usize>>()).prop_shuffle(),
            )
        })
        .prop_map(|(n, bits, perm)| {
            let mut pairs = Vec::new();
            let mut k = 0;
            for u in 0..n {
                for v in u + 1..n {
                    if bits[k] {
                        pairs.push((u, v));
                    }
                    k += 1;
                }
            }
            Poset::from_cover_pairs(n, &pairs).unwrap().relabel(&perm)
        })
}

proptest! {
    #[test]
    fn constructors_keep_invariants(p in arb_poset(5), q in arb_poset(5)) {
        let sum = Poset::direct_sum(&p, &q);
        let ord = Poset::ordinal_sum(&p, &q);
        sum.check_invariants().unwrap();
        ord.check_invariants().unwrap();
        prop_assert_eq!(sum.size(), p.size() + q.size());
        prop_assert_eq!(ord.size(), p.size() + q.size());
    }

    #[test]
    fn direct_sum_law(p in arb_poset(4), q in arb_poset(4)) {
        let expect = binomial((p.size() + q.size()) as u64, p.size() as u64) * count_ideal_dp(&p).unwrap().0 * count_ideal_dp(&q).unwrap().0;
        prop_assert_eq!(count_ideal_dp(&Poset::direct_sum(&p, &q)).unwrap().0, expect);
    }

    #[test]
    fn ordinal_sum_law(p in arb_poset(4), q in arb_poset(4)) {
        prop_assert_eq!(dp(&Poset::ordinal_sum(&p, &q)), dp(&p) * dp(&q));
    }

    #[test]
    fn chain_on_top_changes_nothing(p in arb_poset(5), l in 0usize..=5) {
        prop_assert_eq!(dp(&Poset::ordinal_sum(&p, &Poset::chain(l))), dp(&p));
    }

    #[test]
    fn padded_pair_multiplies(p in arb_poset(5), l in 0usize..=5) {
        let q = Poset::direct_sum(&Poset::ordinal_sum(&p, &Poset::chain(l)), &Poset::chain(1));
        prop_assert_eq!(dp(&q), (p.size() + l + 1) as u64 * dp(&p));
    }

    #[test]
    fn canonical_key_ignores_labels(p in arb_poset(7), seed in any::<u64>()) {
        let n = p.size();
        let mut perm: Vec<usize> = (0..n).collect();
        let mut s = seed;
        for i in (1..n).rev() {
            s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            perm.swap(i, (s >> 33) as usize % (i + 1));
        }
        prop_assert_eq!(p.relabel(&perm).canonical_key(), p.canonical_key());
    }

    #[test]
    fn text_format_round_trip(p in arb_poset(8)) {
        let text = linext::poset::write_poset(&p);
        prop_assert_eq!(linext::poset::parse_poset(&text).unwrap(), p);
    }
}
