//! Minimal witnesses for 1 <= n <= 12.
//!
//! Each entry is a poset of the smallest possible size with exactly `n`
//! linear extensions, given by its cover pairs.

use crate::poset::Poset;

pub const ATLAS_MAX: u64 = 12;

/// Minimal sizes for n = 1..=12.
pub const ATLAS_SIZES: [usize; 12] = [0, 2, 3, 4, 4, 3, 5, 4, 5, 5, 5, 4];

// N poset: 0 < 1, 2 < 3, 2 < 1.
const WITNESS_COVERS: [&[(usize, usize)]; 12] = [
    // 1: empty
    &[],
    // 2: two-element antichain
    &[],
    // 3: C2 + C1
    &[(0, 1)],
    // 4: (C1 + C1) ⊕ (C1 + C1)
    &[(0, 2), (0, 3), (1, 2), (1, 3)],
    // 5: N
    &[(0, 1), (2, 3), (2, 1)],
    // 6: three-element antichain
    &[],
    // 7: N with a new minimum under the bottom that has two covers
    &[(0, 1), (2, 3), (2, 1), (4, 2)],
    // 8: ((C1 + C1) ⊕ C1) + C1
    &[(0, 2), (1, 2)],
    // 9: N with a new minimum under the other bottom
    &[(0, 1), (2, 3), (2, 1), (4, 0)],
    // 10: ((C1 + C1) ⊕ C2) + C1
    &[(0, 2), (1, 2), (2, 3)],
    // 11: the gadget Q(1,3,5)
    &[(0, 1), (1, 2), (0, 3), (4, 2)],
    // 12: C2 + C1 + C1
    &[(0, 1)],
];

/// The stored witness for `n`, or `None` outside 1..=12.
pub fn atlas_poset(n: u64) -> Option<Poset> {
    if !(1..=ATLAS_MAX).contains(&n) {
        return None;
    }
    let idx = n as usize - 1;
    Some(
        Poset::from_cover_pairs(ATLAS_SIZES[idx], WITNESS_COVERS[idx])
            .expect("atlas witnesses are partial orders"),
    )
}

pub fn atlas_size(n: u64) -> Option<usize> {
    (1..=ATLAS_MAX)
        .contains(&n)
        .then(|| ATLAS_SIZES[n as usize - 1])
}
