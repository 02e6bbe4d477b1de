//! Posets with a prescribed number of linear extensions.
//!
//! * [`poset`]: finite posets, sums, the gadget `Q(i,j,m)`, covers,
//!   canonical keys and the text format.
//! * [`count`]: exact counting by brute force and by the order-ideal lattice.
//! * [`trace`]: construction recipes whose counts follow from composition
//!   rules.
//! * [`synth`]: constructions with at most `⌊2√n⌋` elements for any `n`.
//! * [`cert`]: certificates and their text form.
//! * [`search`]: exact λ(n) by exhaustive enumeration.

pub mod atlas;
pub mod cert;
pub mod cli;
pub mod count;
pub mod dot;
pub mod poset;
pub mod search;
pub mod synth;
pub mod trace;

pub use cert::{Certificate, Recount, VerifiedBy};
pub use count::{count_brute, count_ideal_dp, ExtensionCount};
pub use poset::{CanonicalKey, CoverList, Poset, PosetError};
pub use search::{enumerate_posets, lambda_exact, lambda_table, LambdaOutcome, SearchResult};
pub use synth::{
    atlas_witness, certify, chain_plus_one, synth_best, synth_factor, synth_linear, synth_special,
    Plan, Strategy, Synthesizer,
};
pub use trace::{count_trace, realize, ConstructionTrace, TraceNode};
