//! Small posets with a prescribed number of linear extensions.
//!
//! Every strategy first produces a [`Plan`], a construction trace plus the
//! size bound the strategy promises. Plans are cheap to build and compose;
//! [`certify`] materializes a plan into a [`Certificate`] and recounts the
//! witness.
//!
//! Strategies:
//!
//! * `atlas`: stored minimal witnesses for `n <= 12`.
//! * `chain-plus-one`: `C_{n-1} + C_1`, size `n`.
//! * `factor`: for `n = ab` with `a < b`, `(P ⊕ C_{b-1-|P|}) + C_1` where
//!   `P` has `a` extensions; size `b`.
//! * `linear(d)`: size at most `⌊n/d⌋ + d`, by the gadget `Q_{r,d,q+r}`
//!   where `n = qd - r`, by an ordinal product when `d | n`, and otherwise
//!   by retrying with `d - 1`.
//! * `special`: for `n = ab` with `2√b < a <= b`, the factor construction
//!   with the roles swapped; size `a <= ⌊√n⌋`.
//!
//! [`Synthesizer::plan_best`] takes the smallest of these, which is always
//! at most `⌊2√n⌋` because `linear(⌈√n⌉)` is among the candidates.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::atlas::ATLAS_MAX;
use crate::cert::{Certificate, VerifiedBy};
use crate::count::{count_brute, count_ideal_dp, CountError, ExtensionCount};
use crate::trace::{count_trace, realize, ConstructionTrace, TraceError, TraceNode};

/// Largest target accepted by the synthesizers.
pub const MAX_TARGET: u64 = 1_000_000_000;

/// Witnesses up to this size are recounted by the ideal-lattice counter.
pub const DP_RECOUNT_LIMIT: usize = 64;
/// Witnesses up to this size are also recounted by brute force.
pub const BRUTE_RECOUNT_LIMIT: usize = 10;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SynthError {
    #[error("target {0} out of range 1..={MAX_TARGET}")]
    OutOfRange(u64),
    #[error("invalid factor pair ({a}, {b}): {reason}")]
    InvalidFactors {
        a: u64,
        b: u64,
        reason: &'static str,
    },
    #[error("the divisor parameter d must be at least 1")]
    InvalidDivisor,
    #[error("construction for {n} failed its own check: {reason}")]
    SelfCheck { n: u64, reason: String },
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error(transparent)]
    Count(#[from] CountError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Strategy {
    Atlas,
    ChainPlusOne,
    Factor,
    Linear(u64),
    Special,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Strategy::Atlas => f.write_str("atlas"),
            Strategy::ChainPlusOne => f.write_str("chain-plus-one"),
            Strategy::Factor => f.write_str("factor"),
            Strategy::Linear(d) => write!(f, "linear({d})"),
            Strategy::Special => f.write_str("special"),
        }
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "atlas" => Ok(Strategy::Atlas),
            "chain-plus-one" => Ok(Strategy::ChainPlusOne),
            "factor" => Ok(Strategy::Factor),
            "special" => Ok(Strategy::Special),
            _ => s
                .strip_prefix("linear(")
                .and_then(|rest| rest.strip_suffix(')'))
                .and_then(|d| d.parse().ok())
                .map(Strategy::Linear)
                .ok_or_else(|| format!("unknown strategy `{s}`")),
        }
    }
}

/// An unmaterialized construction for target `n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Plan {
    pub n: u64,
    pub trace: Arc<ConstructionTrace>,
    pub strategy: Strategy,
    pub bound: u64,
}

impl Plan {
    pub fn size(&self) -> usize {
        self.trace.claimed_size
    }

    /// Tie-break order among equal sizes: atlas, gadget, factor-shaped,
    /// ordinal composition, everything else.
    fn preference(&self) -> u8 {
        match (self.strategy, &self.trace.node) {
            (_, TraceNode::Atlas(_)) => 0,
            (_, TraceNode::Gadget { .. }) => 1,
            (Strategy::Factor | Strategy::Special, _) => 2,
            (_, TraceNode::OrdinalSum(..)) => 3,
            _ => 4,
        }
    }
}

/// `⌊2√n⌋`, computed exactly.
pub fn two_sqrt_floor(n: u64) -> u64 {
    (4 * n).isqrt()
}

/// `⌈√n⌉`, computed exactly.
pub fn sqrt_ceil(n: u64) -> u64 {
    let r = n.isqrt();
    if r * r == n {
        r
    } else {
        r + 1
    }
}

fn check_target(n: u64) -> Result<(), SynthError> {
    if (1..=MAX_TARGET).contains(&n) {
        Ok(())
    } else {
        Err(SynthError::OutOfRange(n))
    }
}

/// Divisor pairs `(a, n/a)` with `a <= n/a`, by increasing `a`.
fn divisor_pairs(n: u64) -> impl Iterator<Item = (u64, u64)> {
    (1..=n.isqrt())
        .filter(move |&a| n.is_multiple_of(a))
        .map(move |a| (a, n / a))
}

/// Builds plans, memoizing the best plan per target. One instance can be
/// reused across many targets; it holds no other state.
#[derive(Debug, Default)]
pub struct Synthesizer {
    best: HashMap<u64, Plan>,
}

impl Synthesizer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn plan_atlas(&self, n: u64) -> Result<Plan, SynthError> {
        let trace = ConstructionTrace::atlas(n)?;
        Ok(Plan {
            n,
            bound: trace.claimed_size as u64,
            trace,
            strategy: Strategy::Atlas,
        })
    }

    pub fn plan_chain_plus_one(&self, n: u64) -> Result<Plan, SynthError> {
        check_target(n)?;
        Ok(Plan {
            n,
            trace: chain_plus_one_trace(n),
            strategy: Strategy::ChainPlusOne,
            bound: n,
        })
    }

    /// `(P ⊕ C_{b-1-|P|}) + C_1` with `e(P) = a`; size exactly `b`.
    pub fn plan_factor(&mut self, a: u64, b: u64) -> Result<Plan, SynthError> {
        if a == 0 || a >= b {
            return Err(SynthError::InvalidFactors {
                a,
                b,
                reason: "need 1 <= a < b",
            });
        }
        let n = a.checked_mul(b).ok_or(SynthError::OutOfRange(u64::MAX))?;
        check_target(n)?;
        let inner = self.plan_best(a)?.trace;
        Ok(Plan {
            n,
            trace: pad_and_pair(inner, b as usize),
            strategy: Strategy::Factor,
            bound: b,
        })
    }

    /// Size at most `⌊n/d⌋ + d`.
    pub fn plan_linear(&mut self, n: u64, d: u64) -> Result<Plan, SynthError> {
        check_target(n)?;
        if d == 0 {
            return Err(SynthError::InvalidDivisor);
        }
        let trace = self.linear_trace(n, d)?;
        Ok(Plan {
            n,
            trace,
            strategy: Strategy::Linear(d),
            bound: n / d + d,
        })
    }

    fn linear_trace(&mut self, n: u64, d: u64) -> Result<Arc<ConstructionTrace>, SynthError> {
        if n <= ATLAS_MAX {
            return Ok(ConstructionTrace::atlas(n)?);
        }
        // For d > n every step down to d = n falls through to the retry.
        let mut d = d.min(n);
        loop {
            if d == 1 {
                return Ok(chain_plus_one_trace(n));
            }
            let q = n.div_ceil(d);
            let r = q * d - n;
            if r >= 1 && q + r >= d + 2 {
                return Ok(ConstructionTrace::gadget(
                    r as usize,
                    d as usize,
                    (q + r) as usize,
                )?);
            }
            if r == 0 {
                let left = self.plan_best(q)?.trace;
                let right = self.plan_best(d)?.trace;
                return Ok(ConstructionTrace::ordinal_sum(left, right));
            }
            d -= 1;
        }
    }

    /// The special-case construction with the smallest admissible `a`, or
    /// `None` when no divisor pair satisfies `2√b < a <= b`.
    pub fn plan_special(&mut self, n: u64) -> Result<Option<Plan>, SynthError> {
        check_target(n)?;
        match divisor_pairs(n).find(|&(a, b)| 4 * b < a * a) {
            Some((a, b)) => self.plan_special_pair(a, b).map(Some),
            None => Ok(None),
        }
    }

    /// `(P ⊕ C_{a-1-|P|}) + C_1` with `e(P) = b`; size exactly `a`.
    pub fn plan_special_pair(&mut self, a: u64, b: u64) -> Result<Plan, SynthError> {
        if a > b || 4 * b >= a.saturating_mul(a) {
            return Err(SynthError::InvalidFactors {
                a,
                b,
                reason: "need 2√b < a <= b",
            });
        }
        let n = a.checked_mul(b).ok_or(SynthError::OutOfRange(u64::MAX))?;
        check_target(n)?;
        let inner = self.plan_best(b)?.trace;
        debug_assert!((inner.claimed_size as u64) < a);
        Ok(Plan {
            n,
            trace: pad_and_pair(inner, a as usize),
            strategy: Strategy::Special,
            bound: n.isqrt(),
        })
    }

    /// The smallest plan among all strategies; size at most `⌊2√n⌋`.
    pub fn plan_best(&mut self, n: u64) -> Result<Plan, SynthError> {
        if let Some(plan) = self.best.get(&n) {
            return Ok(plan.clone());
        }
        check_target(n)?;
        let bound = two_sqrt_floor(n);
        let mut candidates = Vec::new();
        if n <= ATLAS_MAX {
            candidates.push(self.plan_atlas(n)?);
        } else {
            candidates.push(self.plan_linear(n, sqrt_ceil(n))?);
            if let Some(plan) = self.plan_special(n)? {
                candidates.push(plan);
            }
            for (a, b) in divisor_pairs(n) {
                if a < b && b <= bound {
                    candidates.push(self.plan_factor(a, b)?);
                }
            }
        }
        let mut best = candidates
            .into_iter()
            .min_by_key(|p| (p.size(), p.preference()))
            .expect("at least one candidate");
        best.bound = bound;
        if best.size() as u64 > bound {
            return Err(SynthError::SelfCheck {
                n,
                reason: format!("size {} exceeds ⌊2√n⌋ = {bound}", best.size()),
            });
        }
        self.best.insert(n, best.clone());
        Ok(best)
    }
}

fn chain_plus_one_trace(n: u64) -> Arc<ConstructionTrace> {
    ConstructionTrace::direct_sum(
        ConstructionTrace::chain(n as usize - 1),
        ConstructionTrace::chain(1),
    )
}

/// `(inner ⊕ C_{total-1-|inner|}) + C_1`, a poset of size `total` with
/// `total · e(inner)` extensions.
fn pad_and_pair(inner: Arc<ConstructionTrace>, total: usize) -> Arc<ConstructionTrace> {
    let pad = total - 1 - inner.claimed_size;
    ConstructionTrace::direct_sum(
        ConstructionTrace::ordinal_sum(inner, ConstructionTrace::chain(pad)),
        ConstructionTrace::chain(1),
    )
}

/// Materializes a plan and checks it: trace arithmetic always, the
/// ideal-lattice counter up to [`DP_RECOUNT_LIMIT`] elements and brute force
/// up to [`BRUTE_RECOUNT_LIMIT`].
pub fn certify(plan: Plan) -> Result<Certificate, SynthError> {
    let n = plan.n;
    let fail = |reason: String| SynthError::SelfCheck { n, reason };
    let target = ExtensionCount::from(n);
    let by_trace = count_trace(&plan.trace)?;
    if by_trace != target {
        return Err(fail(format!("trace counts {by_trace}")));
    }
    let size = plan.size();
    if size as u64 > plan.bound {
        return Err(fail(format!("size {size} exceeds bound {}", plan.bound)));
    }
    let witness = realize(&plan.trace)?;
    let mut verified_by = VerifiedBy::TraceFormula;
    if size <= DP_RECOUNT_LIMIT {
        let by_dp = count_ideal_dp(&witness)?;
        if by_dp != target {
            return Err(fail(format!("ideal-lattice recount gives {by_dp}")));
        }
        verified_by = VerifiedBy::IdealDp;
    }
    if size <= BRUTE_RECOUNT_LIMIT {
        let by_brute = count_brute(&witness)?;
        if by_brute != target {
            return Err(fail(format!("brute-force recount gives {by_brute}")));
        }
        verified_by = VerifiedBy::BruteForce;
    }
    Ok(Certificate {
        n,
        trace: plan.trace,
        witness,
        size,
        bound: plan.bound,
        strategy: plan.strategy,
        verified_by,
    })
}

/// The stored minimal witness for `1 <= n <= 12`.
pub fn atlas_witness(n: u64) -> Result<Certificate, SynthError> {
    certify(Synthesizer::new().plan_atlas(n)?)
}

pub fn chain_plus_one(n: u64) -> Result<Certificate, SynthError> {
    certify(Synthesizer::new().plan_chain_plus_one(n)?)
}

pub fn synth_factor(a: u64, b: u64) -> Result<Certificate, SynthError> {
    certify(Synthesizer::new().plan_factor(a, b)?)
}

pub fn synth_linear(n: u64, d: u64) -> Result<Certificate, SynthError> {
    certify(Synthesizer::new().plan_linear(n, d)?)
}

pub fn synth_special(n: u64) -> Result<Option<Certificate>, SynthError> {
    Synthesizer::new().plan_special(n)?.map(certify).transpose()
}

pub fn synth_best(n: u64) -> Result<Certificate, SynthError> {
    certify(Synthesizer::new().plan_best(n)?)
}
