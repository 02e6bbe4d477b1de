//! Construction traces: recipes that build a poset from chains, direct and
//! ordinal sums, gadgets and atlas witnesses, with a claimed size and
//! extension count at every node.
//!
//! The count of a trace follows from the composition rules alone:
//!
//! * `e(C_l) = 1`
//! * `e(P + Q) = C(|P|+|Q|, |P|) · e(P) · e(Q)`
//! * `e(P ⊕ Q) = e(P) · e(Q)`
//! * `e(Q_{i,j,m}) = (m-i)·j - i`
//!
//! [`count_trace`] re-derives every node bottom-up and rejects the trace if
//! any claim disagrees.

use std::fmt::{self, Write as _};
use std::str::FromStr;
use std::sync::Arc;

use num_bigint::BigUint;
use thiserror::Error;

use crate::atlas;
use crate::count::{binomial, ExtensionCount};
use crate::poset::Poset;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("invalid gadget parameters (i={i}, j={j}, m={m}): need 1 <= i < j <= m-2")]
    InvalidGadget { i: usize, j: usize, m: usize },
    #[error("no atlas witness for n = {0}")]
    UnknownAtlas(u64),
    #[error("{node} node claims size {claimed}, composition gives {actual}")]
    SizeMismatch {
        node: &'static str,
        claimed: usize,
        actual: usize,
    },
    #[error("{node} node claims count {claimed}, composition gives {actual}")]
    CountMismatch {
        node: &'static str,
        claimed: ExtensionCount,
        actual: ExtensionCount,
    },
    #[error("trace syntax: {0}")]
    Syntax(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TraceNode {
    Chain(usize),
    DirectSum(Arc<ConstructionTrace>, Arc<ConstructionTrace>),
    OrdinalSum(Arc<ConstructionTrace>, Arc<ConstructionTrace>),
    Gadget { i: usize, j: usize, m: usize },
    Atlas(u64),
}

impl TraceNode {
    fn keyword(&self) -> &'static str {
        match self {
            TraceNode::Chain(_) => "chain",
            TraceNode::DirectSum(..) => "sum",
            TraceNode::OrdinalSum(..) => "ordinal",
            TraceNode::Gadget { .. } => "gadget",
            TraceNode::Atlas(_) => "atlas",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstructionTrace {
    pub node: TraceNode,
    pub claimed_size: usize,
    pub claimed_count: ExtensionCount,
}

fn gadget_valid(i: usize, j: usize, m: usize) -> bool {
    1 <= i && i < j && j + 2 <= m
}

fn gadget_count(i: usize, j: usize, m: usize) -> BigUint {
    BigUint::from(m - i) * BigUint::from(j) - BigUint::from(i)
}

impl ConstructionTrace {
    /// A node with explicitly supplied claims, as read back from text.
    pub fn with_claims(
        node: TraceNode,
        claimed_size: usize,
        claimed_count: ExtensionCount,
    ) -> Self {
        ConstructionTrace {
            node,
            claimed_size,
            claimed_count,
        }
    }

    pub fn chain(length: usize) -> Arc<Self> {
        Arc::new(Self::with_claims(
            TraceNode::Chain(length),
            length,
            ExtensionCount::one(),
        ))
    }

    pub fn direct_sum(left: Arc<Self>, right: Arc<Self>) -> Arc<Self> {
        let (a, b) = (left.claimed_size, right.claimed_size);
        let count =
            binomial((a + b) as u64, a as u64) * &left.claimed_count.0 * &right.claimed_count.0;
        Arc::new(Self::with_claims(
            TraceNode::DirectSum(left, right),
            a + b,
            ExtensionCount(count),
        ))
    }

    pub fn ordinal_sum(left: Arc<Self>, right: Arc<Self>) -> Arc<Self> {
        let size = left.claimed_size + right.claimed_size;
        let count = &left.claimed_count.0 * &right.claimed_count.0;
        Arc::new(Self::with_claims(
            TraceNode::OrdinalSum(left, right),
            size,
            ExtensionCount(count),
        ))
    }

    pub fn gadget(i: usize, j: usize, m: usize) -> Result<Arc<Self>, TraceError> {
        if !gadget_valid(i, j, m) {
            return Err(TraceError::InvalidGadget { i, j, m });
        }
        Ok(Arc::new(Self::with_claims(
            TraceNode::Gadget { i, j, m },
            m,
            ExtensionCount(gadget_count(i, j, m)),
        )))
    }

    pub fn atlas(n: u64) -> Result<Arc<Self>, TraceError> {
        let size = atlas::atlas_size(n).ok_or(TraceError::UnknownAtlas(n))?;
        Ok(Arc::new(Self::with_claims(
            TraceNode::Atlas(n),
            size,
            ExtensionCount::from(n),
        )))
    }

    /// Number of nodes in the trace.
    pub fn node_count(&self) -> usize {
        match &self.node {
            TraceNode::DirectSum(l, r) | TraceNode::OrdinalSum(l, r) => {
                1 + l.node_count() + r.node_count()
            }
            _ => 1,
        }
    }
}

/// Recomputes size and count bottom-up from the node structure, checking
/// every claim along the way. Returns the count of the root.
pub fn count_trace(t: &ConstructionTrace) -> Result<ExtensionCount, TraceError> {
    derive(t).map(|(_, count)| ExtensionCount(count))
}

fn derive(t: &ConstructionTrace) -> Result<(usize, BigUint), TraceError> {
    let (size, count) = match &t.node {
        TraceNode::Chain(l) => (*l, BigUint::from(1u32)),
        TraceNode::DirectSum(l, r) => {
            let (a, ca) = derive(l)?;
            let (b, cb) = derive(r)?;
            (a + b, binomial((a + b) as u64, a as u64) * ca * cb)
        }
        TraceNode::OrdinalSum(l, r) => {
            let (a, ca) = derive(l)?;
            let (b, cb) = derive(r)?;
            (a + b, ca * cb)
        }
        &TraceNode::Gadget { i, j, m } => {
            if !gadget_valid(i, j, m) {
                return Err(TraceError::InvalidGadget { i, j, m });
            }
            (m, gadget_count(i, j, m))
        }
        &TraceNode::Atlas(n) => {
            let size = atlas::atlas_size(n).ok_or(TraceError::UnknownAtlas(n))?;
            (size, BigUint::from(n))
        }
    };
    let node = t.node.keyword();
    if t.claimed_size != size {
        return Err(TraceError::SizeMismatch {
            node,
            claimed: t.claimed_size,
            actual: size,
        });
    }
    if t.claimed_count.0 != count {
        return Err(TraceError::CountMismatch {
            node,
            claimed: t.claimed_count.clone(),
            actual: ExtensionCount(count),
        });
    }
    Ok((size, count))
}

/// Materializes a trace through the poset constructors. Left operands of a
/// sum keep their labels; right operands are shifted past them.
pub fn realize(t: &ConstructionTrace) -> Result<Poset, TraceError> {
    derive(t)?;
    Ok(build(t))
}

fn build(t: &ConstructionTrace) -> Poset {
    match &t.node {
        TraceNode::Chain(l) => Poset::chain(*l),
        TraceNode::DirectSum(l, r) => Poset::direct_sum(&build(l), &build(r)),
        TraceNode::OrdinalSum(l, r) => Poset::ordinal_sum(&build(l), &build(r)),
        &TraceNode::Gadget { i, j, m } => Poset::gadget_q(i, j, m).expect("validated gadget"),
        &TraceNode::Atlas(n) => atlas::atlas_poset(n).expect("validated atlas index"),
    }
}

impl ConstructionTrace {
    /// Multi-line s-expression; leaves on one line, composite children
    /// indented two spaces under their parent.
    pub fn to_sexpr(&self, indent: usize) -> String {
        let mut out = String::new();
        self.write_sexpr(&mut out, indent);
        out
    }

    fn write_sexpr(&self, out: &mut String, indent: usize) {
        let claims = format!(":size {} :count {}", self.claimed_size, self.claimed_count);
        match &self.node {
            TraceNode::Chain(l) => write!(out, "(chain {l} {claims})").unwrap(),
            TraceNode::Gadget { i, j, m } => write!(out, "(gadget {i} {j} {m} {claims})").unwrap(),
            TraceNode::Atlas(n) => write!(out, "(atlas {n} {claims})").unwrap(),
            TraceNode::DirectSum(l, r) | TraceNode::OrdinalSum(l, r) => {
                write!(out, "({} {claims}", self.node.keyword()).unwrap();
                for child in [l, r] {
                    out.push('\n');
                    out.push_str(&" ".repeat(indent + 2));
                    child.write_sexpr(out, indent + 2);
                }
                out.push(')');
            }
        }
    }
}

impl fmt::Display for ConstructionTrace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_sexpr(0))
    }
}

impl FromStr for ConstructionTrace {
    type Err = TraceError;

    /// Parses the s-expression form. Claims are taken as written; run
    /// [`count_trace`] to check them.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let tokens = tokenize(s);
        let mut pos = 0;
        let t = parse_node(&tokens, &mut pos)?;
        if pos != tokens.len() {
            return Err(TraceError::Syntax(format!(
                "unexpected `{}` after trace",
                tokens[pos]
            )));
        }
        Ok(t)
    }
}

fn tokenize(s: &str) -> Vec<String> {
    s.replace('(', " ( ")
        .replace(')', " ) ")
        .split_whitespace()
        .map(str::to_owned)
        .collect()
}

fn syntax(msg: impl Into<String>) -> TraceError {
    TraceError::Syntax(msg.into())
}

fn next<'a>(tokens: &'a [String], pos: &mut usize) -> Result<&'a str, TraceError> {
    let tok = tokens
        .get(*pos)
        .ok_or_else(|| syntax("unexpected end of trace"))?;
    *pos += 1;
    Ok(tok)
}

fn expect(tokens: &[String], pos: &mut usize, want: &str) -> Result<(), TraceError> {
    let tok = next(tokens, pos)?;
    if tok != want {
        return Err(syntax(format!("expected `{want}`, found `{tok}`")));
    }
    Ok(())
}

fn number<T: FromStr>(tokens: &[String], pos: &mut usize) -> Result<T, TraceError> {
    let tok = next(tokens, pos)?;
    tok.parse()
        .map_err(|_| syntax(format!("expected a nonnegative integer, found `{tok}`")))
}

fn parse_node(tokens: &[String], pos: &mut usize) -> Result<ConstructionTrace, TraceError> {
    expect(tokens, pos, "(")?;
    let kind = next(tokens, pos)?.to_owned();
    let mut args = Vec::new();
    let arity = match kind.as_str() {
        "chain" | "atlas" => 1,
        "gadget" => 3,
        "sum" | "ordinal" => 0,
        other => return Err(syntax(format!("unknown node kind `{other}`"))),
    };
    for _ in 0..arity {
        args.push(number::<u64>(tokens, pos)?);
    }
    expect(tokens, pos, ":size")?;
    let size: usize = number(tokens, pos)?;
    expect(tokens, pos, ":count")?;
    let count = ExtensionCount(number::<BigUint>(tokens, pos)?);
    let as_usize = |v: u64| usize::try_from(v).map_err(|_| syntax("parameter too large"));
    let node = match kind.as_str() {
        "chain" => TraceNode::Chain(as_usize(args[0])?),
        "atlas" => TraceNode::Atlas(args[0]),
        "gadget" => TraceNode::Gadget {
            i: as_usize(args[0])?,
            j: as_usize(args[1])?,
            m: as_usize(args[2])?,
        },
        _ => {
            let left = Arc::new(parse_node(tokens, pos)?);
            let right = Arc::new(parse_node(tokens, pos)?);
            if kind == "sum" {
                TraceNode::DirectSum(left, right)
            } else {
                TraceNode::OrdinalSum(left, right)
            }
        }
    };
    expect(tokens, pos, ")")?;
    Ok(ConstructionTrace::with_claims(node, size, count))
}
