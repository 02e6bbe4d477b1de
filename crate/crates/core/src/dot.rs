//! Graphviz output of Hasse diagrams.

use std::fmt::Write as _;

use crate::poset::Poset;

/// The cover relation as a DOT digraph, drawn bottom to top so that smaller
/// elements sit lower.
pub fn to_dot(p: &Poset) -> String {
    let mut out = String::from("digraph hasse {\n  rankdir=BT;\n  node [shape=circle];\n");
    for v in 0..p.size() {
        writeln!(out, "  {v};").unwrap();
    }
    for (u, v) in p.cover_relation().covers {
        writeln!(out, "  {u} -> {v};").unwrap();
    }
    out.push_str("}\n");
    out
}
