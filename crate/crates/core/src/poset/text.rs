//! Plain-text poset format.
//!
//! ```text
//! # the N poset
//! poset 4
//! 0 1
//! 2 1
//! 2 3
//! ```
//!
//! The header gives the element count; each following line is a cover pair
//! `u v` (0-indexed, `u < v`). Blank lines and `#` comments are ignored.

use std::fmt::Write as _;

use super::{Poset, PosetError};

fn parse_err(line: usize, message: impl Into<String>) -> PosetError {
    PosetError::Parse {
        line,
        message: message.into(),
    }
}

/// Parses the text format. The pairs are closed transitively and checked for
/// cycles.
pub fn parse_poset(input: &str) -> Result<Poset, PosetError> {
    let mut size = None;
    let mut pairs = Vec::new();
    for (idx, raw) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match size {
            None => {
                if tokens.len() != 2 || tokens[0] != "poset" {
                    return Err(parse_err(line_no, "expected header `poset <size>`"));
                }
                let n = tokens[1]
                    .parse::<usize>()
                    .map_err(|_| parse_err(line_no, format!("invalid size `{}`", tokens[1])))?;
                size = Some(n);
            }
            Some(_) => {
                if tokens.len() != 2 {
                    return Err(parse_err(line_no, "expected a cover pair `u v`"));
                }
                let mut ends = [0usize; 2];
                for (slot, tok) in ends.iter_mut().zip(&tokens) {
                    *slot = tok
                        .parse()
                        .map_err(|_| parse_err(line_no, format!("invalid element `{tok}`")))?;
                }
                pairs.push((ends[0], ends[1]));
            }
        }
    }
    let size = size.ok_or_else(|| parse_err(0, "missing header `poset <size>`"))?;
    Poset::from_cover_pairs(size, &pairs)
}

/// Writes the header and the cover pairs in lexicographic order, with a
/// trailing newline.
pub fn write_poset(p: &Poset) -> String {
    let mut out = format!("poset {}\n", p.size());
    for (u, v) in p.cover_relation().covers {
        writeln!(out, "{u} {v}").unwrap();
    }
    out
}
