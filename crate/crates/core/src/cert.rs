//! Certificates and their text form.
//!
//! ```text
//! n: 13
//! strategy: linear(4)
//! size: 7
//! bound: 7
//! verified_by: brute-force
//! trace {
//!   (gadget 3 4 7 :size 7 :count 13)
//! }
//! witness {
//! poset 7
//! 0 1
//! ...
//! }
//! ```
//!
//! The witness block is the plain poset format. Serialization is canonical:
//! `parse(serialize(c)) == c` and re-serializing parsed output reproduces
//! the same bytes.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use thiserror::Error;

use crate::count::{count_brute, count_ideal_dp, CountError, ExtensionCount};
use crate::poset::{parse_poset, write_poset, Poset, PosetError};
use crate::synth::Strategy;
use crate::trace::{count_trace, realize, ConstructionTrace, TraceError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VerifiedBy {
    TraceFormula,
    IdealDp,
    BruteForce,
}

impl fmt::Display for VerifiedBy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerifiedBy::TraceFormula => "trace-formula",
            VerifiedBy::IdealDp => "ideal-dp",
            VerifiedBy::BruteForce => "brute-force",
        })
    }
}

impl FromStr for VerifiedBy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "trace-formula" => Ok(VerifiedBy::TraceFormula),
            "ideal-dp" => Ok(VerifiedBy::IdealDp),
            "brute-force" => Ok(VerifiedBy::BruteForce),
            _ => Err(format!("unknown verification method `{s}`")),
        }
    }
}

/// A witness poset for `n` together with the recipe that builds it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub n: u64,
    pub trace: Arc<ConstructionTrace>,
    pub witness: Poset,
    pub size: usize,
    pub bound: u64,
    pub strategy: Strategy,
    pub verified_by: VerifiedBy,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CertError {
    #[error("certificate line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("certificate witness: {0}")]
    Witness(#[from] PosetError),
    #[error("certificate trace: {0}")]
    Trace(#[from] TraceError),
    #[error("certificate recount: {0}")]
    Count(#[from] CountError),
    #[error("verification failed: {0}")]
    Rejected(String),
}

/// Independent recount applied by [`Certificate::verify`] on top of the
/// structural checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Recount {
    IdealDp,
    BruteForce,
    None,
}

impl Certificate {
    /// Checks the certificate against itself: the trace arithmetic must give
    /// `n`, every size field must agree, the size must respect the bound,
    /// the witness must be exactly the poset the trace builds, and the
    /// optional recount must give `n`.
    pub fn verify(&self, recount: Recount) -> Result<(), CertError> {
        let reject = |msg: String| Err(CertError::Rejected(msg));
        let target = ExtensionCount::from(self.n);
        let by_trace = count_trace(&self.trace)?;
        if by_trace != target {
            return reject(format!(
                "trace gives {by_trace} extensions, certificate claims {}",
                self.n
            ));
        }
        if self.trace.claimed_size != self.size {
            return reject(format!(
                "trace size {} differs from stated size {}",
                self.trace.claimed_size, self.size
            ));
        }
        if self.witness.size() != self.size {
            return reject(format!(
                "witness has {} elements, stated size is {}",
                self.witness.size(),
                self.size
            ));
        }
        if self.size as u64 > self.bound {
            return reject(format!("size {} exceeds bound {}", self.size, self.bound));
        }
        if realize(&self.trace)? != self.witness {
            return reject("witness is not the poset the trace builds".into());
        }
        let recounted = match recount {
            Recount::IdealDp => Some(count_ideal_dp(&self.witness)?),
            Recount::BruteForce => Some(count_brute(&self.witness)?),
            Recount::None => None,
        };
        if let Some(count) = recounted {
            if count != target {
                return reject(format!(
                    "witness recounts to {count}, certificate claims {}",
                    self.n
                ));
            }
        }
        Ok(())
    }

    pub fn serialize(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("n: {}\n", self.n));
        out.push_str(&format!("strategy: {}\n", self.strategy));
        out.push_str(&format!("size: {}\n", self.size));
        out.push_str(&format!("bound: {}\n", self.bound));
        out.push_str(&format!("verified_by: {}\n", self.verified_by));
        out.push_str("trace {\n  ");
        out.push_str(&self.trace.to_sexpr(2));
        out.push_str("\n}\nwitness {\n");
        out.push_str(&write_poset(&self.witness));
        out.push_str("}\n");
        out
    }

    pub fn parse(text: &str) -> Result<Self, CertError> {
        let syntax = |line: usize, message: String| CertError::Syntax { line, message };
        let mut n = None;
        let mut strategy = None;
        let mut size = None;
        let mut bound = None;
        let mut verified_by = None;
        let mut trace = None;
        let mut witness = None;

        let lines: Vec<&str> = text.lines().collect();
        let mut idx = 0;
        while idx < lines.len() {
            let line_no = idx + 1;
            let line = lines[idx].trim();
            idx += 1;
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            if line == "trace {" || line == "witness {" {
                let start = idx;
                while idx < lines.len() && lines[idx].trim() != "}" {
                    idx += 1;
                }
                if idx == lines.len() {
                    return Err(syntax(line_no, format!("unterminated `{line}` block")));
                }
                let body = lines[start..idx].join("\n");
                idx += 1;
                if line == "trace {" {
                    set_once(
                        &mut trace,
                        Arc::new(body.parse::<ConstructionTrace>()?),
                        line_no,
                        "trace",
                    )?;
                } else {
                    set_once(&mut witness, parse_poset(&body)?, line_no, "witness")?;
                }
                continue;
            }
            let (key, value) = line
                .split_once(':')
                .ok_or_else(|| syntax(line_no, format!("expected `key: value`, found `{line}`")))?;
            let value = value.trim();
            let bad = |what: &str| syntax(line_no, format!("invalid {what} `{value}`"));
            match key.trim() {
                "n" => set_once(
                    &mut n,
                    value.parse::<u64>().map_err(|_| bad("n"))?,
                    line_no,
                    "n",
                )?,
                "strategy" => set_once(
                    &mut strategy,
                    value.parse::<Strategy>().map_err(|_| bad("strategy"))?,
                    line_no,
                    "strategy",
                )?,
                "size" => set_once(
                    &mut size,
                    value.parse::<usize>().map_err(|_| bad("size"))?,
                    line_no,
                    "size",
                )?,
                "bound" => set_once(
                    &mut bound,
                    value.parse::<u64>().map_err(|_| bad("bound"))?,
                    line_no,
                    "bound",
                )?,
                "verified_by" => set_once(
                    &mut verified_by,
                    value
                        .parse::<VerifiedBy>()
                        .map_err(|_| bad("verification method"))?,
                    line_no,
                    "verified_by",
                )?,
                other => return Err(syntax(line_no, format!("unknown key `{other}`"))),
            }
        }
        let missing = |what: &str| syntax(lines.len(), format!("missing `{what}`"));
        Ok(Certificate {
            n: n.ok_or_else(|| missing("n"))?,
            strategy: strategy.ok_or_else(|| missing("strategy"))?,
            size: size.ok_or_else(|| missing("size"))?,
            bound: bound.ok_or_else(|| missing("bound"))?,
            verified_by: verified_by.ok_or_else(|| missing("verified_by"))?,
            trace: trace.ok_or_else(|| missing("trace"))?,
            witness: witness.ok_or_else(|| missing("witness"))?,
        })
    }
}

fn set_once<T>(slot: &mut Option<T>, value: T, line: usize, what: &str) -> Result<(), CertError> {
    if slot.is_some() {
        return Err(CertError::Syntax {
            line,
            message: format!("duplicate `{what}`"),
        });
    }
    *slot = Some(value);
    Ok(())
}
