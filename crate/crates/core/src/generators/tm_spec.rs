//! Turing machine descriptions.
//!
//! Text format, one rule per line (`#` starts a comment):
//!
//! ```text
//! start: q0
//! accept: qa
//! reject: qr
//! q0 1 -> q0 1 R
//! q0 _ -> qa 1 L
//! ```
//!
//! Tape symbols are `0`, `1` and `_` (blank). A missing rule for a
//! non-halting state halts the machine in the reject state.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};

pub const SYMBOLS: [char; 3] = ['0', '1', '_'];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Dir {
    L,
    R,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rule {
    pub next: String,
    pub write: char,
    pub dir: Dir,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TMSpec {
    pub start: String,
    pub accept: String,
    pub reject: String,
    pub delta: BTreeMap<(String, char), Rule>,
}

fn check_symbol(c: char) -> Result<char> {
    if SYMBOLS.contains(&c) {
        Ok(c)
    } else {
        Err(StamError::InvalidSymbol(c))
    }
}

fn check_state(s: &str) -> Result<String> {
    if s.is_empty() || s.contains([':', ',', '[', ']', '\'']) {
        return Err(StamError::Parse(format!("bad state name `{s}`")));
    }
    Ok(s.to_string())
}

impl TMSpec {
    pub fn new(start: &str, accept: &str, reject: &str) -> Result<TMSpec> {
        Ok(TMSpec {
            start: check_state(start)?,
            accept: check_state(accept)?,
            reject: check_state(reject)?,
            delta: BTreeMap::new(),
        })
    }

    /// Adds `(q, s) -> (r, t, dir)`.
    pub fn rule(mut self, q: &str, s: char, r: &str, t: char, dir: Dir) -> Result<TMSpec> {
        let key = (check_state(q)?, check_symbol(s)?);
        if self.is_halting(q) {
            return Err(StamError::Parse(format!("rule out of halting state {q}")));
        }
        let rule = Rule {
            next: check_state(r)?,
            write: check_symbol(t)?,
            dir,
        };
        if self.delta.insert(key, rule).is_some() {
            return Err(StamError::Parse(format!("duplicate rule for ({q}, {s})")));
        }
        Ok(self)
    }

    pub fn is_halting(&self, q: &str) -> bool {
        q == self.accept || q == self.reject
    }

    /// Rule for `(q, s)`; `None` means the machine halts there.
    pub fn step(&self, q: &str, s: char) -> Option<&Rule> {
        self.delta.get(&(q.to_string(), s))
    }

    /// State a machine halts in when reading `s` in `q` with no rule.
    pub fn halt_state<'a>(&'a self, q: &'a str) -> &'a str {
        if self.is_halting(q) {
            q
        } else {
            &self.reject
        }
    }

    /// States that can hold the head: the start state and every rule target.
    pub fn head_states(&self) -> BTreeSet<String> {
        let mut out: BTreeSet<String> = self.delta.values().map(|r| r.next.clone()).collect();
        out.insert(self.start.clone());
        out
    }

    pub fn parse(text: &str) -> Result<TMSpec> {
        let (mut start, mut accept, mut reject) = (None, None, None);
        let mut rules = Vec::new();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |m: &str| StamError::Parse(format!("line {}: {m}: `{raw}`", n + 1));
            if let Some((key, value)) = line.split_once(':') {
                let value = value.trim().to_string();
                match key.trim() {
                    "start" => start = Some(value),
                    "accept" => accept = Some(value),
                    "reject" => reject = Some(value),
                    _ => return Err(err("unknown header")),
                }
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| err("expected `->`"))?;
            let l: Vec<&str> = lhs.split_whitespace().collect();
            let r: Vec<&str> = rhs.split_whitespace().collect();
            if l.len() != 2 || r.len() != 3 {
                return Err(err("expected `state symbol -> state symbol L|R`"));
            }
            let sym = |s: &str| -> Result<char> {
                let mut cs = s.chars();
                match (cs.next(), cs.next()) {
                    (Some(c), None) => check_symbol(c),
                    _ => Err(err("symbols are single characters")),
                }
            };
            let dir = match r[2] {
                "L" => Dir::L,
                "R" => Dir::R,
                _ => return Err(err("direction must be L or R")),
            };
            rules.push((
                l[0].to_string(),
                sym(l[1])?,
                r[0].to_string(),
                sym(r[1])?,
                dir,
            ));
        }
        let missing = |h: &str| StamError::Parse(format!("missing `{h}:` header"));
        let mut spec = TMSpec::new(
            &start.ok_or_else(|| missing("start"))?,
            &accept.ok_or_else(|| missing("accept"))?,
            &reject.ok_or_else(|| missing("reject"))?,
        )?;
        for (q, s, r, t, d) in rules {
            spec = spec.rule(&q, s, &r, t, d)?;
        }
        Ok(spec)
    }

    /// Unary increment: walks right over the 1s and appends one more.
    pub fn unary_increment() -> TMSpec {
        TMSpec::new("q0", "qa", "qr")
            .and_then(|m| m.rule("q0", '1', "q0", '1', Dir::R))
            .and_then(|m| m.rule("q0", '_', "qa", '1', Dir::R))
            .and_then(|m| m.rule("q0", '0', "qr", '0', Dir::R))
            .expect("well-formed machine")
    }

    /// Accepts words with an even number of 1s; rewrites the tape to 0s.
    pub fn parity() -> TMSpec {
        TMSpec::new("e", "qa", "qr")
            .and_then(|m| m.rule("e", '0', "e", '0', Dir::R))
            .and_then(|m| m.rule("e", '1', "o", '0', Dir::R))
            .and_then(|m| m.rule("o", '0', "o", '0', Dir::R))
            .and_then(|m| m.rule("o", '1', "e", '0', Dir::R))
            .and_then(|m| m.rule("e", '_', "qa", '_', Dir::R))
            .and_then(|m| m.rule("o", '_', "qr", '_', Dir::R))
            .expect("well-formed machine")
    }

    /// Copies the first symbol into the first blank cell and steps back left.
    pub fn copier() -> TMSpec {
        let mut m = TMSpec::new("c", "qa", "qr").expect("names");
        let rules = [
            ("c", '0', "f0", '0', Dir::R),
            ("c", '1', "f1", '1', Dir::R),
            ("c", '_', "qa", '_', Dir::R),
            ("f0", '0', "f0", '0', Dir::R),
            ("f0", '1', "f0", '1', Dir::R),
            ("f0", '_', "qa", '0', Dir::L),
            ("f1", '0', "f1", '0', Dir::R),
            ("f1", '1', "f1", '1', Dir::R),
            ("f1", '_', "qa", '1', Dir::L),
        ];
        for (q, s, r, t, d) in rules {
            m = m.rule(q, s, r, t, d).expect("well-formed machine");
        }
        m
    }

    /// A one-state machine that runs right forever.
    pub fn runaway() -> TMSpec {
        let mut m = TMSpec::new("q", "qa", "qr").expect("names");
        for s in SYMBOLS {
            m = m.rule("q", s, "q", s, Dir::R).expect("well-formed machine");
        }
        m
    }
}

impl FromStr for TMSpec {
    type Err = StamError;
    fn from_str(s: &str) -> Result<TMSpec> {
        TMSpec::parse(s)
    }
}

impl fmt::Display for TMSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "start: {}", self.start)?;
        writeln!(f, "accept: {}", self.accept)?;
        writeln!(f, "reject: {}", self.reject)?;
        for ((q, s), r) in &self.delta {
            writeln!(f, "{q} {s} -> {} {} {:?}", r.next, r.write, r.dir)?;
        }
        Ok(())
    }
}
