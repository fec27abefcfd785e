//! Deactivation-free n×1 lines from four tile types by recursive doubling,
//! with a summation scheme joining power-of-two segments for arbitrary n.
//!
//! Supertile classes at level j have width 2^j: `a_j`/`b_j` expose class
//! glues on their east end, `x_j`/`y_j` on their west end. Combinations:
//! `a+x→a`, `b+x→b` (signal propagates east), `a+y→y`, `b+y→x` (west).
//! All four tile types carry the same glues and transition function and
//! differ only in which glues start ON. Signal receivers start latent and
//! are switched on once their face has bound, so exposed signal glues are
//! inert.

use std::collections::BTreeSet;

use crate::error::{Result, StamError};
use crate::model::{Action, GlueState, Side, System, TileType};

const A: usize = 0;
const B: usize = 1;
const X: usize = 2;
const Y: usize = 3;
const CLASS: [&str; 4] = ["a", "b", "x", "y"];

/// (left class, right class, glue prefix, result class, signal prefix, east-going)
const RULES: [(usize, usize, &str, usize, &str, bool); 4] = [
    (A, X, "ax", A, "Ra", true),
    (B, X, "bx", B, "Rb", true),
    (A, Y, "ay", Y, "Ly", false),
    (B, Y, "by", X, "Lx", false),
];

struct Plan {
    k: usize,
    /// exponents of n's binary expansion, ascending
    bits: Vec<usize>,
    /// needed[j][class]
    needed: Vec<[bool; 4]>,
}

impl Plan {
    fn new(n: u64) -> Plan {
        let k = 63 - n.leading_zeros() as usize;
        let bits: Vec<usize> = (0..=k).filter(|j| n >> j & 1 == 1).collect();
        let mut needed = vec![[false; 4]; k + 1];
        needed[bits[0]][A] = true;
        for &j in &bits[1..] {
            needed[j][X] = true;
        }
        for j in (1..=k).rev() {
            for (l, r, _, res, _, _) in RULES {
                if needed[j][res] {
                    needed[j - 1][l] = true;
                    needed[j - 1][r] = true;
                }
            }
        }
        Plan { k, bits, needed }
    }

    fn sums(&self) -> usize {
        self.bits.len()
    }

    /// Whether the level-j glue of `rule` is ever switched on.
    fn rule_active(&self, j: usize, rule: usize) -> bool {
        j < self.k && self.needed[j + 1][RULES[rule].3]
    }

    /// Glues exposed by a completed class at level j (the face is implied by the class).
    fn exposes(&self, class: usize, j: usize) -> Vec<String> {
        let mut out = Vec::new();
        for (r, (l, rt, g, _, _, _)) in RULES.iter().enumerate() {
            if (*l == class || *rt == class) && self.rule_active(j, r) {
                out.push(format!("{g}{j}"));
            }
        }
        let m = self.sums();
        if class == A && j == self.bits[0] && m > 1 {
            out.push("s1".to_string());
        }
        if class == X {
            for (i, &b) in self.bits.iter().enumerate().skip(1) {
                if b == j {
                    out.push(format!("s{i}"));
                }
            }
        }
        out
    }
}

impl Plan {
    /// Signal glues that can travel through bonds inside a class-`c` piece of
    /// width 2^l: those of every later join in which the piece, or a piece
    /// enclosing it, is the propagating side.
    fn crossing(
        &self,
        c: usize,
        l: usize,
        memo: &mut Vec<[Option<BTreeSet<String>>; 4]>,
    ) -> BTreeSet<String> {
        if let Some(s) = &memo[l][c] {
            return s.clone();
        }
        let mut out = BTreeSet::new();
        for (r, &(left, right, _, res, sig, east)) in RULES.iter().enumerate() {
            if (left != c && right != c) || !self.rule_active(l, r) {
                continue;
            }
            let carrier = if east { right } else { left };
            if carrier == c && !self.exposes(res, l + 1).is_empty() {
                out.insert(format!("{sig}{l}"));
            }
            out.extend(self.crossing(res, l + 1, memo));
        }
        if c == X {
            let m = self.sums();
            for (i, &b) in self.bits.iter().enumerate().skip(1) {
                if b == l && i + 1 < m {
                    out.insert(format!("Rs{i}"));
                }
            }
        }
        memo[l][c] = Some(out.clone());
        out
    }
}

/// Tile type at the east (or west) end of a class-`c` piece of width 2^l.
fn end_type(c: usize, l: usize, east: bool) -> usize {
    if l == 0 {
        return c;
    }
    match (c, east) {
        (A | B, true) => end_type(X, l - 1, true),
        (X | Y, true) => end_type(Y, l - 1, true),
        (A | Y, false) => end_type(A, l - 1, false),
        (B | X, false) => end_type(B, l - 1, false),
        _ => unreachable!(),
    }
}

fn face(class: usize) -> Side {
    if class == A || class == B {
        Side::E
    } else {
        Side::W
    }
}

/// Builds the four tile types for an n×1 line.
fn build(n: u64) -> Vec<TileType> {
    let plan = Plan::new(n);
    let m = plan.sums();
    let mut memo = vec![Default::default(); plan.k + 2];
    // (bind glue, signal glue or None, targets, east-going, signals crossing
    // the new bond, type of the tile that ends up holding the targets)
    let mut joins: Vec<(
        String,
        Option<String>,
        Vec<String>,
        bool,
        BTreeSet<String>,
        usize,
    )> = Vec::new();
    for j in 0..plan.k {
        for (r, &(_, _, g, res, sig, east)) in RULES.iter().enumerate() {
            if !plan.rule_active(j, r) {
                continue;
            }
            let targets = plan.exposes(res, j + 1);
            let sig = (!targets.is_empty()).then(|| format!("{sig}{j}"));
            let crossing = plan.crossing(res, j + 1, &mut memo);
            let end = end_type(res, j + 1, east);
            joins.push((format!("{g}{j}"), sig, targets, east, crossing, end));
        }
    }
    // summation: accumulator i joins the next segment via s_i
    for i in 1..m {
        let targets: Vec<String> = if i + 1 < m {
            vec![format!("s{}", i + 1)]
        } else {
            Vec::new()
        };
        let sig = (!targets.is_empty()).then(|| format!("Rs{i}"));
        let end = end_type(X, plan.bits[i], true);
        joins.push((format!("s{i}"), sig, targets, true, BTreeSet::new(), end));
    }

    let mut all_glues: BTreeSet<String> = BTreeSet::new();
    for (g, sig, targets, ..) in &joins {
        all_glues.insert(g.clone());
        all_glues.extend(targets.iter().cloned());
        all_glues.extend(sig.iter().cloned());
    }
    let east_going: BTreeSet<String> = joins
        .iter()
        .filter(|j| j.3)
        .filter_map(|j| j.1.clone())
        .collect();
    // A new bond arms receivers only for signals that may later cross it, so
    // signal glues left ON at the ends of the joined pieces stay unbound.
    let receivers = |crossing: &BTreeSet<String>, east: bool, side: Side| -> Vec<Action> {
        crossing
            .iter()
            .filter(|s| east_going.contains(*s) == east)
            .map(|s| Action::glue_on(side, s.clone()))
            .collect()
    };

    let mut types = Vec::new();
    for class in [A, B, X, Y] {
        let initially_on: BTreeSet<String> = plan.exposes(class, 0).into_iter().collect();
        let mut t = TileType::new(format!("{}0", CLASS[class]));
        for side in [Side::E, Side::W] {
            for g in &all_glues {
                let on = side == face(class) && initially_on.contains(g);
                t = t.glue(
                    side,
                    g.clone(),
                    if on { GlueState::On } else { GlueState::Latent },
                );
            }
        }
        for (g, sig, targets, east, crossing, end) in &joins {
            let (recv, send) = if *east {
                (Side::W, Side::E)
            } else {
                (Side::E, Side::W)
            };
            let mut forward: Vec<Action> = Vec::new();
            if let Some(s) = sig {
                forward.push(Action::glue_on(send, s.clone()));
            }
            // only the type found at the far end of the new piece raises its class glues
            if *end == class {
                forward.extend(targets.iter().map(|x| Action::glue_on(send, x.clone())));
            }
            // binding on a face arms that face's receivers
            let mut start = forward.clone();
            if recv == Side::W {
                start.extend(receivers(crossing, true, Side::W));
            } else {
                start.extend(receivers(crossing, false, Side::E));
            }
            t = t.on_bind(recv, g.clone(), start);
            let arm = if send == Side::W {
                receivers(crossing, true, Side::W)
            } else {
                receivers(crossing, false, Side::E)
            };
            if !arm.is_empty() {
                t = t.on_bind(send, g.clone(), arm);
            }
            if let Some(s) = sig {
                t = t.on_bind(recv, s.clone(), forward);
            }
        }
        types.push(t);
    }
    types
}

/// Four tile types that uniquely assemble a 2^k × 1 line at temperature 1.
pub fn gen_line_pow2(k: u32) -> Result<System> {
    if k < 1 || k > 62 {
        return Err(StamError::InvalidParameter(format!(
            "line exponent must be in 1..=62, got {k}"
        )));
    }
    Ok(System::singletons(build(1u64 << k), 1))
}

/// Four tile types that uniquely assemble an n × 1 line at temperature 1.
pub fn gen_line(n: u64) -> Result<System> {
    if n == 0 {
        return Err(StamError::InvalidParameter(
            "line length must be positive".into(),
        ));
    }
    Ok(System::singletons(build(n), 1))
}

/// Largest number of glues on any single tile (all faces).
pub fn glues_per_tile(system: &System) -> usize {
    system
        .tileset
        .types()
        .iter()
        .map(|t| t.glues.iter().map(Vec::len).sum::<usize>())
        .max()
        .unwrap_or(0)
}
