//! `n × 1` lines from a base-`m`, `k`-digit counter that is cut into columns
//! by glue deactivation.
//!
//! The seed row (`SeedL`, then `Seed` tiles chained by position glues
//! `sd{j}`) holds the starting value `p` and is row 0 of the rectangle.
//! Every further row is built from the generic counter tile `D`:
//!
//! * a `D` tile binds on the north glue `n{u}{c}` of the tile below (old
//!   digit `u`, column class `c`) and links to its row neighbours with `w`;
//! * the east-most tile increments and sends a carry message `c{msg}{u}{c}`
//!   west; messages carry the *receiver's* digit, so a sender offers one
//!   glue per possible digit and the matching one binds;
//! * the west-most tile decides: either the row is the all-max value and an
//!   `x` signal travels east, or a `g{v}{c}` signal travels east exposing the
//!   new digits on the north faces;
//! * `x` starts the break-up: each tile of the top row switches off its row
//!   links and sends `dn` south, which repeats the same in every tile of its
//!   column. The columns separate into `1 × n` lines.
//!
//! The type count is 3 for every `n`; only glue inventories grow with `m`
//! and `k`.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::{Action, GlueState, Side, System, TileType};

/// Counter shape for a line of length `n`: `m^k - p = n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CounterParams {
    pub n: u64,
    pub k: u32,
    pub m: u64,
    pub p: u64,
}

impl CounterParams {
    /// Uses `k = max(2, round(ln n / (ln ln n - ln ln ln n)))`, and `k = 2`
    /// for `n < 16` where that formula degenerates.
    pub fn new(n: u64) -> Result<CounterParams> {
        let k = if n < 16 {
            2
        } else {
            let l = (n as f64).ln();
            let d = l.ln() - l.ln().ln();
            ((l / d).round() as u32).max(2)
        };
        CounterParams::with_digits(n, k)
    }

    pub fn with_digits(n: u64, k: u32) -> Result<CounterParams> {
        if n < 2 {
            return Err(StamError::InvalidParameter(format!("line length {n} < 2")));
        }
        if k < 2 {
            return Err(StamError::InvalidParameter(format!("digit count {k} < 2")));
        }
        let pow = |m: u64| m.checked_pow(k);
        let mut m = 2u64;
        while pow(m).is_some_and(|v| v < n) {
            m += 1;
        }
        let top =
            pow(m).ok_or_else(|| StamError::InvalidParameter(format!("{m}^{k} overflows")))?;
        Ok(CounterParams {
            n,
            k,
            m,
            p: top - n,
        })
    }

    /// Digits of `p`, most significant first.
    pub fn seed_digits(&self) -> Vec<u64> {
        let mut out = vec![0; self.k as usize];
        let mut x = self.p;
        for d in out.iter_mut().rev() {
            *d = x % self.m;
            x /= self.m;
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    L,
    M,
    R,
}

impl Class {
    fn tag(self) -> char {
        match self {
            Class::L => 'L',
            Class::M => 'M',
            Class::R => 'R',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Msg {
    Keep,
    Carry,
    Max,
}

impl Msg {
    const ALL: [Msg; 3] = [Msg::Keep, Msg::Carry, Msg::Max];
    fn tag(self) -> char {
        match self {
            Msg::Keep => '0',
            Msg::Carry => '1',
            Msg::Max => 'M',
        }
    }
}

fn n_glue(u: u64, c: Class) -> String {
    format!("n{u}{}", c.tag())
}

fn c_glue(msg: Msg, u: u64, c: Class) -> String {
    format!("c{}{u}{}", msg.tag(), c.tag())
}

fn g_glue(v: u64, c: Class) -> String {
    format!("g{v}{}", c.tag())
}

fn x_glue(c: Class) -> String {
    format!("x{}", c.tag())
}

fn sd(j: u32) -> String {
    format!("sd{j}")
}

struct Layout {
    m: u64,
    classes: Vec<Class>,
}

impl Layout {
    /// Classes that receive carries (everything but the east end).
    fn carried(&self) -> impl Iterator<Item = Class> + '_ {
        self.classes.iter().copied().filter(|&c| c != Class::R)
    }

    /// Classes that receive `g`/`x` (everything but the west end).
    fn signalled(&self) -> impl Iterator<Item = Class> + '_ {
        self.classes.iter().copied().filter(|&c| c != Class::L)
    }

    fn carry_broadcast(&self, msg: Msg, state: bool) -> Vec<Action> {
        let mut out = Vec::new();
        for c in self.carried() {
            for u in 0..self.m {
                out.push(switch(Side::W, c_glue(msg, u, c), state));
            }
        }
        out
    }

    fn go_broadcast(&self, state: bool) -> Vec<Action> {
        let mut out = Vec::new();
        for c in self.signalled() {
            for v in 0..self.m {
                out.push(switch(Side::E, g_glue(v, c), state));
            }
        }
        out
    }

    /// Break-up of a top-row tile; its north face is sealed for good.
    fn top_break(&self) -> Vec<Action> {
        let mut out = break_actions();
        for &c in &self.classes {
            for u in 0..self.m {
                out.push(Action::glue_off(Side::N, n_glue(u, c)));
            }
        }
        out
    }

    fn x_broadcast(&self, state: bool) -> Vec<Action> {
        self.signalled()
            .map(|c| switch(Side::E, x_glue(c), state))
            .collect()
    }
}

fn switch(side: Side, glue: String, on: bool) -> Action {
    if on {
        Action::glue_on(side, glue)
    } else {
        Action::glue_off(side, glue)
    }
}

fn class_of(j: u32, k: u32) -> Class {
    match j {
        0 => Class::L,
        j if j + 1 == k => Class::R,
        _ => Class::M,
    }
}

/// Row links off, `dn` sent south.
fn break_actions() -> Vec<Action> {
    vec![
        Action::glue_off(Side::E, "w"),
        Action::glue_off(Side::W, "w"),
        Action::glue_off(Side::N, "dn"),
        Action::glue_on(Side::S, "dn"),
    ]
}

fn counter_tile(l: &Layout) -> TileType {
    let m = l.m;
    let mut t = TileType::new("D")
        .glue(Side::S, "dn", GlueState::Latent)
        .glue(Side::N, "dn", GlueState::Latent)
        .glue(Side::E, "w", GlueState::Latent)
        .glue(Side::W, "w", GlueState::Latent);
    for &c in &l.classes {
        for u in 0..m {
            t = t.glue(Side::S, n_glue(u, c), GlueState::On).glue(
                Side::N,
                n_glue(u, c),
                GlueState::Latent,
            );
        }
    }
    for c in l.carried() {
        for msg in Msg::ALL {
            for u in 0..m {
                t = t.glue(Side::E, c_glue(msg, u, c), GlueState::Latent).glue(
                    Side::W,
                    c_glue(msg, u, c),
                    GlueState::Latent,
                );
            }
        }
    }
    for c in l.signalled() {
        for v in 0..m {
            t = t.glue(Side::E, g_glue(v, c), GlueState::Latent).glue(
                Side::W,
                g_glue(v, c),
                GlueState::Latent,
            );
        }
        t = t.glue(Side::E, x_glue(c), GlueState::Latent).glue(
            Side::W,
            x_glue(c),
            GlueState::Latent,
        );
    }

    // attachment on the digit below
    for &c in &l.classes {
        for u in 0..m {
            let mut acts = vec![Action::glue_on(Side::N, "dn")];
            // the unused south glues would otherwise stay live under the column
            for &c2 in &l.classes {
                for u2 in 0..m {
                    if (c2, u2) != (c, u) {
                        acts.push(Action::glue_off(Side::S, n_glue(u2, c2)));
                    }
                }
            }
            if c != Class::R {
                acts.push(Action::glue_on(Side::E, "w"));
            }
            if c != Class::L {
                acts.push(Action::glue_on(Side::W, "w"));
            }
            if c == Class::R {
                let v = (u + 1) % m;
                let msg = if u == m - 1 {
                    Msg::Carry
                } else if v == m - 1 {
                    Msg::Max
                } else {
                    Msg::Keep
                };
                acts.extend(l.carry_broadcast(msg, true));
                acts.push(Action::glue_on(Side::W, g_glue(v, c)));
                if msg == Msg::Max {
                    acts.push(Action::glue_on(Side::W, x_glue(c)));
                }
            } else {
                acts.extend(Msg::ALL.map(|msg| Action::glue_on(Side::E, c_glue(msg, u, c))));
            }
            t = t.on_bind(Side::S, n_glue(u, c), acts);
        }
    }

    // carries, receiver side
    for c in l.carried() {
        for u in 0..m {
            for msg in Msg::ALL {
                let mut acts: Vec<Action> = Msg::ALL
                    .map(|x| Action::glue_off(Side::E, c_glue(x, u, c)))
                    .to_vec();
                let carry_in = msg == Msg::Carry;
                let v = (u + carry_in as u64) % m;
                let carry_out = carry_in && u == m - 1;
                let all_max = msg == Msg::Max && u == m - 1;
                match c {
                    Class::M => {
                        let out = if carry_out {
                            Msg::Carry
                        } else if all_max {
                            Msg::Max
                        } else {
                            Msg::Keep
                        };
                        acts.extend(l.carry_broadcast(out, true));
                        acts.push(Action::glue_on(Side::W, g_glue(v, c)));
                        if all_max {
                            acts.push(Action::glue_on(Side::W, x_glue(c)));
                        }
                    }
                    // a carry out of the top digit cannot happen: the
                    // all-max row stops growth first
                    _ if all_max => acts.extend(l.x_broadcast(true)),
                    _ if !carry_out => {
                        acts.push(Action::glue_on(Side::N, n_glue(v, c)));
                        acts.extend(l.go_broadcast(true));
                    }
                    _ => {}
                }
                t = t.on_bind(Side::E, c_glue(msg, u, c), acts).on_bind(
                    Side::W,
                    c_glue(msg, u, c),
                    l.carry_broadcast(msg, false),
                );
            }
        }
    }

    // go and x, receiver and sender sides
    for c in l.signalled() {
        for v in 0..m {
            let mut acts = vec![Action::glue_off(Side::W, g_glue(v, c))];
            if v == m - 1 {
                acts.push(Action::glue_off(Side::W, x_glue(c)));
            }
            acts.push(Action::glue_on(Side::N, n_glue(v, c)));
            if c == Class::M {
                acts.extend(l.go_broadcast(true));
            }
            t = t.on_bind(Side::W, g_glue(v, c), acts).on_bind(
                Side::E,
                g_glue(v, c),
                l.go_broadcast(false),
            );
        }
        let mut acts = vec![
            Action::glue_off(Side::W, g_glue(m - 1, c)),
            Action::glue_off(Side::W, x_glue(c)),
        ];
        if c == Class::M {
            acts.extend(l.x_broadcast(true));
        } else {
            acts.extend(l.top_break());
        }
        let mut sent = l.x_broadcast(false);
        sent.extend(l.top_break());
        t = t
            .on_bind(Side::W, x_glue(c), acts)
            .on_bind(Side::E, x_glue(c), sent);
    }

    t.on_bind(Side::N, "dn", break_actions()).on_bind(
        Side::S,
        "dn",
        [Action::glue_off(Side::S, "dn")],
    )
}

fn seed_tiles(params: &CounterParams) -> [TileType; 2] {
    let k = params.k;
    let digits = params.seed_digits();
    let top = n_glue(digits[0], Class::L);
    let west = TileType::new("SeedL")
        .glue(Side::E, sd(1), GlueState::On)
        .glue(Side::N, top.clone(), GlueState::Latent)
        .glue(Side::N, "dn", GlueState::Latent)
        .on_bind(
            Side::E,
            sd(1),
            [
                Action::glue_on(Side::N, top),
                Action::glue_on(Side::N, "dn"),
            ],
        )
        .on_bind(
            Side::N,
            "dn",
            [
                Action::glue_off(Side::N, "dn"),
                Action::glue_off(Side::E, sd(1)),
            ],
        );

    let mut t = TileType::new("Seed").glue(Side::N, "dn", GlueState::Latent);
    for j in 1..k {
        t = t.glue(Side::W, sd(j), GlueState::On).ensure_glue(
            Side::N,
            &n_glue(digits[j as usize], class_of(j, k)),
            GlueState::Latent,
        );
        if j + 1 < k {
            t = t.glue(Side::E, sd(j + 1), GlueState::Latent);
        }
    }
    let mut dissolve = vec![Action::glue_off(Side::N, "dn")];
    for j in 1..k {
        let mut acts = vec![
            Action::glue_on(Side::N, n_glue(digits[j as usize], class_of(j, k))),
            Action::glue_on(Side::N, "dn"),
        ];
        if j + 1 < k {
            acts.push(Action::glue_on(Side::E, sd(j + 1)));
            dissolve.push(Action::glue_off(Side::E, sd(j + 1)));
        }
        acts.extend(
            (1..k)
                .filter(|&i| i != j)
                .map(|i| Action::glue_off(Side::W, sd(i))),
        );
        dissolve.push(Action::glue_off(Side::W, sd(j)));
        t = t.on_bind(Side::W, sd(j), acts);
    }
    [west, t.on_bind(Side::N, "dn", dissolve)]
}

/// Line of length `n` with the default digit count.
pub fn gen_line_counter(n: u64) -> Result<System> {
    gen_line_counter_with(CounterParams::new(n)?)
}

pub fn gen_line_counter_with(params: CounterParams) -> Result<System> {
    let classes = if params.k == 2 {
        vec![Class::L, Class::R]
    } else {
        vec![Class::L, Class::M, Class::R]
    };
    let layout = Layout {
        m: params.m,
        classes,
    };
    let [west, seed] = seed_tiles(&params);
    Ok(System::singletons(
        vec![west, seed, counter_tile(&layout)],
        1,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn params() {
        let p = CounterParams::new(3).unwrap();
        assert_eq!((p.k, p.m, p.p), (2, 2, 1));
        assert_eq!(p.seed_digits(), vec![0, 1]);
        let p = CounterParams::new(8).unwrap();
        assert_eq!((p.k, p.m, p.p), (2, 3, 1));
        let p = CounterParams::with_digits(100, 3).unwrap();
        assert_eq!((p.m, p.p), (5, 25));
        assert!(CounterParams::new(1).is_err());
    }
}
