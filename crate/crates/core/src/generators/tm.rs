//! Fuel-efficient Turing machine simulation at temperature 1.
//!
//! Layout: backbone tiles `B` on row 0, tape cells on row 1 (`0`, `1`, `_`,
//! the end marker `*`, and exactly one head cell `q:s`), head-protocol tiles
//! on row 2. A right move `(q,s) -> (r,t,R)` with head at column i runs:
//!
//! * H1 `H1[q,s]` lands on the head cell and invites `H2[r,t]` at i+1.
//! * H2 probes the cell below with `0'`, `1'`, `_'`, `*'`, then signals H1
//!   to release itself and the old head cell (junk of size 2), and invites
//!   `H3[r,t,u]` at i. Reading `*` instead recruits `*R`, which brings a new
//!   `*` and backbone at i+2 and answers on `**ok` once that backbone is
//!   bound to its west neighbour; only then does H2 carry on, treating the
//!   old `*` as a blank.
//! * H3 places the written cell `t` at i; once it is on the backbone H3
//!   tells H2 to release itself with the read cell (junk of size 2 or 3)
//!   and invites `H4[r,u]` at i+1.
//! * H4 places the head cell `r:u`; once bound it releases itself and H3
//!   (junk of size 2).
//!
//! Left moves mirror the head tiles with every glue prefixed `L-`. Every OFF
//! action targets a glue that is bound when the signal is sent, and only one
//! side of each bond is switched off. Free tiles expose a single entry glue
//! whose partner is only ever switched on inside the tape, so nothing
//! assembles away from it.

use std::collections::BTreeSet;

use crate::error::{Result, StamError};
use crate::model::{Action, Assembly, GlueState, Pos, Side, System, TileSet, TileType};

use super::tm_spec::{Dir, TMSpec, SYMBOLS};

pub const BACKBONE: &str = "B";
pub const END: &str = "*";
pub const EXTEND: &str = "*R";
pub const ACCEPT: &str = "ACCEPT";
pub const REJECT: &str = "REJECT";

/// Role of a tile type in a compiled machine, recovered from its name.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TmRole {
    Backbone,
    Cell(char),
    End,
    Head(String, char),
    Protocol,
    Accept,
    Reject,
}

pub fn tm_role(name: &str) -> TmRole {
    match name {
        BACKBONE => TmRole::Backbone,
        END => TmRole::End,
        "0" | "1" | "_" => TmRole::Cell(name.chars().next().expect("one char")),
        _ if name == ACCEPT => TmRole::Accept,
        _ if name.starts_with(REJECT) => TmRole::Reject,
        _ => match name.rsplit_once(':') {
            Some((q, s)) if s.len() == 1 && !name.contains('[') => {
                TmRole::Head(q.to_string(), s.chars().next().expect("one char"))
            }
            _ => TmRole::Protocol,
        },
    }
}

fn read(s: char) -> String {
    format!("{s}'")
}
fn entry(s: char) -> String {
    format!("{s}>")
}
fn head_name(q: &str, s: char) -> String {
    format!("{q}:{s}")
}
fn head_read(q: &str, s: char) -> String {
    format!("{q}:{s}'")
}
fn head_entry(q: &str, s: char) -> String {
    format!("{q}:{s}>")
}

const C: &str = "c";
const BB: &str = "bb";
const BIN: &str = "bin";
const OKB: &str = "okb";
const OK: &str = "ok";
const X: &str = "x";
const Y: &str = "y";
const STAR_IN: &str = "*>";
const STARSTAR: &str = "**";
const STAR_OK: &str = "**ok";

fn on(side: Side, g: impl Into<String>) -> Action {
    Action::glue_on(side, g)
}
fn off(side: Side, g: impl Into<String>) -> Action {
    Action::glue_off(side, g)
}

fn cell(t: char) -> TileType {
    TileType::new(t.to_string())
        .glue(Side::N, entry(t), GlueState::On)
        .glue(Side::N, read(t), GlueState::Latent)
        .glue(Side::N, Y, GlueState::Latent)
        .glue(Side::N, OK, GlueState::Latent)
        .glue(Side::S, C, GlueState::Latent)
        .on_bind(Side::N, entry(t), [on(Side::S, C)])
        .on_bind(
            Side::S,
            C,
            [on(Side::N, OK), on(Side::N, read(t)), on(Side::N, Y)],
        )
        .on_bind(Side::N, Y, [off(Side::S, C)])
}

fn head_cell(q: &str, s: char) -> TileType {
    TileType::new(head_name(q, s))
        .glue(Side::N, head_entry(q, s), GlueState::On)
        .glue(Side::N, head_read(q, s), GlueState::Latent)
        .glue(Side::N, OK, GlueState::Latent)
        .glue(Side::N, X, GlueState::Latent)
        .glue(Side::S, C, GlueState::Latent)
        .on_bind(Side::N, head_entry(q, s), [on(Side::S, C)])
        .on_bind(Side::S, C, [on(Side::N, OK), on(Side::N, X)])
        // the head is advertised only once H4 has been told the cell is in place
        .on_bind(Side::N, OK, [on(Side::N, head_read(q, s))])
        .on_bind(Side::N, X, [off(Side::S, C)])
}

fn end_cell() -> TileType {
    TileType::new(END)
        .glue(Side::N, STAR_IN, GlueState::On)
        .glue(Side::N, read('*'), GlueState::Latent)
        .glue(Side::N, Y, GlueState::Latent)
        .glue(Side::N, OK, GlueState::Latent)
        .glue(Side::S, BIN, GlueState::Latent)
        .glue(Side::S, OKB, GlueState::Latent)
        .on_bind(Side::N, STAR_IN, [on(Side::S, BIN), on(Side::S, OKB)])
        .on_bind(
            Side::S,
            OKB,
            [on(Side::N, OK), on(Side::N, read('*')), on(Side::N, Y)],
        )
        .on_bind(Side::N, Y, [off(Side::S, BIN), off(Side::S, OKB)])
}

fn backbone() -> TileType {
    TileType::new(BACKBONE)
        .glue(Side::N, BIN, GlueState::On)
        .glue(Side::N, C, GlueState::Latent)
        .glue(Side::N, OKB, GlueState::Latent)
        .glue(Side::W, BB, GlueState::Latent)
        .glue(Side::E, BB, GlueState::Latent)
        .on_bind(
            Side::N,
            BIN,
            [on(Side::W, BB), on(Side::E, BB), on(Side::N, C)],
        )
        .on_bind(Side::W, BB, [on(Side::N, OKB)])
}

fn extender() -> TileType {
    TileType::new(EXTEND)
        .glue(Side::W, STARSTAR, GlueState::On)
        .glue(Side::S, STAR_IN, GlueState::Latent)
        .glue(Side::S, OK, GlueState::Latent)
        .glue(Side::W, STAR_OK, GlueState::Latent)
        .on_bind(Side::W, STARSTAR, [on(Side::S, STAR_IN), on(Side::S, OK)])
        .on_bind(
            Side::S,
            OK,
            [
                off(Side::S, STAR_IN),
                off(Side::S, OK),
                on(Side::W, STAR_OK),
            ],
        )
}

fn halt_tile(name: &str, heads: &[(String, char)]) -> TileType {
    heads.iter().fold(TileType::new(name), |t, (q, s)| {
        t.glue(Side::S, head_read(q, *s), GlueState::On)
    })
}

/// (forward, backward) faces and glue prefix for a direction.
fn orient(d: Dir) -> (Side, Side, &'static str) {
    match d {
        Dir::R => (Side::E, Side::W, ""),
        Dir::L => (Side::W, Side::E, "L-"),
    }
}

fn h1(q: &str, s: char, r: &str, t: char, d: Dir) -> TileType {
    let (fwd, _, p) = orient(d);
    let call = format!("{p}C[{r},{t}]");
    let done = format!("{p}D");
    TileType::new(format!("H1[{q},{s}]"))
        .glue(Side::S, head_read(q, s), GlueState::On)
        .glue(Side::S, X, GlueState::Latent)
        .glue(fwd, call.clone(), GlueState::Latent)
        .glue(fwd, done.clone(), GlueState::Latent)
        .on_bind(
            Side::S,
            head_read(q, s),
            [on(fwd, call.clone()), on(fwd, done.clone())],
        )
        .on_bind(
            fwd,
            done.clone(),
            [off(fwd, call), off(fwd, done), on(Side::S, X)],
        )
}

fn h3_glue(p: &str, r: &str, t: char, u: char) -> String {
    format!("{p}T[{r},{t},{u}]")
}

fn h4_glue(p: &str, r: &str, u: char) -> String {
    format!("{p}F[{r},{u}]")
}

fn h2(r: &str, t: char, d: Dir) -> TileType {
    let (fwd, back, p) = orient(d);
    let call = format!("{p}C[{r},{t}]");
    let done = format!("{p}D");
    let go = format!("{p}go");
    let mut ty = TileType::new(format!("{p}H2[{r},{t}]"))
        .glue(back, call.clone(), GlueState::On)
        .glue(back, done.clone(), GlueState::Latent);
    for u in SYMBOLS {
        ty = ty.glue(back, h3_glue(p, r, t, u), GlueState::Latent);
    }
    ty = ty.glue(back, go.clone(), GlueState::Latent);
    // the end marker can only lie to the right
    let probes: Vec<char> = match d {
        Dir::R => vec!['0', '1', '_', '*'],
        Dir::L => vec!['0', '1', '_'],
    };
    for &u in &probes {
        ty = ty.glue(Side::S, read(u), GlueState::Latent);
    }
    ty = ty
        .glue(Side::S, Y, GlueState::Latent)
        .on_bind(
            back,
            call,
            probes
                .iter()
                .map(|&u| on(Side::S, read(u)))
                .collect::<Vec<_>>(),
        )
        .on_bind(back, go.clone(), {
            // the bound invitation and its never-raised siblings
            let mut a: Vec<Action> = SYMBOLS
                .iter()
                .map(|&u| off(back, h3_glue(p, r, t, u)))
                .collect();
            a.extend([off(back, go.clone()), on(Side::S, Y)]);
            a
        });
    for u in SYMBOLS {
        ty = ty.on_bind(
            Side::S,
            read(u),
            [
                on(back, done.clone()),
                on(back, h3_glue(p, r, t, u)),
                on(back, go.clone()),
            ],
        );
    }
    if d == Dir::R {
        // the old `*` may only leave once the new column is anchored
        ty = ty
            .glue(fwd, STARSTAR, GlueState::Latent)
            .glue(fwd, STAR_OK, GlueState::Latent)
            .on_bind(Side::S, read('*'), [on(fwd, STARSTAR), on(fwd, STAR_OK)])
            .on_bind(
                fwd,
                STAR_OK,
                [
                    on(back, done),
                    on(back, h3_glue(p, r, t, '_')),
                    on(back, go),
                ],
            );
    }
    ty
}

fn h3(r: &str, t: char, u: char, d: Dir) -> TileType {
    let (fwd, _, p) = orient(d);
    let bind = h3_glue(p, r, t, u);
    let go = format!("{p}go");
    let next = h4_glue(p, r, u);
    let done = format!("{p}done");
    TileType::new(format!("{p}H3[{r},{t},{u}]"))
        .glue(fwd, bind.clone(), GlueState::On)
        .glue(fwd, go.clone(), GlueState::Latent)
        .glue(fwd, next.clone(), GlueState::Latent)
        .glue(fwd, done.clone(), GlueState::Latent)
        .glue(Side::S, entry(t), GlueState::Latent)
        .glue(Side::S, OK, GlueState::Latent)
        .on_bind(
            fwd,
            bind.clone(),
            [
                on(Side::S, entry(t)),
                on(Side::S, OK),
                on(fwd, done.clone()),
            ],
        )
        .on_bind(Side::S, OK, [on(fwd, go), on(fwd, next)])
        .on_bind(fwd, done, [off(Side::S, entry(t)), off(Side::S, OK)])
}

fn h4(r: &str, u: char, d: Dir) -> TileType {
    let (_, back, p) = orient(d);
    let bind = h4_glue(p, r, u);
    let done = format!("{p}done");
    TileType::new(format!("{p}H4[{r},{u}]"))
        .glue(back, bind.clone(), GlueState::On)
        .glue(back, done.clone(), GlueState::Latent)
        .glue(Side::S, head_entry(r, u), GlueState::Latent)
        .glue(Side::S, OK, GlueState::Latent)
        .on_bind(back, bind, [on(Side::S, head_entry(r, u)), on(Side::S, OK)])
        .on_bind(
            Side::S,
            OK,
            [
                off(Side::S, head_entry(r, u)),
                off(Side::S, OK),
                on(back, done),
            ],
        )
}

/// All tile types for `m`, in a deterministic order.
fn tile_types(m: &TMSpec) -> Vec<TileType> {
    let mut types = vec![
        backbone(),
        cell('0'),
        cell('1'),
        cell('_'),
        end_cell(),
        extender(),
    ];
    let heads = m.head_states();
    for q in &heads {
        for s in SYMBOLS {
            types.push(head_cell(q, s));
        }
    }
    let mut h2s = BTreeSet::new();
    let mut h3s = BTreeSet::new();
    let mut h4s = BTreeSet::new();
    for ((q, s), rule) in &m.delta {
        if !heads.contains(q) {
            continue;
        }
        types.push(h1(q, *s, &rule.next, rule.write, rule.dir));
        h2s.insert((rule.next.clone(), rule.write, rule.dir));
        for u in SYMBOLS {
            h3s.insert((rule.next.clone(), rule.write, u, rule.dir));
            h4s.insert((rule.next.clone(), u, rule.dir));
        }
    }
    types.extend(h2s.iter().map(|(r, t, d)| h2(r, *t, *d)));
    types.extend(h3s.iter().map(|(r, t, u, d)| h3(r, *t, *u, *d)));
    types.extend(h4s.iter().map(|(r, u, d)| h4(r, *u, *d)));
    let on_halt = |q: &str| {
        SYMBOLS
            .iter()
            .map(|&s| (q.to_string(), s))
            .collect::<Vec<_>>()
    };
    types.push(halt_tile(ACCEPT, &on_halt(&m.accept)));
    types.push(halt_tile(REJECT, &on_halt(&m.reject)));
    // missing rules halt in the reject state
    for q in heads.iter().filter(|q| !m.is_halting(q)) {
        let stuck: Vec<(String, char)> = SYMBOLS
            .iter()
            .filter(|&&s| m.step(q, s).is_none())
            .map(|&s| (q.clone(), s))
            .collect();
        if !stuck.is_empty() {
            types.push(halt_tile(&format!("{REJECT}[{q}]"), &stuck));
        }
    }
    types
}

fn set(ts: &TileSet, tile: &mut crate::model::Tile, side: Side, glue: &str) {
    let slot = ts
        .glue_id(glue)
        .and_then(|g| ts.compiled(tile.kind).find(side, g))
        .expect("seed glue exists");
    tile.glues[slot as usize] = GlueState::On;
}

/// Tape contents used for input `w` (an empty input is one blank cell).
pub fn initial_tape(w: &str) -> String {
    if w.is_empty() {
        "_".to_string()
    } else {
        w.to_string()
    }
}

/// The seed: backbone row, tape cells with the head on cell 0, and `*`.
fn seed(ts: &TileSet, m: &TMSpec, tape: &str) -> Assembly {
    let mut a = Assembly::new();
    let n = tape.chars().count() as i32;
    let id = |name: &str| ts.id(name).expect("seed tile type");
    for i in 0..=n {
        let mut b = ts.instantiate(id(BACKBONE));
        set(ts, &mut b, Side::N, C);
        set(ts, &mut b, Side::E, BB);
        if i > 0 {
            set(ts, &mut b, Side::W, BB);
        }
        if i == n {
            set(ts, &mut b, Side::N, OKB);
        }
        a.insert(Pos::new(i, 0), b);
    }
    for (i, s) in tape.chars().enumerate() {
        let p = Pos::new(i as i32, 1);
        let t = if i == 0 {
            let mut t = ts.instantiate(id(&head_name(&m.start, s)));
            for g in [head_read(&m.start, s), OK.to_string(), X.to_string()] {
                set(ts, &mut t, Side::N, &g);
            }
            t
        } else {
            let mut t = ts.instantiate(id(&s.to_string()));
            for g in [read(s), OK.to_string(), Y.to_string()] {
                set(ts, &mut t, Side::N, &g);
            }
            t
        };
        let mut t = t;
        set(ts, &mut t, Side::S, C);
        a.insert(p, t);
    }
    let mut e = ts.instantiate(id(END));
    for g in [read('*'), OK.to_string(), Y.to_string()] {
        set(ts, &mut e, Side::N, &g);
    }
    set(ts, &mut e, Side::S, BIN);
    set(ts, &mut e, Side::S, OKB);
    a.insert(Pos::new(n, 1), e);
    a
}

/// Compiles `m` running on `w` into a temperature-1 system whose initial set
/// is every tile type in unbounded supply plus one seed supertile of
/// `2|w| + 2` tiles (the last initial assembly, present once).
pub fn compile_tm(m: &TMSpec, w: &str) -> Result<System> {
    if let Some(c) = w.chars().find(|c| *c != '0' && *c != '1') {
        return Err(StamError::InvalidSymbol(c));
    }
    let mut system = System::singletons(tile_types(m), 1);
    let tape = initial_tape(w);
    let s = seed(&system.tileset, m, &tape);
    system.initial.push(s);
    system.seeds = vec![system.initial.len() - 1];
    Ok(system)
}

/// Index of the seed in `system.initial`.
pub fn tm_seed_index(system: &System) -> Option<usize> {
    system.seeds.first().copied()
}
