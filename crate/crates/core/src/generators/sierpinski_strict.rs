//! Strict self-assembly of the Sierpinski triangle at scale 2, temperature 1.
//!
//! Every point becomes a 2×2 block filled SW → NW → NE → SE. The SW tile
//! (`SW0`/`SW1`) attaches on the north output of the block below, so its
//! type carries the south bit; it then raises both west candidates and the
//! one that binds fixes the block value `south xor west`. NW publishes the
//! value north, SE publishes it east.
//!
//! Every input bond goes through a handshake: once the reader binds, both
//! sides raise `hd`, and on the `hd` bond both drop the value glue, so the
//! bond is carried by `hd` alone and a supply tile can never bind there
//! again. A reader that must cut a bond raises `kl`; the writer has `kl` on
//! since the handshake and, on the `kl` bond, both sides drop `hd` and `kl`.
//! Either way the bond vanishes with nothing left on on either face.
//!
//! Black readers cut their white writers as soon as they compute. A white
//! block waits for a cut on its north face (NW) and on its east face (SE),
//! joins the two through `k1`/`k2`, then `k3`/`k4` tell SW, which cuts both
//! of its input bonds. Each white block therefore leaves as an inert 2×2
//! piece, and only after both of its readers have consumed its outputs.
//!
//! Axis blocks: the corner `S`, `XB`/`XA` along y = 0 and `YB`/`YA` along
//! x = 0, completed with `NW1`, `NE1` and `SE1`.

use crate::model::{Action, GlueState, Side, System, TileType};

const HD: &str = "hd";
const KL: &str = "kl";

fn v(b: u8) -> String {
    format!("v{b}")
}

fn h(b: u8) -> String {
    format!("h{b}")
}

fn fill(pos: &str, b: u8) -> String {
    format!("b{pos}{b}")
}

/// Writer side of an output face: handshake and cut.
fn writer_face(t: TileType, side: Side, out: String, on_cut: Vec<Action>) -> TileType {
    let mut cut = vec![Action::glue_off(side, HD), Action::glue_off(side, KL)];
    cut.extend(on_cut);
    t.glue(side, &out, GlueState::Latent)
        .glue(side, HD, GlueState::Latent)
        .glue(side, KL, GlueState::Latent)
        .on_bind(side, &out, [Action::glue_on(side, HD)])
        .on_bind(
            side,
            HD,
            [Action::glue_off(side, &out), Action::glue_on(side, KL)],
        )
        .on_bind(side, KL, cut)
}

fn sw(s: u8) -> TileType {
    let mut t = TileType::new(format!("SW{s}"))
        .glue(Side::S, v(s), GlueState::On)
        .glue(Side::S, HD, GlueState::Latent)
        .glue(Side::S, KL, GlueState::Latent)
        .glue(Side::W, h(0), GlueState::Latent)
        .glue(Side::W, h(1), GlueState::Latent)
        .glue(Side::W, HD, GlueState::Latent)
        .glue(Side::W, KL, GlueState::Latent)
        .glue(Side::N, fill("N", 0), GlueState::Latent)
        .glue(Side::N, fill("N", 1), GlueState::Latent)
        .glue(Side::N, "k4", GlueState::Latent)
        .on_bind(
            Side::S,
            v(s),
            [
                Action::glue_on(Side::S, HD),
                Action::glue_on(Side::W, h(0)),
                Action::glue_on(Side::W, h(1)),
            ],
        )
        .on_bind(Side::S, HD, [Action::glue_off(Side::S, v(s))])
        .on_bind(
            Side::W,
            HD,
            [
                Action::glue_off(Side::W, h(0)),
                Action::glue_off(Side::W, h(1)),
            ],
        )
        .on_bind(
            Side::N,
            "k4",
            [Action::glue_on(Side::S, KL), Action::glue_on(Side::W, KL)],
        )
        .on_bind(
            Side::S,
            KL,
            [Action::glue_off(Side::S, HD), Action::glue_off(Side::S, KL)],
        )
        .on_bind(
            Side::W,
            KL,
            [Action::glue_off(Side::W, HD), Action::glue_off(Side::W, KL)],
        );
    for w in 0..2u8 {
        let out = s ^ w;
        let mut acts = vec![
            Action::glue_on(Side::W, HD),
            Action::glue_on(Side::N, fill("N", out)),
        ];
        if out == 1 {
            // black: cut whichever writer is white
            if s == 0 {
                acts.push(Action::glue_on(Side::S, KL));
            }
            if w == 0 {
                acts.push(Action::glue_on(Side::W, KL));
            }
        } else {
            acts.push(Action::glue_on(Side::N, "k4"));
        }
        t = t.on_bind(Side::W, h(w), acts);
    }
    t
}

fn nw(b: u8) -> TileType {
    let t = TileType::new(format!("NW{b}"))
        .glue(Side::S, fill("N", b), GlueState::On)
        .glue(Side::E, fill("E", b), GlueState::Latent)
        .on_bind(
            Side::S,
            fill("N", b),
            [
                Action::glue_on(Side::N, v(b)),
                Action::glue_on(Side::E, fill("E", b)),
            ],
        );
    if b == 1 {
        return writer_face(t, Side::N, v(1), vec![]);
    }
    writer_face(
        t.glue(Side::E, "k1", GlueState::Latent)
            .glue(Side::E, "k3", GlueState::Latent)
            .glue(Side::S, "k4", GlueState::Latent)
            .on_bind(Side::E, "k3", [Action::glue_on(Side::S, "k4")]),
        Side::N,
        v(0),
        vec![
            Action::glue_on(Side::E, "k1"),
            Action::glue_on(Side::E, "k3"),
        ],
    )
}

fn ne(b: u8) -> TileType {
    let t = TileType::new(format!("NE{b}"))
        .glue(Side::W, fill("E", b), GlueState::On)
        .glue(Side::S, fill("S", b), GlueState::Latent);
    if b == 1 {
        return t.on_bind(
            Side::W,
            fill("E", 1),
            [Action::glue_on(Side::S, fill("S", 1))],
        );
    }
    t.glue(Side::W, "k1", GlueState::Latent)
        .glue(Side::W, "k3", GlueState::Latent)
        .glue(Side::S, "k2", GlueState::Latent)
        .on_bind(
            Side::W,
            fill("E", 0),
            [
                Action::glue_on(Side::S, fill("S", 0)),
                Action::glue_on(Side::W, "k1"),
            ],
        )
        .on_bind(Side::W, "k1", [Action::glue_on(Side::S, "k2")])
        .on_bind(Side::S, "k2", [Action::glue_on(Side::W, "k3")])
}

fn se(b: u8) -> TileType {
    let t = TileType::new(format!("SE{b}"))
        .glue(Side::N, fill("S", b), GlueState::On)
        .on_bind(Side::N, fill("S", b), [Action::glue_on(Side::E, h(b))]);
    if b == 1 {
        return writer_face(t, Side::E, h(1), vec![]);
    }
    writer_face(
        t.glue(Side::N, "k2", GlueState::Latent),
        Side::E,
        h(0),
        vec![Action::glue_on(Side::N, "k2")],
    )
}

/// Names of the tile types whose tiles belong to white blocks.
pub const WHITE_TYPES: [&str; 3] = ["NW0", "NE0", "SE0"];

/// The 13-type system; the corner `S` is the single seed.
pub fn gen_sierpinski_strict() -> System {
    let s = TileType::new("S")
        .glue(Side::E, "ax", GlueState::On)
        .glue(Side::N, "ay2", GlueState::Latent)
        .on_bind(Side::E, "ax", [Action::glue_on(Side::N, "ay2")]);
    // XB sits at (2x+1, 0), XA at (2x, 0); XA raises the block's NW only
    // once XB is in place, so NE1 can never seat an SE1 under itself.
    let xb = TileType::new("XB")
        .glue(Side::W, "ax", GlueState::On)
        .glue(Side::E, "ax2", GlueState::Latent)
        .on_bind(Side::W, "ax", [Action::glue_on(Side::E, "ax2")]);
    let xa = TileType::new("XA")
        .glue(Side::W, "ax2", GlueState::On)
        .glue(Side::E, "ax", GlueState::Latent)
        .glue(Side::N, fill("N", 1), GlueState::Latent)
        .on_bind(Side::W, "ax2", [Action::glue_on(Side::E, "ax")])
        .on_bind(Side::E, "ax", [Action::glue_on(Side::N, fill("N", 1))]);
    // YB sits at (0, 2y+1), YA at (0, 2y).
    let yb = TileType::new("YB")
        .glue(Side::S, "ay2", GlueState::On)
        .glue(Side::N, "ay", GlueState::Latent)
        .glue(Side::E, fill("E", 1), GlueState::Latent)
        .on_bind(
            Side::S,
            "ay2",
            [
                Action::glue_on(Side::N, "ay"),
                Action::glue_on(Side::E, fill("E", 1)),
            ],
        );
    let ya = TileType::new("YA")
        .glue(Side::S, "ay", GlueState::On)
        .glue(Side::N, "ay2", GlueState::Latent)
        .on_bind(Side::S, "ay", [Action::glue_on(Side::N, "ay2")]);
    let types = vec![
        s,
        xb,
        xa,
        yb,
        ya,
        sw(0),
        sw(1),
        nw(0),
        nw(1),
        ne(0),
        ne(1),
        se(0),
        se(1),
    ];
    let mut sys = System::singletons(types, 1);
    sys.seeds = vec![0];
    sys
}
