//! Weak self-assembly of the Sierpinski triangle at temperature 1 without
//! deactivation.
//!
//! Interior tiles compute `west xor south`. Each binds its west input first
//! (the type, `I0` or `I1`, fixes that bit), then switches on both candidate
//! south-input glues `v{c}_{w}`; whichever binds raises the outputs and one
//! of the labels `black`/`white`. South inputs are tagged with the receiving
//! tile's west bit, so every north face offers its value under both tags.
//! Axis tiles only expose outputs once they are attached, which keeps all
//! growth anchored to the single corner tile `S`.

use crate::model::{Action, GlueState, Side, Switch, System, TileType};

pub const BLACK: &str = "black";
pub const WHITE: &str = "white";

fn v(c: u8, w: u8) -> String {
    format!("v{c}_{w}")
}

fn h(c: u8) -> String {
    format!("h{c}")
}

fn north_outputs(t: TileType) -> TileType {
    let mut t = t;
    for c in 0..2 {
        for w in 0..2 {
            t = t.glue(Side::N, v(c, w), GlueState::Latent);
        }
    }
    t
}

/// Actions raising value `c` on the east and north outputs.
fn emit(c: u8) -> Vec<Action> {
    vec![
        Action::glue_on(Side::E, h(c)),
        Action::glue_on(Side::N, v(c, 0)),
        Action::glue_on(Side::N, v(c, 1)),
    ]
}

fn interior(w: u8) -> TileType {
    let mut t = TileType::new(format!("I{w}"))
        .glue(Side::W, h(w), GlueState::On)
        .glue(Side::S, v(0, w), GlueState::Latent)
        .glue(Side::S, v(1, w), GlueState::Latent)
        .glue(Side::E, h(0), GlueState::Latent)
        .glue(Side::E, h(1), GlueState::Latent);
    t = north_outputs(t)
        .label(BLACK, GlueState::Latent)
        .label(WHITE, GlueState::Latent)
        .on_bind(
            Side::W,
            h(w),
            [
                Action::glue_on(Side::S, v(0, w)),
                Action::glue_on(Side::S, v(1, w)),
            ],
        );
    for c in 0..2u8 {
        let out = w ^ c;
        let mut acts = emit(out);
        acts.push(Action::label(
            if out == 1 { BLACK } else { WHITE },
            Switch::On,
        ));
        t = t.on_bind(Side::S, v(c, w), acts);
    }
    t
}

/// Corner `S`, axis tiles `H` (x-axis) and `V` (y-axis), interior `I0`, `I1`.
pub fn gen_sierpinski_weak() -> System {
    let s = TileType::new("S")
        .glue(Side::E, "ax", GlueState::On)
        .glue(Side::N, "ay", GlueState::On)
        .label(BLACK, GlueState::On);
    let hx = north_outputs(TileType::new("H").glue(Side::W, "ax", GlueState::On).glue(
        Side::E,
        "ax",
        GlueState::Latent,
    ))
    .label(BLACK, GlueState::On)
    .on_bind(
        Side::W,
        "ax",
        [
            Action::glue_on(Side::E, "ax"),
            Action::glue_on(Side::N, v(1, 0)),
            Action::glue_on(Side::N, v(1, 1)),
        ],
    );
    let vy = TileType::new("V")
        .glue(Side::S, "ay", GlueState::On)
        .glue(Side::N, "ay", GlueState::Latent)
        .glue(Side::E, h(1), GlueState::Latent)
        .label(BLACK, GlueState::On)
        .on_bind(
            Side::S,
            "ay",
            [
                Action::glue_on(Side::N, "ay"),
                Action::glue_on(Side::E, h(1)),
            ],
        );
    let mut sys = System::singletons(vec![s, hx, vy, interior(0), interior(1)], 1);
    // one corner tile: every triangle in the run shares it
    sys.seeds = vec![0];
    sys
}
