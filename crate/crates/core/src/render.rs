//! SVG snapshots: one unit square per tile, the tile's name and ON labels as
//! text, and a tick per glue on each face (ON black, LATENT grey, OFF omitted).

use std::fmt::Write;

use crate::model::{Assembly, GlueState, Side, TileSet};

const CELL: f64 = 40.0;
const MARGIN: f64 = 10.0;

/// Fill colour hint from labels: `black`/`white` labels paint the square.
fn fill(ts: &TileSet, a: &crate::model::Tile) -> &'static str {
    match (a.label_state(ts, "black"), a.label_state(ts, "white")) {
        (Some(GlueState::On), _) => "#444444",
        (_, Some(GlueState::On)) => "#ffffff",
        _ => "#f3f0e0",
    }
}

pub fn render_svg(ts: &TileSet, a: &Assembly) -> String {
    let Some((lo, hi)) = a.bounds() else {
        return r#"<svg xmlns="http://www.w3.org/2000/svg" width="0" height="0"/>"#.to_string();
    };
    let w = (hi.x - lo.x + 1) as f64 * CELL + 2.0 * MARGIN;
    let h = (hi.y - lo.y + 1) as f64 * CELL + 2.0 * MARGIN;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"#
    );
    for (p, t) in &a.tiles {
        // y grows upward on the lattice, downward in SVG
        let x0 = MARGIN + (p.x - lo.x) as f64 * CELL;
        let y0 = MARGIN + (hi.y - p.y) as f64 * CELL;
        let _ = writeln!(
            s,
            r#"<rect x="{x0}" y="{y0}" width="{CELL}" height="{CELL}" fill="{}" stroke="gray" stroke-width="1"/>"#,
            fill(ts, t)
        );
        let name = &ts.tile_type(t.kind).name;
        let text_fill = if fill(ts, t) == "#444444" {
            "#fff"
        } else {
            "#000"
        };
        let _ = writeln!(
            s,
            r#"<text x="{}" y="{}" font-size="9" text-anchor="middle" fill="{text_fill}">{}</text>"#,
            x0 + CELL / 2.0,
            y0 + CELL / 2.0 + 3.0,
            escape(name)
        );
        let c = ts.compiled(t.kind);
        let on: Vec<&str> = (0..t.labels.len())
            .filter(|&i| t.labels[i] == GlueState::On)
            .map(|i| c.label_names[i].as_str())
            .collect();
        if !on.is_empty() {
            let _ = writeln!(
                s,
                r#"<text x="{}" y="{}" font-size="7" text-anchor="middle" fill="{text_fill}">{}</text>"#,
                x0 + CELL / 2.0,
                y0 + CELL / 2.0 + 13.0,
                escape(&on.join(","))
            );
        }
        for side in Side::ALL {
            let slots = &c.by_side[side.index()];
            let n = slots.len();
            for (k, &slot) in slots.iter().enumerate() {
                let colour = match t.glues[slot as usize] {
                    GlueState::On => "#000",
                    GlueState::Latent => "#bbb",
                    GlueState::Off => continue,
                };
                let f = (k + 1) as f64 / (n + 1) as f64;
                let (x1, y1, x2, y2) = match side {
                    Side::N => (x0 + f * CELL, y0, x0 + f * CELL, y0 + 4.0),
                    Side::S => (x0 + f * CELL, y0 + CELL, x0 + f * CELL, y0 + CELL - 4.0),
                    Side::W => (x0, y0 + f * CELL, x0 + 4.0, y0 + f * CELL),
                    Side::E => (x0 + CELL, y0 + f * CELL, x0 + CELL - 4.0, y0 + f * CELL),
                };
                let _ = writeln!(
                    s,
                    r#"<line x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="{colour}" stroke-width="1.5"/>"#
                );
            }
        }
    }
    s.push_str("</svg>\n");
    s
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
}
