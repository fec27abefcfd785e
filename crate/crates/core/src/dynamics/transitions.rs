//! The producibility transitions: combination, pending-action execution
//! and (in [`super::bonds`]) breaking.

use std::collections::{BTreeSet, HashMap};

use crate::error::{Result, StamError};
use crate::model::{
    glue_transition_valid, Assembly, GlueId, GlueState, PendingAction, Pos, Side, Slot, Tile,
    TileSet,
};

use super::bonds::bound_slots;

/// Queues δ(slot) onto the tile's pending multiset.
pub fn fire(ts: &TileSet, tile: &mut Tile, slot: u16) {
    let actions = &ts.compiled(tile.kind).delta[slot as usize];
    for &a in actions {
        tile.push_pending(a);
    }
}

/// An exposed ON glue: its position, the face it sits on, type and strength.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ExposedGlue {
    pub glue: GlueId,
    pub side: Side,
    pub pos: Pos,
    pub strength: u32,
}

/// ON glues whose facing position is empty.
pub fn exposed_glues(ts: &TileSet, a: &Assembly) -> Vec<ExposedGlue> {
    let mut out = Vec::new();
    for (p, t) in &a.tiles {
        let c = ts.compiled(t.kind);
        for side in Side::ALL {
            if a.get(p.step(side)).is_some() {
                continue;
            }
            for &s in &c.by_side[side.index()] {
                if t.glues[s as usize] == GlueState::On {
                    let slot = &c.slots[s as usize];
                    out.push(ExposedGlue {
                        glue: slot.glue,
                        side,
                        pos: *p,
                        strength: slot.strength,
                    });
                }
            }
        }
    }
    out
}

/// Candidate translations of `b` that align at least one ON glue pair.
pub fn candidate_offsets(ts: &TileSet, a: &Assembly, b: &Assembly) -> BTreeSet<(i32, i32)> {
    let mut index: HashMap<(GlueId, Side), Vec<Pos>> = HashMap::new();
    for e in exposed_glues(ts, b) {
        index.entry((e.glue, e.side)).or_default().push(e.pos);
    }
    let mut out = BTreeSet::new();
    for e in exposed_glues(ts, a) {
        if let Some(qs) = index.get(&(e.glue, e.side.opposite())) {
            let target = e.pos.step(e.side);
            for q in qs {
                out.insert((target.x - q.x, target.y - q.y));
            }
        }
    }
    out
}

/// Total strength across the interface of `a` and `b` translated by `v`, or
/// the first overlapping position.
pub fn interface_strength(
    ts: &TileSet,
    a: &Assembly,
    b: &Assembly,
    v: (i32, i32),
) -> std::result::Result<u32, Pos> {
    let mut strength = 0;
    if b.len() <= a.len() {
        for (q, t) in &b.tiles {
            let pa = q.translate(v);
            if a.get(pa).is_some() {
                return Err(pa);
            }
            for side in Side::ALL {
                if let Some(u) = a.get(pa.step(side)) {
                    strength += super::bonds::tile_pair_strength(ts, t, side, u);
                }
            }
        }
    } else {
        for (p, t) in &a.tiles {
            let pb = p.translate((-v.0, -v.1));
            if b.get(pb).is_some() {
                return Err(*p);
            }
            for side in Side::ALL {
                if let Some(u) = b.get(pb.step(side)) {
                    strength += super::bonds::tile_pair_strength(ts, t, side, u);
                }
            }
        }
    }
    Ok(strength)
}

/// Every translation of `b` that avoids overlap and binds with strength ≥ τ.
pub fn enumerate_combinations(
    ts: &TileSet,
    a: &Assembly,
    b: &Assembly,
    tau: u32,
) -> Vec<(i32, i32)> {
    candidate_offsets(ts, a, b)
        .into_iter()
        .filter(|&v| matches!(interface_strength(ts, a, b, v), Ok(s) if s >= tau))
        .collect()
}

/// Union of `a` and `b` shifted by `v`. Every newly bound glue pair fires
/// the transition functions of both tiles, in (side, glue, position) order.
pub fn combine(
    ts: &TileSet,
    a: &Assembly,
    b: &Assembly,
    v: (i32, i32),
    tau: u32,
) -> Result<Assembly> {
    let strength = interface_strength(ts, a, b, v).map_err(StamError::Overlap)?;
    if strength < tau {
        return Err(StamError::WeakInterface {
            strength,
            temperature: tau,
        });
    }
    let mut c = a.clone();
    let mut from_b = Vec::with_capacity(b.len());
    for (p, t) in &b.tiles {
        let q = p.translate(v);
        c.insert(q, t.clone());
        from_b.push(q);
    }
    // (side on the a-tile, glue, a-position, a-slot, b-position, b-slot)
    let mut fired: Vec<(Side, GlueId, Pos, u16, Pos, u16)> = Vec::new();
    for &q in &from_b {
        let tb = &c.tiles[&q];
        for side in Side::ALL {
            let p = q.step(side);
            if from_b.binary_search(&p).is_ok() {
                continue;
            }
            if let Some(ta) = c.get(p) {
                let ca = ts.compiled(ta.kind);
                for (sa, sb) in bound_slots(ts, ta, side.opposite(), tb) {
                    fired.push((side.opposite(), ca.slots[sa as usize].glue, p, sa, q, sb));
                }
            }
        }
    }
    fired.sort();
    for (_, _, p, sa, q, sb) in fired {
        fire(ts, c.tiles.get_mut(&p).expect("a tile"), sa);
        fire(ts, c.tiles.get_mut(&q).expect("b tile"), sb);
    }
    Ok(c)
}

/// Executes one instance of `act` from Π of the tile at `p`. Invalid state
/// pairs only remove the action. A glue turning ON against a matching ON
/// glue on the neighbouring tile forms a bond and fires both tiles.
pub fn apply_pending_action(
    ts: &TileSet,
    a: &Assembly,
    p: Pos,
    act: PendingAction,
) -> Result<Assembly> {
    let mut out = a.clone();
    apply_pending_in_place(ts, &mut out, p, act)?;
    Ok(out)
}

pub fn apply_pending_in_place(
    ts: &TileSet,
    a: &mut Assembly,
    p: Pos,
    act: PendingAction,
) -> Result<()> {
    let tile = a.tiles.get_mut(&p).ok_or(StamError::Unoccupied(p))?;
    if !tile.take_pending(act) {
        return Err(StamError::NotPending(p));
    }
    let from = tile.slot_state(act.slot);
    let to: GlueState = act.state.into();
    if !glue_transition_valid(from, to) {
        return Ok(());
    }
    match act.slot {
        Slot::Label(i) => tile.labels[i as usize] = to,
        Slot::Glue(i) => {
            tile.glues[i as usize] = to;
            if to == GlueState::On {
                let kind = tile.kind;
                let slot = &ts.compiled(kind).slots[i as usize];
                let (side, glue, strength) = (slot.side, slot.glue, slot.strength);
                let q = p.step(side);
                if let Some(nb) = a.tiles.get_mut(&q) {
                    let cn = ts.compiled(nb.kind);
                    if let Some(j) = cn.find(side.opposite(), glue) {
                        if cn.slots[j as usize].strength == strength
                            && nb.glues[j as usize] == GlueState::On
                        {
                            fire(ts, nb, j);
                            fire(ts, a.tiles.get_mut(&p).expect("tile"), i);
                        }
                    }
                }
            }
        }
    }
    Ok(())
}
