//! Membership oracles and shape/pattern checks for lines and the
//! Sierpinski triangle.

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::{Assembly, GlueState, Pos, TileSet};

/// Membership in the discrete Sierpinski triangle, unfolded from the stage
/// recursion `S_{i+1} = S_i ∪ (S_i + 2^i (1,0)) ∪ (S_i + 2^i (0,1))`.
pub fn sierpinski_member(x: u64, y: u64) -> bool {
    let (mut x, mut y) = (x, y);
    // smallest stage whose square [0, 2^i)² covers the point
    let mut half = 1u64;
    while half <= x.max(y) {
        half <<= 1;
    }
    while half > 1 {
        half >>= 1;
        match (x >= half, y >= half) {
            (false, false) => {}
            (true, false) => x -= half,
            (false, true) => y -= half,
            (true, true) => return false,
        }
    }
    x == 0 && y == 0
}

/// The 2×2 block `f(x, y)` at scale 2, in 00, 01, 10, 11 order (`ab` means
/// offset `(a, b)`).
pub fn scaled_block(x: i32, y: i32) -> [Pos; 4] {
    [
        Pos::new(2 * x, 2 * y),
        Pos::new(2 * x, 2 * y + 1),
        Pos::new(2 * x + 1, 2 * y),
        Pos::new(2 * x + 1, 2 * y + 1),
    ]
}

/// True iff the occupied positions form a horizontal n×1 line, up to translation.
pub fn check_line_shape(a: &Assembly, n: usize) -> bool {
    if a.len() != n || n == 0 {
        return false;
    }
    let Some((lo, hi)) = a.bounds() else {
        return false;
    };
    lo.y == hi.y && (hi.x - lo.x + 1) as usize == n
}

/// True iff the occupied positions form a vertical 1×n column, up to translation.
pub fn check_column_shape(a: &Assembly, n: usize) -> bool {
    if a.len() != n || n == 0 {
        return false;
    }
    let Some((lo, hi)) = a.bounds() else {
        return false;
    };
    lo.x == hi.x && (hi.y - lo.y + 1) as usize == n
}

/// Inclusive rectangle `[x0, x1] × [y0, y1]` of lattice points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub x0: i32,
    pub y0: i32,
    pub x1: i32,
    pub y1: i32,
}

impl Region {
    /// The square `[0, side)²`.
    pub fn square(side: i32) -> Region {
        Region {
            x0: 0,
            y0: 0,
            x1: side - 1,
            y1: side - 1,
        }
    }

    pub fn points(&self) -> impl Iterator<Item = (i32, i32)> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| (x, y)))
    }
}

/// Compares black/white labels inside `region` (coordinates relative to
/// `origin`, the corner tile) against the triangle. Returns the mismatching
/// coordinates; errors if a point is untiled or its label unresolved.
pub fn check_weak_pattern(
    ts: &TileSet,
    a: &Assembly,
    origin: Pos,
    region: Region,
) -> Result<Vec<(i32, i32)>> {
    let mut bad = Vec::new();
    for (x, y) in region.points() {
        let p = Pos::new(origin.x + x, origin.y + y);
        let t = a.get(p).ok_or(StamError::Unoccupied(p))?;
        let black = t.label_state(ts, "black") == Some(GlueState::On);
        let white = t.label_state(ts, "white") == Some(GlueState::On);
        if black == white {
            return Err(StamError::UnresolvedLabel(p));
        }
        if x < 0 || y < 0 || black != sierpinski_member(x as u64, y as u64) {
            bad.push((x, y));
        }
    }
    Ok(bad)
}

/// Whether every point of `region` is tiled with a resolved label.
pub fn weak_region_resolved(ts: &TileSet, a: &Assembly, origin: Pos, region: Region) -> bool {
    region.points().all(|(x, y)| {
        a.get(Pos::new(origin.x + x, origin.y + y))
            .is_some_and(|t| {
                (t.label_state(ts, "black") == Some(GlueState::On))
                    != (t.label_state(ts, "white") == Some(GlueState::On))
            })
    })
}

/// Differences between the occupied cells of a scale-2 snapshot and the
/// scaled triangle, restricted to the blocks of `blocks`.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShapeReport {
    /// Cells of member blocks that are empty.
    pub missing: Vec<Pos>,
    /// Occupied cells of non-member blocks.
    pub extra: Vec<Pos>,
}

impl ShapeReport {
    pub fn is_empty(&self) -> bool {
        self.missing.is_empty() && self.extra.is_empty()
    }
}

/// Checks that the occupied cells within the scaled `blocks` region (cell
/// coordinates relative to `origin`) are exactly the union of
/// `scaled_block(x, y)` over triangle members. Errors if any tile in the
/// region still has pending actions.
pub fn check_strict_shape(a: &Assembly, origin: Pos, blocks: Region) -> Result<ShapeReport> {
    let mut report = ShapeReport::default();
    for (bx, by) in blocks.points() {
        let member = bx >= 0 && by >= 0 && sierpinski_member(bx as u64, by as u64);
        for c in scaled_block(bx, by) {
            let p = Pos::new(origin.x + c.x, origin.y + c.y);
            match a.get(p) {
                Some(t) if !t.pending.is_empty() => {
                    return Err(StamError::Unresolved(format!("pending actions at {p}")));
                }
                Some(_) if !member => report.extra.push(c),
                None if member => report.missing.push(c),
                _ => {}
            }
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn membership_small_cases() {
        assert!(sierpinski_member(0, 0));
        assert!(!sierpinski_member(1, 1));
        // (0,3) is in S_2, so (4,3) = (0,3) + 4(1,0) is in S_3
        assert!(sierpinski_member(4, 3));
        assert!(sierpinski_member(4, 2));
        assert!(!sierpinski_member(5, 3));
    }

    #[test]
    fn membership_is_bitwise_disjointness() {
        for x in 0..32u64 {
            for y in 0..32u64 {
                assert_eq!(sierpinski_member(x, y), x & y == 0, "({x},{y})");
            }
        }
    }

    #[test]
    fn blocks() {
        assert_eq!(
            scaled_block(1, 1),
            [
                Pos::new(2, 2),
                Pos::new(2, 3),
                Pos::new(3, 2),
                Pos::new(3, 3)
            ]
        );
        let mut all = BTreeSet::new();
        for x in 0..=8 {
            for y in 0..=8 {
                for p in scaled_block(x, y) {
                    assert!(all.insert(p));
                }
            }
        }
    }
}
