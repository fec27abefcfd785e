//! Bond strengths, binding graphs, stability and break enumeration.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Result, StamError};
use crate::model::{Assembly, GlueState, Pos, Side, Tile, TileSet};

/// Slot pairs `(slot on a, slot on b)` that are bound between `a` (whose
/// `side` faces `b`) and `b`: same glue type, same strength, both ON.
pub fn bound_slots(ts: &TileSet, a: &Tile, side: Side, b: &Tile) -> Vec<(u16, u16)> {
    let ca = ts.compiled(a.kind);
    let cb = ts.compiled(b.kind);
    let mut out = Vec::new();
    for &sa in &ca.by_side[side.index()] {
        if a.glues[sa as usize] != GlueState::On {
            continue;
        }
        let ga = &ca.slots[sa as usize];
        for &sb in &cb.by_side[side.opposite().index()] {
            let gb = &cb.slots[sb as usize];
            if gb.glue == ga.glue
                && gb.strength == ga.strength
                && b.glues[sb as usize] == GlueState::On
            {
                out.push((sa, sb));
            }
        }
    }
    out
}

/// Strength between two tiles, `side` being the face of `a` towards `b`.
pub fn tile_pair_strength(ts: &TileSet, a: &Tile, side: Side, b: &Tile) -> u32 {
    let ca = ts.compiled(a.kind);
    bound_slots(ts, a, side, b)
        .into_iter()
        .map(|(sa, _)| ca.slots[sa as usize].strength)
        .sum()
}

/// Total strength of the bond between adjacent occupied positions.
pub fn bond_strength(ts: &TileSet, a: &Assembly, p: Pos, q: Pos) -> Result<u32> {
    let side = p.side_towards(q).ok_or(StamError::NotAdjacent(p, q))?;
    let tp = a.get(p).ok_or(StamError::Unoccupied(p))?;
    let tq = a.get(q).ok_or(StamError::Unoccupied(q))?;
    Ok(tile_pair_strength(ts, tp, side, tq))
}

/// Weighted graph over occupied positions; edges only where strength > 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BindingGraph {
    pub nodes: Vec<Pos>,
    pub edges: Vec<(usize, usize, u32)>,
}

impl BindingGraph {
    pub fn adjacency(&self) -> Vec<Vec<(usize, u32)>> {
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for &(u, v, w) in &self.edges {
            adj[u].push((v, w));
            adj[v].push((u, w));
        }
        adj
    }

    /// Connected components as lists of node indices, ordered by smallest member.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let adj = self.adjacency();
        let mut seen = vec![false; self.nodes.len()];
        let mut comps = Vec::new();
        for s in 0..self.nodes.len() {
            if seen[s] {
                continue;
            }
            let mut comp = vec![s];
            seen[s] = true;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(v, _) in &adj[u] {
                    if !seen[v] {
                        seen[v] = true;
                        comp.push(v);
                        q.push_back(v);
                    }
                }
            }
            comp.sort_unstable();
            comps.push(comp);
        }
        comps
    }

    pub fn is_connected(&self) -> bool {
        self.nodes.len() <= 1 || self.components().len() == 1
    }

    fn cut_weight(&self, in_part: &[bool]) -> u32 {
        self.edges
            .iter()
            .filter(|(u, v, _)| in_part[*u] != in_part[*v])
            .map(|e| e.2)
            .sum()
    }
}

pub fn binding_graph(ts: &TileSet, a: &Assembly) -> BindingGraph {
    let nodes: Vec<Pos> = a.positions().collect();
    let index = |p: Pos| nodes.binary_search(&p).ok();
    let mut edges = Vec::new();
    for (i, (p, t)) in a.tiles.iter().enumerate() {
        for side in [Side::E, Side::N] {
            let q = p.step(side);
            if let Some(u) = a.get(q) {
                let w = tile_pair_strength(ts, t, side, u);
                if w > 0 {
                    edges.push((i, index(q).expect("occupied"), w));
                }
            }
        }
    }
    BindingGraph { nodes, edges }
}

/// Global minimum cut (Stoer-Wagner). Returns the weight and one side of a
/// minimum cut as node indices; `None` for graphs with fewer than two nodes.
pub fn min_cut(g: &BindingGraph) -> Option<(u32, Vec<usize>)> {
    let n = g.nodes.len();
    if n < 2 {
        return None;
    }
    let mut w = vec![vec![0u64; n]; n];
    for &(u, v, x) in &g.edges {
        w[u][v] += x as u64;
        w[v][u] += x as u64;
    }
    // groups[i]: original nodes merged into super-node i
    let mut groups: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut active: Vec<usize> = (0..n).collect();
    let mut best: Option<(u64, Vec<usize>)> = None;
    while active.len() > 1 {
        let mut added = vec![false; n];
        let mut conn = vec![0u64; n];
        let mut prev = active[0];
        let mut last = active[0];
        for k in 0..active.len() {
            let next = if k == 0 {
                active[0]
            } else {
                *active
                    .iter()
                    .filter(|&&v| !added[v])
                    .max_by(|&&a, &&b| conn[a].cmp(&conn[b]).then(b.cmp(&a)))
                    .expect("non-empty")
            };
            added[next] = true;
            prev = last;
            last = next;
            for &v in &active {
                if !added[v] {
                    conn[v] += w[next][v];
                }
            }
        }
        let phase = conn[last];
        if best.as_ref().map_or(true, |(b, _)| phase < *b) {
            best = Some((phase, groups[last].clone()));
        }
        // merge `last` into `prev`
        let moved = std::mem::take(&mut groups[last]);
        groups[prev].extend(moved);
        for &v in &active {
            w[prev][v] += w[last][v];
            w[v][prev] = w[prev][v];
        }
        w[prev][prev] = 0;
        active.retain(|&v| v != last);
    }
    best.map(|(c, mut side)| {
        side.sort_unstable();
        (c as u32, side)
    })
}

/// True iff every cut of the binding graph has strength at least `tau`.
/// Single tiles are stable.
pub fn is_tau_stable(ts: &TileSet, a: &Assembly, tau: u32) -> bool {
    if a.len() <= 1 {
        return true;
    }
    let g = binding_graph(ts, a);
    if tau <= 1 {
        return g.is_connected();
    }
    min_cut(&g).map_or(true, |(c, _)| c >= tau)
}

/// Sub-temperature cuts. Each partition is reported as the set of positions
/// on the side *not* containing the smallest position.
///
/// At `tau == 1` these are the connected components of the positive-weight
/// graph (split off one at a time). Above that, the min cut is used as a
/// witness and, for assemblies no larger than `exhaustive_bound`, every
/// sub-`tau` cut into two connected pieces is listed.
pub fn enumerate_breaks(
    ts: &TileSet,
    a: &Assembly,
    tau: u32,
    exhaustive_bound: usize,
) -> Vec<BTreeSet<Pos>> {
    if a.len() <= 1 {
        return Vec::new();
    }
    let g = binding_graph(ts, a);
    if tau <= 1 {
        return component_breaks(&g);
    }
    let Some((cut, side)) = min_cut(&g) else {
        return Vec::new();
    };
    if cut >= tau {
        return Vec::new();
    }
    let n = g.nodes.len();
    if n <= exhaustive_bound && n < 64 {
        let adj = g.adjacency();
        let mut out = Vec::new();
        // subsets of nodes 1..n (node 0 is always on the other side)
        for mask in 1u64..(1u64 << (n - 1)) {
            let in_part: Vec<bool> = (0..n)
                .map(|i| i > 0 && mask & (1 << (i - 1)) != 0)
                .collect();
            if g.cut_weight(&in_part) >= tau {
                continue;
            }
            if connected_subset(&adj, &in_part, true) && connected_subset(&adj, &in_part, false) {
                out.push((0..n).filter(|&i| in_part[i]).map(|i| g.nodes[i]).collect());
            }
        }
        out
    } else {
        let part: BTreeSet<Pos> = if side.contains(&0) {
            (0..n)
                .filter(|i| !side.contains(i))
                .map(|i| g.nodes[i])
                .collect()
        } else {
            side.iter().map(|&i| g.nodes[i]).collect()
        };
        vec![part]
    }
}

fn component_breaks(g: &BindingGraph) -> Vec<BTreeSet<Pos>> {
    let comps = g.components();
    if comps.len() < 2 {
        return Vec::new();
    }
    let to_set = |c: &[usize]| c.iter().map(|&i| g.nodes[i]).collect::<BTreeSet<Pos>>();
    if comps.len() == 2 {
        return vec![to_set(&comps[1])];
    }
    let mut out: Vec<BTreeSet<Pos>> = comps[1..].iter().map(|c| to_set(c)).collect();
    let rest: Vec<usize> = comps[1..].iter().flatten().copied().collect();
    out.push(to_set(&rest));
    out
}

fn connected_subset(adj: &[Vec<(usize, u32)>], in_part: &[bool], want: bool) -> bool {
    let Some(start) = (0..in_part.len()).find(|&i| in_part[i] == want) else {
        return false;
    };
    let mut seen = vec![false; in_part.len()];
    seen[start] = true;
    let mut stack = vec![start];
    let mut count = 1;
    while let Some(u) = stack.pop() {
        for &(v, _) in &adj[u] {
            if !seen[v] && in_part[v] == want {
                seen[v] = true;
                count += 1;
                stack.push(v);
            }
        }
    }
    count == in_part.iter().filter(|&&b| b == want).count()
}

/// Splits `a` into the tiles at `part` and the rest, carrying all state.
pub fn break_apart(
    ts: &TileSet,
    a: &Assembly,
    part: &BTreeSet<Pos>,
    tau: u32,
) -> Result<(Assembly, Assembly)> {
    if part.is_empty() || part.len() >= a.len() {
        return Err(StamError::InvalidPartition(
            "both sides must be non-empty".into(),
        ));
    }
    if let Some(p) = part.iter().find(|p| a.get(**p).is_none()) {
        return Err(StamError::Unoccupied(*p));
    }
    let mut cut = 0;
    for (p, t) in &a.tiles {
        for side in [Side::E, Side::N] {
            let q = p.step(side);
            if let Some(u) = a.get(q) {
                if part.contains(p) != part.contains(&q) {
                    cut += tile_pair_strength(ts, t, side, u);
                }
            }
        }
    }
    if cut >= tau {
        return Err(StamError::InvalidPartition(format!(
            "cut strength {cut} is not below temperature {tau}"
        )));
    }
    let mut b = Assembly::new();
    let mut c = Assembly::new();
    for (p, t) in &a.tiles {
        if part.contains(p) {
            b.insert(*p, t.clone());
        } else {
            c.insert(*p, t.clone());
        }
    }
    Ok((b, c))
}
