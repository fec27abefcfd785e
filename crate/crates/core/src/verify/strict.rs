//! Driving and auditing strict Sierpinski runs.

use serde::{Deserialize, Serialize};

use crate::dynamics::{
    apply_pending_in_place, break_apart, enumerate_breaks, enumerate_combinations, MemberId,
    Simulation, StochasticConfig, DEFAULT_BREAK_BOUND,
};
use crate::error::Result;
use crate::model::{Assembly, Pos, System};

use super::pattern::{check_strict_shape, Region, ShapeReport};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrictRun {
    pub steps: usize,
    /// Every block of the region reached its final state.
    pub resolved: bool,
    pub report: ShapeReport,
    /// Sizes of the detached pieces once their queued actions are drained.
    pub junk_sizes: Vec<usize>,
    /// No drained piece can bind the main assembly, a supply tile or
    /// another piece.
    pub junk_inert: bool,
}

fn corner(system: &System, a: &Assembly) -> Option<Pos> {
    let seed = system.initial.get(*system.seeds.first()?)?;
    let kind = seed.tiles.values().next()?.kind;
    a.tiles
        .iter()
        .find(|(_, t)| t.kind == kind)
        .map(|(p, _)| *p)
}

fn main_member(sim: &Simulation) -> Option<(MemberId, Pos)> {
    let system = sim.universe.system();
    sim.universe
        .members()
        .find_map(|(id, a)| corner(system, a).map(|p| (id, p)))
}

/// Shape report of the blocks in `[0, blocks)²` if none of their tiles has
/// queued actions.
pub fn strict_region_report(system: &System, a: &Assembly, blocks: i32) -> Option<ShapeReport> {
    let origin = corner(system, a)?;
    check_strict_shape(a, origin, Region::square(blocks)).ok()
}

/// Applies queued actions and splits along broken bonds until every piece
/// is quiet.
pub fn settle(system: &System, a: Assembly) -> Result<Vec<Assembly>> {
    let ts = &system.tileset;
    let mut todo = vec![a];
    let mut done = Vec::new();
    while let Some(mut a) = todo.pop() {
        let next = a
            .tiles
            .iter()
            .find_map(|(p, t)| t.pending.first().map(|act| (*p, *act)));
        if let Some((p, act)) = next {
            apply_pending_in_place(ts, &mut a, p, act)?;
            todo.push(a);
            continue;
        }
        match enumerate_breaks(ts, &a, system.temperature, DEFAULT_BREAK_BOUND).first() {
            Some(part) => {
                let (x, y) = break_apart(ts, &a, part, system.temperature)?;
                todo.push(x);
                todo.push(y);
            }
            None => done.push(a),
        }
    }
    Ok(done)
}

/// Runs until the blocks `[0, blocks)²` are resolved (checked every
/// `check_every` steps) or the step budget is spent, then settles and
/// audits every detached piece.
pub fn run_strict(
    system: &System,
    config: StochasticConfig,
    blocks: i32,
    check_every: usize,
) -> Result<StrictRun> {
    let mut sim = Simulation::new(system, config);
    let mut resolved = false;
    let mut report = ShapeReport::default();
    let check_every = check_every.max(1);
    loop {
        if sim.steps_taken() % check_every == 0 {
            if let Some((id, _)) = main_member(&sim) {
                let a = sim.universe.member(id).expect("member");
                if let Some(r) = strict_region_report(system, a, blocks) {
                    let done = r.missing.is_empty() && r.extra.is_empty();
                    report = r;
                    if done {
                        resolved = true;
                        break;
                    }
                }
            }
        }
        if sim.step()?.is_none() {
            break;
        }
    }
    let steps = sim.steps_taken();
    let main = main_member(&sim).map(|(id, _)| id);
    let mut pieces = Vec::new();
    for (id, a) in sim.universe.members() {
        if Some(id) != main {
            pieces.extend(settle(system, a.clone())?);
        }
    }
    let ts = &system.tileset;
    let tau = system.temperature;
    let host = main.and_then(|id| sim.universe.member(id));
    let mut junk_inert = true;
    for (i, j) in pieces.iter().enumerate() {
        let binds = |b: &Assembly| !enumerate_combinations(ts, b, j, tau).is_empty();
        if host.is_some_and(binds)
            || system.initial.iter().any(binds)
            || pieces.iter().enumerate().any(|(k, b)| k != i && binds(b))
        {
            junk_inert = false;
        }
    }
    let mut junk_sizes: Vec<usize> = pieces.iter().map(Assembly::len).collect();
    junk_sizes.sort_unstable();
    Ok(StrictRun {
        steps,
        resolved,
        report,
        junk_sizes,
        junk_inert,
    })
}
