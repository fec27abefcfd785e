//! Turing machine oracle, tape decoding, bisimulation and fuel/junk audits.

use serde::{Deserialize, Serialize};

use crate::dynamics::{MemberId, Move, Trace, Universe};
use crate::error::{Result, StamError};
use crate::generators::{compile_tm, initial_tape, tm_role, Dir, TMSpec, TmRole};
use crate::model::{Assembly, Switch, System};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TMConfiguration {
    pub tape: String,
    pub head: usize,
    pub state: String,
}

impl std::fmt::Display for TMConfiguration {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} @{} [{}]", self.tape, self.head, self.state)
    }
}

/// Direct interpreter. The tape starts as `w` (one blank if `w` is empty)
/// and gains a blank whenever the head steps past its right end. A missing
/// rule appends a final configuration in the reject state.
pub fn tm_reference(m: &TMSpec, w: &str, max_steps: usize) -> Result<Vec<TMConfiguration>> {
    let mut c = TMConfiguration {
        tape: initial_tape(w),
        head: 0,
        state: m.start.clone(),
    };
    let mut out = vec![c.clone()];
    for step in 0..max_steps {
        if m.is_halting(&c.state) {
            break;
        }
        let mut cells: Vec<char> = c.tape.chars().collect();
        let Some(rule) = m.step(&c.state, cells[c.head]) else {
            c.state = m.reject.clone();
            out.push(c.clone());
            break;
        };
        cells[c.head] = rule.write;
        match rule.dir {
            Dir::R => {
                c.head += 1;
                if c.head == cells.len() {
                    cells.push('_');
                }
            }
            Dir::L => {
                if c.head == 0 {
                    return Err(StamError::LeftOfTape(step));
                }
                c.head -= 1;
            }
        }
        c.tape = cells.into_iter().collect();
        c.state = rule.next.clone();
        out.push(c.clone());
    }
    Ok(out)
}

/// Reads the configuration off a tape assembly at a quiescent point: no
/// head-protocol tiles attached, exactly one head cell, and no queued
/// deactivation on any tape tile. Returns `None` otherwise.
pub fn decode_tape(system: &System, m: &TMSpec, a: &Assembly) -> Option<TMConfiguration> {
    let ts = &system.tileset;
    let mut cells = Vec::new();
    let mut halt = None;
    for (p, t) in &a.tiles {
        if t.pending
            .iter()
            .any(|pa| ts.describe(t.kind, *pa).new_state == Switch::Off)
        {
            return None;
        }
        match tm_role(&ts.tile_type(t.kind).name) {
            TmRole::Protocol => return None,
            TmRole::Accept => halt = Some(m.accept.clone()),
            TmRole::Reject => halt = Some(m.reject.clone()),
            TmRole::Cell(c) => cells.push((p.x, p.y, c, None)),
            TmRole::Head(q, c) => cells.push((p.x, p.y, c, Some(q))),
            TmRole::End => cells.push((p.x, p.y, '*', None)),
            TmRole::Backbone => {}
        }
    }
    cells.sort_by_key(|c| c.0);
    let (&(x0, y0, ..), &(xn, _, last, _)) = (cells.first()?, cells.last()?);
    if last != '*' || cells.iter().any(|c| c.1 != y0) || (xn - x0 + 1) as usize != cells.len() {
        return None;
    }
    let heads: Vec<usize> = (0..cells.len()).filter(|&i| cells[i].3.is_some()).collect();
    let [head] = heads[..] else {
        return None;
    };
    let state = halt.unwrap_or_else(|| cells[head].3.clone().expect("head cell"));
    Some(TMConfiguration {
        tape: cells[..cells.len() - 1].iter().map(|c| c.2).collect(),
        head,
        state,
    })
}

fn is_tape(system: &System, a: &Assembly) -> bool {
    a.tiles
        .values()
        .any(|t| tm_role(&system.tileset.tile_type(t.kind).name) == TmRole::Backbone)
}

/// A quiescent point observed while replaying a trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiescentPoint {
    /// Number of trace steps applied when it was first observed.
    pub after_step: usize,
    pub config: TMConfiguration,
    pub tape_size: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Bisimulation {
    pub holds: bool,
    /// Distinct consecutive quiescent configurations, in order.
    pub points: Vec<QuiescentPoint>,
    pub reference_len: usize,
    pub reference_halts: bool,
    /// The run ended with no enabled move.
    pub run_finished: bool,
    /// Sizes of the tape assemblies and junk left at the end.
    pub final_tape_sizes: Vec<usize>,
    pub final_halt_tiles: usize,
    pub divergence: Option<String>,
}

fn count_halt_tiles(system: &System, a: &Assembly) -> usize {
    a.tiles
        .values()
        .filter(|t| {
            matches!(
                tm_role(&system.tileset.tile_type(t.kind).name),
                TmRole::Accept | TmRole::Reject
            )
        })
        .count()
}

/// Replays `trace` against the compiled system and matches every quiescent
/// configuration of the tape, in order, with the reference run. If the
/// machine halts within the reference bound and the run finished, the final
/// universe must hold exactly one tape (size > 3) carrying exactly one
/// halting tile, and it must decode to the reference's final configuration.
pub fn bisimulate(trace: &Trace, m: &TMSpec, w: &str) -> Result<Bisimulation> {
    let system = compile_tm(m, w)?;
    let reference = tm_reference(m, w, trace.steps.len() + 1)?;
    let reference_halts = reference.last().is_some_and(|c| m.is_halting(&c.state));
    let mut u = Universe::new(&system);
    let mut points: Vec<QuiescentPoint> = Vec::new();
    let mut divergence = None;
    let observe = |u: &Universe, step: usize, points: &mut Vec<QuiescentPoint>| -> Option<String> {
        for (_, a) in u.members() {
            if !is_tape(&system, a) {
                continue;
            }
            let Some(config) = decode_tape(&system, m, a) else {
                continue;
            };
            if points.last().is_some_and(|p| p.config == config) {
                continue;
            }
            let k = points.len();
            let expected = reference.get(k);
            points.push(QuiescentPoint {
                after_step: step,
                config: config.clone(),
                tape_size: a.len() - count_halt_tiles(&system, a),
            });
            if expected != Some(&config) {
                return Some(format!(
                    "quiescent point {k} after step {step}: observed {config}, expected {}",
                    expected.map_or("nothing".to_string(), |c| c.to_string())
                ));
            }
        }
        None
    };
    divergence = divergence.or_else(|| observe(&u, 0, &mut points));
    for (i, s) in trace.steps.iter().enumerate() {
        let mv = u.resolve(&s.mv)?;
        let applied = u.apply(&mv)?;
        if applied.added != s.created {
            return Err(StamError::Unresolved(format!("step {i} does not replay")));
        }
        if divergence.is_none() {
            divergence = observe(&u, i + 1, &mut points);
        }
    }
    let run_finished = u.moves().is_empty();
    let tapes: Vec<&Assembly> = u
        .members()
        .map(|(_, a)| a)
        .filter(|a| is_tape(&system, a))
        .collect();
    let final_tape_sizes = tapes.iter().map(|a| a.len()).collect();
    let final_halt_tiles = tapes.iter().map(|a| count_halt_tiles(&system, a)).sum();
    if divergence.is_none() && run_finished {
        if !reference_halts {
            divergence = Some("run stopped but the machine does not halt".into());
        } else if points.len() != reference.len() {
            divergence = Some(format!(
                "run stopped after {} of {} configurations",
                points.len(),
                reference.len()
            ));
        } else if tapes.len() != 1 || tapes[0].len() <= 3 || final_halt_tiles != 1 {
            divergence = Some("final universe lacks a unique halted tape".into());
        }
    }
    Ok(Bisimulation {
        holds: divergence.is_none(),
        points,
        reference_len: reference.len(),
        reference_halts,
        run_finished,
        final_tape_sizes,
        final_halt_tiles,
        divergence,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FuelAudit {
    /// Tiles drawn from the supply between consecutive quiescent points.
    pub drawn: Vec<usize>,
    /// Drawn tiles that did not stay in the tape (ended up as junk).
    pub fuel: Vec<usize>,
    pub max_fuel: usize,
    /// Every quiescent tape had `2 * cells + 2` tiles.
    pub space_ok: bool,
}

/// Per simulated step fuel, using the quiescent points of `bisim` as step
/// boundaries.
pub fn fuel_audit(trace: &Trace, bisim: &Bisimulation) -> Result<FuelAudit> {
    let pts = &bisim.points;
    if pts.is_empty() {
        return Err(StamError::StepBoundary(
            "no quiescent point observed".into(),
        ));
    }
    let mut drawn = Vec::new();
    let mut fuel = Vec::new();
    for w in pts.windows(2) {
        let (a, b) = (&w[0], &w[1]);
        // halting tiles are not part of a simulated step
        if b.config.tape == a.config.tape && b.config.head == a.config.head {
            continue;
        }
        let d: usize = trace.steps[a.after_step..b.after_step]
            .iter()
            .map(|s| s.accounting.consumed)
            .sum();
        let growth = b.tape_size.checked_sub(a.tape_size).ok_or_else(|| {
            StamError::StepBoundary(format!(
                "tape shrank between steps {} and {}",
                a.after_step, b.after_step
            ))
        })?;
        drawn.push(d);
        fuel.push(d - growth.min(d));
    }
    let space_ok = pts
        .iter()
        .all(|p| p.tape_size == 2 * p.config.tape.chars().count() + 2);
    Ok(FuelAudit {
        max_fuel: fuel.iter().copied().max().unwrap_or(0),
        drawn,
        fuel,
        space_ok,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct JunkAudit {
    /// Sizes of detached assemblies holding no backbone tile.
    pub sizes: Vec<usize>,
    /// No combination is enabled between any junk and anything else.
    pub inert: bool,
}

/// Audits the junk left in the universe reached by replaying `trace`.
pub fn junk_audit(system: &System, trace: &Trace) -> Result<JunkAudit> {
    let u = trace.replay(system)?;
    let junk: Vec<MemberId> = u
        .members()
        .filter(|(_, a)| !is_tape(system, a))
        .map(|(id, _)| id)
        .collect();
    let mut sizes: Vec<usize> = junk
        .iter()
        .filter_map(|id| u.member(*id))
        .map(|a| a.len())
        .collect();
    sizes.sort_unstable();
    let inert = !u.moves().iter().any(|mv| match mv {
        Move::Combine { a, b, .. } => [a, b].iter().any(|o| match o {
            crate::dynamics::Operand::Member(id) => junk.contains(id),
            _ => false,
        }),
        Move::Action { member, .. } | Move::Break { member, .. } => junk.contains(member),
    });
    Ok(JunkAudit { sizes, inert })
}
