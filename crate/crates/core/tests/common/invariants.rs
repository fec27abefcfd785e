//! Random small systems and a random-walk driver that checks the model
//! invariants after every move. Tile instances carry ids so per-glue
//! histories can be followed across combinations and breaks.

use std::cell::Cell;
use std::collections::{BTreeMap, BTreeSet, HashMap};

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stam_core::dynamics::{
    apply_pending_action, binding_graph, break_apart, combine, enumerate_breaks,
    enumerate_combinations, run_stochastic, StochasticConfig, DEFAULT_BREAK_BOUND,
};
use stam_core::model::{glue_transition_valid, validate_system};
use stam_core::{Action, Assembly, GlueState, Pos, Side, Switch, System, TileType};

pub const MIN_MOVES: usize = 1000;
const MAX_SIZE: usize = 10;
const MAX_POOL: usize = 8;
const STEPS_PER_CASE: usize = 40;

#[derive(Debug, Clone)]
struct GlueSpec {
    side: usize,
    name: usize,
    on: bool,
    /// (target glue index on this tile, switch on?)
    delta: Vec<(usize, bool)>,
}

fn glue_spec() -> impl Strategy<Value = GlueSpec> {
    (
        0..4usize,
        0..3usize,
        any::<bool>(),
        prop::collection::vec((0..6usize, any::<bool>()), 0..3),
    )
        .prop_map(|(side, name, on, delta)| GlueSpec {
            side,
            name,
            on,
            delta,
        })
}

fn build_system(tiles: Vec<Vec<GlueSpec>>, tau: u32) -> System {
    let types = tiles
        .into_iter()
        .enumerate()
        .map(|(i, glues)| {
            // drop duplicate (side, name) pairs
            let mut seen = BTreeSet::new();
            let glues: Vec<GlueSpec> = glues
                .into_iter()
                .filter(|g| seen.insert((g.side, g.name)))
                .collect();
            let mut t = TileType::new(format!("T{i}"));
            for g in &glues {
                let state = if g.on {
                    GlueState::On
                } else {
                    GlueState::Latent
                };
                t = t.glue(Side::ALL[g.side], format!("g{}", g.name), state);
            }
            for g in &glues {
                let acts: Vec<Action> = g
                    .delta
                    .iter()
                    .map(|&(k, on)| {
                        let tg = &glues[k % glues.len()];
                        let sw = if on { Switch::On } else { Switch::Off };
                        Action::glue(Side::ALL[tg.side], format!("g{}", tg.name), sw)
                    })
                    .collect();
                if !acts.is_empty() {
                    t = t.on_bind(Side::ALL[g.side], format!("g{}", g.name), acts);
                }
            }
            t
        })
        .collect();
    System::singletons(types, tau)
}

pub fn system_strategy() -> impl Strategy<Value = System> {
    (
        prop::collection::vec(prop::collection::vec(glue_spec(), 1..5), 1..4),
        prop_oneof![3 => Just(1u32), 1 => Just(2u32)],
    )
        .prop_map(|(t, tau)| build_system(t, tau))
        .prop_filter("valid system", |s| validate_system(s).is_empty())
}

#[derive(Clone)]
struct Piece {
    asm: Assembly,
    ids: BTreeMap<Pos, u64>,
}

enum Src {
    Pool(usize),
    Supply(usize),
}

enum Mv {
    Action(usize, Pos, stam_core::model::PendingAction),
    Break(usize, BTreeSet<Pos>),
    Combine(Src, Src, (i32, i32)),
}

struct World<'a> {
    system: &'a System,
    pool: Vec<Piece>,
    next_id: u64,
    /// per instance: current glue states and number of entries into ON
    history: HashMap<u64, (Vec<GlueState>, Vec<u32>)>,
}

impl<'a> World<'a> {
    fn new(system: &'a System) -> Self {
        World {
            system,
            pool: Vec::new(),
            next_id: 0,
            history: HashMap::new(),
        }
    }

    fn fresh(&mut self, i: usize) -> Piece {
        let asm = self.system.initial[i].clone();
        let ids = asm
            .positions()
            .map(|p| {
                self.next_id += 1;
                (p, self.next_id)
            })
            .collect();
        Piece { asm, ids }
    }

    fn operand(&self, s: &Src) -> Assembly {
        match s {
            Src::Pool(i) => self.pool[*i].asm.clone(),
            Src::Supply(i) => self.system.initial[*i].clone(),
        }
    }

    fn moves(&self) -> Vec<Mv> {
        let ts = &self.system.tileset;
        let tau = self.system.temperature;
        let mut out = Vec::new();
        for (i, p) in self.pool.iter().enumerate() {
            for (pos, t) in &p.asm.tiles {
                for a in &t.pending {
                    out.push(Mv::Action(i, *pos, *a));
                }
            }
            for part in enumerate_breaks(ts, &p.asm, tau, DEFAULT_BREAK_BOUND) {
                out.push(Mv::Break(i, part));
            }
        }
        let mut srcs: Vec<Src> = (0..self.pool.len()).map(Src::Pool).collect();
        if self.pool.len() < MAX_POOL {
            srcs.extend((0..self.system.initial.len()).map(Src::Supply));
        }
        let n = srcs.len();
        for i in 0..n {
            for j in i..n {
                let (a, b) = (&srcs[i], &srcs[j]);
                if i == j && matches!(a, Src::Pool(_)) {
                    continue;
                }
                let (x, y) = (self.operand(a), self.operand(b));
                if x.len() + y.len() > MAX_SIZE {
                    continue;
                }
                for v in enumerate_combinations(ts, &x, &y, tau) {
                    let s = |s: &Src| match s {
                        Src::Pool(k) => Src::Pool(*k),
                        Src::Supply(k) => Src::Supply(*k),
                    };
                    out.push(Mv::Combine(s(a), s(b), v));
                }
            }
        }
        out
    }

    fn take(&mut self, s: Src, removed: &mut Vec<usize>) -> Piece {
        match s {
            Src::Pool(i) => {
                removed.push(i);
                self.pool[i].clone()
            }
            Src::Supply(i) => self.fresh(i),
        }
    }

    /// Applies `mv`, checking mass conservation; returns the new pieces.
    fn apply(&mut self, mv: Mv) -> Result<Vec<Piece>, TestCaseError> {
        let ts = &self.system.tileset;
        let tau = self.system.temperature;
        let mut removed = Vec::new();
        let out = match mv {
            Mv::Action(i, pos, a) => {
                let p = self.pool[i].clone();
                removed.push(i);
                let asm = apply_pending_action(ts, &p.asm, pos, a).unwrap();
                let before: Vec<Pos> = p.asm.positions().collect();
                prop_assert_eq!(asm.positions().collect::<Vec<_>>(), before);
                vec![Piece { asm, ids: p.ids }]
            }
            Mv::Break(i, part) => {
                let p = self.pool[i].clone();
                removed.push(i);
                let (x, y) = break_apart(ts, &p.asm, &part, tau).unwrap();
                let mut all: Vec<Pos> = x.positions().chain(y.positions()).collect();
                all.sort();
                prop_assert_eq!(all, p.asm.positions().collect::<Vec<_>>());
                prop_assert!(x.positions().all(|q| part.contains(&q)));
                let split = |a: Assembly| {
                    let ids = a.positions().map(|q| (q, p.ids[&q])).collect();
                    Piece { asm: a, ids }
                };
                vec![split(x), split(y)]
            }
            Mv::Combine(a, b, v) => {
                let pa = self.take(a, &mut removed);
                let pb = self.take(b, &mut removed);
                let asm = combine(ts, &pa.asm, &pb.asm, v, tau).unwrap();
                prop_assert_eq!(asm.len(), pa.asm.len() + pb.asm.len());
                let mut ids = pa.ids.clone();
                for (q, id) in &pb.ids {
                    prop_assert!(ids.insert(q.translate(v), *id).is_none());
                }
                vec![Piece { asm, ids }]
            }
        };
        removed.sort_unstable();
        removed.dedup();
        for i in removed.into_iter().rev() {
            self.pool.remove(i);
        }
        Ok(out)
    }

    /// Folds the glue states of every tile in `pieces` into the per-instance
    /// history, checking each transition.
    fn audit(&mut self, pieces: &[Piece]) -> Result<(), TestCaseError> {
        for p in pieces {
            for (pos, t) in &p.asm.tiles {
                let id = p.ids[pos];
                let entry = self.history.entry(id).or_insert_with(|| {
                    let ons = t
                        .glues
                        .iter()
                        .map(|s| u32::from(*s == GlueState::On))
                        .collect();
                    (t.glues.to_vec(), ons)
                });
                for (k, (&old, &new)) in entry.0.iter().zip(t.glues.iter()).enumerate() {
                    prop_assert!(
                        old == new || glue_transition_valid(old, new),
                        "tile {} slot {}: {:?} -> {:?}",
                        id,
                        k,
                        old,
                        new
                    );
                    if old != GlueState::On && new == GlueState::On {
                        entry.1[k] += 1;
                    }
                    prop_assert!(entry.1[k] <= 1, "tile {} slot {} entered ON twice", id, k);
                    prop_assert!(old != GlueState::Off || new == GlueState::Off);
                }
                entry.0 = t.glues.to_vec();
            }
        }
        Ok(())
    }

    fn check_piece(&self, p: &Piece) -> Result<(), TestCaseError> {
        let ts = &self.system.tileset;
        let (c, h) = p.asm.canonical_form();
        prop_assert_eq!(c.canonical_form(), (c.clone(), h));
        if self.system.temperature == 1 {
            let breakable = !enumerate_breaks(ts, &p.asm, 1, DEFAULT_BREAK_BOUND).is_empty();
            prop_assert_eq!(breakable, !binding_graph(ts, &p.asm).is_connected());
        }
        Ok(())
    }
}

pub fn run_case(system: &System, seed: u64, moves: &Cell<usize>) -> Result<(), TestCaseError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut w = World::new(system);
    for _ in 0..STEPS_PER_CASE {
        let mut ms = w.moves();
        if ms.is_empty() {
            break;
        }
        let mv = ms.swap_remove(rng.gen_range(0..ms.len()));
        let pieces = w.apply(mv)?;
        moves.set(moves.get() + 1);
        w.audit(&pieces)?;
        for p in &pieces {
            w.check_piece(p)?;
        }
        w.pool.extend(pieces);
    }
    Ok(())
}

/// Random walks over `cases` random systems; returns the number of moves
/// checked.
pub fn random_walks(cases: u32) -> Result<usize, String> {
    let moves = Cell::new(0);
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(system_strategy(), any::<u64>()), |(s, seed)| {
            run_case(&s, seed, &moves)
        })
        .map_err(|e| e.to_string())?;
    Ok(moves.get())
}

/// Two runs with the same seed produce identical traces that replay.
pub fn same_seed_same_trace(system: &System, seed: u64) -> Result<(), TestCaseError> {
    let cfg = StochasticConfig {
        seed,
        max_steps: 60,
        fairness_window: 10,
    };
    let a = run_stochastic(system, cfg).unwrap();
    let b = run_stochastic(system, cfg).unwrap();
    prop_assert_eq!(&a, &b);
    prop_assert!(a.replay(system).is_ok());
    Ok(())
}

pub fn determinism_cases(cases: u32) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner
        .run(&(system_strategy(), any::<u64>()), |(s, seed)| {
            same_seed_same_trace(&s, seed)
        })
        .map_err(|e| e.to_string())
}
