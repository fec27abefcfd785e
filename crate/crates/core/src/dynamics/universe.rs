//! A test-tube universe: a finite multiset of produced assemblies plus an
//! unbounded supply of every initial assembly.

use std::collections::{BTreeMap, BTreeSet};
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::{
    Action, ActionTarget, Assembly, GlueId, PendingAction, Pos, Side, Switch, System,
};

use super::bonds::{break_apart, enumerate_breaks};
use super::transitions::{apply_pending_action, combine, exposed_glues, interface_strength};
use super::DEFAULT_BREAK_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct MemberId(pub u64);

/// Either a fresh copy of an initial assembly or a universe member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Operand {
    Supply(usize),
    Member(MemberId),
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Move {
    /// `b` translated by `offset` (in `a`'s frame) joins `a`.
    Combine {
        a: Operand,
        b: Operand,
        offset: (i32, i32),
    },
    /// Tiles at `part` split from the rest of the member.
    Break { member: MemberId, part: Vec<Pos> },
    /// Execute one pending glue or label action.
    Action {
        member: MemberId,
        pos: Pos,
        action: PendingAction,
    },
}

impl Move {
    pub fn kind(&self) -> &'static str {
        match self {
            Move::Combine { .. } => "combine",
            Move::Break { .. } => "break",
            Move::Action { action, .. } => match action.slot {
                crate::model::Slot::Glue(_) => "glue_action",
                crate::model::Slot::Label(_) => "label_action",
            },
        }
    }
}

/// Serializable form of a move (actions named rather than slot-indexed).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MoveRecord {
    Combine {
        a: Operand,
        b: Operand,
        offset: (i32, i32),
    },
    Break {
        member: MemberId,
        part: Vec<Pos>,
    },
    GlueAction {
        member: MemberId,
        pos: Pos,
        side: Side,
        target: String,
        set: Switch,
    },
    LabelAction {
        member: MemberId,
        pos: Pos,
        target: String,
        set: Switch,
    },
}

#[derive(Debug, Clone)]
struct Member {
    asm: Arc<Assembly>,
    actions: Vec<(Pos, PendingAction)>,
    breaks: Vec<Vec<Pos>>,
    exposed: Vec<(GlueId, Side, Pos)>,
}

/// Result of applying one move.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Applied {
    pub removed: Vec<MemberId>,
    pub added: Vec<MemberId>,
    /// Tiles drawn from the unbounded supply.
    pub consumed: usize,
}

#[derive(Debug, Clone)]
pub struct Universe {
    system: System,
    members: BTreeMap<MemberId, Member>,
    next_id: u64,
    /// exposed ON glue index: (glue, side) -> operands exposing it, with position
    index: BTreeMap<(GlueId, Side), BTreeSet<(Operand, Pos)>>,
    /// valid combinations keyed by ordered operand pair
    combos: BTreeMap<(Operand, Operand), Vec<(i32, i32)>>,
    supply_exposed: Vec<Vec<(GlueId, Side, Pos)>>,
    pub break_bound: usize,
    allow_self_combination: bool,
}

impl Universe {
    /// Empty universe backed by the system's unbounded supply.
    pub fn new(system: &System) -> Self {
        let ts = &system.tileset;
        let supply_exposed: Vec<Vec<(GlueId, Side, Pos)>> = system
            .initial
            .iter()
            .map(|a| {
                exposed_glues(ts, a)
                    .into_iter()
                    .map(|e| (e.glue, e.side, e.pos))
                    .collect()
            })
            .collect();
        let mut u = Universe {
            system: system.clone(),
            members: BTreeMap::new(),
            next_id: 0,
            index: BTreeMap::new(),
            combos: BTreeMap::new(),
            supply_exposed,
            break_bound: DEFAULT_BREAK_BOUND,
            allow_self_combination: false,
        };
        for i in 0..system.initial.len() {
            if system.is_seed(i) {
                u.add_member(system.initial[i].clone());
            } else {
                u.register(Operand::Supply(i));
            }
        }
        u
    }

    /// Universe that additionally holds one copy of each given assembly.
    pub fn with_members(system: &System, members: impl IntoIterator<Item = Assembly>) -> Self {
        let mut u = Universe::new(system);
        for a in members {
            u.add_member(a);
        }
        u
    }

    pub fn system(&self) -> &System {
        &self.system
    }

    pub fn members(&self) -> impl Iterator<Item = (MemberId, &Assembly)> + '_ {
        self.members.iter().map(|(id, m)| (*id, m.asm.as_ref()))
    }

    pub fn member(&self, id: MemberId) -> Option<&Assembly> {
        self.members.get(&id).map(|m| m.asm.as_ref())
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    fn operand(&self, o: Operand) -> Option<&Assembly> {
        match o {
            Operand::Supply(i) if self.system.is_seed(i) => None,
            Operand::Supply(i) => self.system.initial.get(i),
            Operand::Member(id) => self.member(id),
        }
    }

    fn exposed_of(&self, o: Operand) -> &[(GlueId, Side, Pos)] {
        match o {
            Operand::Supply(i) => &self.supply_exposed[i],
            Operand::Member(id) => &self.members[&id].exposed,
        }
    }

    /// Adds an assembly (canonicalized) and returns its id.
    pub fn add_member(&mut self, a: Assembly) -> MemberId {
        let ts = self.system.tileset.clone();
        let asm = a.canonical();
        let id = MemberId(self.next_id);
        self.next_id += 1;
        let actions = asm
            .tiles
            .iter()
            .flat_map(|(p, t)| t.pending.iter().map(move |a| (*p, *a)))
            .collect();
        let breaks = enumerate_breaks(&ts, &asm, self.system.temperature, self.break_bound)
            .into_iter()
            .map(|s| s.into_iter().collect())
            .collect();
        let exposed = exposed_glues(&ts, &asm)
            .into_iter()
            .map(|e| (e.glue, e.side, e.pos))
            .collect();
        self.members.insert(
            id,
            Member {
                asm: Arc::new(asm),
                actions,
                breaks,
                exposed,
            },
        );
        self.register(Operand::Member(id));
        id
    }

    fn register(&mut self, o: Operand) {
        let ts = self.system.tileset.clone();
        let tau = self.system.temperature;
        let exposed = self.exposed_of(o).to_vec();
        let mut candidates: BTreeSet<(Operand, (i32, i32))> = BTreeSet::new();
        for &(g, side, p) in &exposed {
            if let Some(entries) = self.index.get(&(g, side.opposite())) {
                let target = p.step(side);
                for &(other, q) in entries {
                    candidates.insert((other, (target.x - q.x, target.y - q.y)));
                }
            }
        }
        // self pairs: only supply may combine with a copy of itself here
        let self_ok = matches!(o, Operand::Supply(_)) || self.allow_self_combination;
        if self_ok {
            let mut own: BTreeMap<(GlueId, Side), Vec<Pos>> = BTreeMap::new();
            for &(g, side, p) in &exposed {
                own.entry((g, side)).or_default().push(p);
            }
            for &(g, side, p) in &exposed {
                if let Some(qs) = own.get(&(g, side.opposite())) {
                    let target = p.step(side);
                    for q in qs {
                        candidates.insert((o, (target.x - q.x, target.y - q.y)));
                    }
                }
            }
        }
        let a = self.operand(o).expect("registered operand").clone();
        for (other, v) in candidates {
            let b = self.operand(other).expect("indexed operand");
            if !matches!(interface_strength(&ts, &a, b, v), Ok(s) if s >= tau) {
                continue;
            }
            let (key, off) = if o <= other {
                ((o, other), v)
            } else {
                ((other, o), (-v.0, -v.1))
            };
            let list = self.combos.entry(key).or_default();
            if !list.contains(&off) {
                list.push(off);
                list.sort_unstable();
            }
        }
        for &(g, side, p) in &exposed {
            self.index.entry((g, side)).or_default().insert((o, p));
        }
    }

    fn remove_member(&mut self, id: MemberId) -> Option<Arc<Assembly>> {
        let m = self.members.remove(&id)?;
        let o = Operand::Member(id);
        for &(g, side, p) in &m.exposed {
            if let Some(set) = self.index.get_mut(&(g, side)) {
                set.remove(&(o, p));
                if set.is_empty() {
                    self.index.remove(&(g, side));
                }
            }
        }
        self.combos.retain(|(a, b), _| *a != o && *b != o);
        Some(m.asm)
    }

    /// All enabled moves in a deterministic order.
    pub fn moves(&self) -> Vec<Move> {
        let mut out = Vec::new();
        for (&id, m) in &self.members {
            for &(pos, action) in &m.actions {
                out.push(Move::Action {
                    member: id,
                    pos,
                    action,
                });
            }
            for part in &m.breaks {
                out.push(Move::Break {
                    member: id,
                    part: part.clone(),
                });
            }
        }
        for (&(a, b), offs) in &self.combos {
            for &offset in offs {
                out.push(Move::Combine { a, b, offset });
            }
        }
        out
    }

    pub fn apply(&mut self, mv: &Move) -> Result<Applied> {
        let ts = self.system.tileset.clone();
        let tau = self.system.temperature;
        let mut applied = Applied::default();
        match mv {
            Move::Action {
                member,
                pos,
                action,
            } => {
                let a = self
                    .member(*member)
                    .ok_or(StamError::InvalidParameter(format!(
                        "no member {}",
                        member.0
                    )))?;
                let next = apply_pending_action(&ts, a, *pos, *action)?;
                self.remove_member(*member);
                applied.removed.push(*member);
                applied.added.push(self.add_member(next));
            }
            Move::Break { member, part } => {
                let a = self
                    .member(*member)
                    .ok_or(StamError::InvalidParameter(format!(
                        "no member {}",
                        member.0
                    )))?;
                let part: BTreeSet<Pos> = part.iter().copied().collect();
                let (b, c) = break_apart(&ts, a, &part, tau)?;
                self.remove_member(*member);
                applied.removed.push(*member);
                applied.added.push(self.add_member(b));
                applied.added.push(self.add_member(c));
            }
            Move::Combine { a, b, offset } => {
                let (Some(x), Some(y)) = (self.operand(*a), self.operand(*b)) else {
                    return Err(StamError::InvalidParameter("unknown operand".into()));
                };
                if a == b && matches!(a, Operand::Member(_)) && !self.allow_self_combination {
                    return Err(StamError::InvalidParameter(
                        "member cannot combine with itself".into(),
                    ));
                }
                let c = combine(&ts, x, y, *offset, tau)?;
                for o in [a, b] {
                    match o {
                        Operand::Supply(i) => applied.consumed += self.system.initial[*i].len(),
                        Operand::Member(id) => {
                            if !applied.removed.contains(id) {
                                self.remove_member(*id);
                                applied.removed.push(*id);
                            }
                        }
                    }
                }
                applied.added.push(self.add_member(c));
            }
        }
        Ok(applied)
    }

    pub fn record(&self, mv: &Move) -> MoveRecord {
        match mv {
            Move::Combine { a, b, offset } => MoveRecord::Combine {
                a: *a,
                b: *b,
                offset: *offset,
            },
            Move::Break { member, part } => MoveRecord::Break {
                member: *member,
                part: part.clone(),
            },
            Move::Action {
                member,
                pos,
                action,
            } => {
                let kind = self
                    .member(*member)
                    .and_then(|a| a.get(*pos))
                    .map(|t| t.kind);
                let described = kind.map(|k| self.system.tileset.describe(k, *action));
                match described {
                    Some(Action {
                        target: ActionTarget::Glue { side, glue_type },
                        new_state,
                    }) => MoveRecord::GlueAction {
                        member: *member,
                        pos: *pos,
                        side,
                        target: glue_type,
                        set: new_state,
                    },
                    Some(Action {
                        target: ActionTarget::Label(l),
                        new_state,
                    }) => MoveRecord::LabelAction {
                        member: *member,
                        pos: *pos,
                        target: l,
                        set: new_state,
                    },
                    None => MoveRecord::Break {
                        member: *member,
                        part: Vec::new(),
                    },
                }
            }
        }
    }

    /// Inverse of [`Universe::record`] against the current state.
    pub fn resolve(&self, rec: &MoveRecord) -> Result<Move> {
        let ts = &self.system.tileset;
        let action_move = |member: MemberId, pos: Pos, action: Action| -> Result<Move> {
            let tile = self
                .member(member)
                .and_then(|a| a.get(pos))
                .ok_or(StamError::Unoccupied(pos))?;
            let action = ts
                .resolve(tile.kind, &action)
                .ok_or(StamError::NotPending(pos))?;
            Ok(Move::Action {
                member,
                pos,
                action,
            })
        };
        match rec {
            MoveRecord::Combine { a, b, offset } => Ok(Move::Combine {
                a: *a,
                b: *b,
                offset: *offset,
            }),
            MoveRecord::Break { member, part } => Ok(Move::Break {
                member: *member,
                part: part.clone(),
            }),
            MoveRecord::GlueAction {
                member,
                pos,
                side,
                target,
                set,
            } => action_move(*member, *pos, Action::glue(*side, target.clone(), *set)),
            MoveRecord::LabelAction {
                member,
                pos,
                target,
                set,
            } => action_move(*member, *pos, Action::label(target.clone(), *set)),
        }
    }

    /// Hash over the multiset of member assemblies (ids excluded).
    pub fn state_hash(&self) -> u64 {
        let mut all: Vec<&Assembly> = self.members.values().map(|m| m.asm.as_ref()).collect();
        all.sort();
        let mut h = std::collections::hash_map::DefaultHasher::new();
        all.hash(&mut h);
        h.finish()
    }
}

/// All moves enabled in `u` at the system temperature.
pub fn enumerate_moves(u: &Universe) -> Vec<Move> {
    u.moves()
}
