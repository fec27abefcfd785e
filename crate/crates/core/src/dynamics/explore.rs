//! Breadth-first closure of the initial set under all four transitions,
//! deduplicated up to translation.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::{Assembly, GlueId, PendingAction, Pos, Side, System};

use super::bonds::{break_apart, enumerate_breaks};
use super::transitions::{apply_pending_action, combine, exposed_glues, interface_strength};
use super::DEFAULT_BREAK_BOUND;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExploreConfig {
    /// Produced assemblies larger than this are not recorded.
    pub max_assembly_size: usize,
    /// Cap on distinct assemblies recorded.
    pub max_states: usize,
    pub break_exhaustive_bound: usize,
}

impl Default for ExploreConfig {
    fn default() -> Self {
        ExploreConfig {
            max_assembly_size: 16,
            max_states: 100_000,
            break_exhaustive_bound: DEFAULT_BREAK_BOUND,
        }
    }
}

/// How an explored assembly was first produced (indices into the list).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Derivation {
    Initial {
        index: usize,
    },
    Combine {
        a: usize,
        b: usize,
        offset: (i32, i32),
    },
    /// `part` is the kept side of the split of `from`.
    Break {
        from: usize,
        part: Vec<Pos>,
        keep_part: bool,
    },
    Action {
        from: usize,
        pos: Pos,
        action: PendingAction,
    },
}

/// Explored assemblies are held in their compact encoding; use
/// [`Exploration::assembly`] to materialize one.
#[derive(Debug, Clone)]
pub struct Exploration {
    encoded: Vec<Box<[u8]>>,
    pub derivations: Vec<Derivation>,
    /// Indices with no enabled move relative to the explored set.
    pub terminal: Vec<usize>,
    /// Some produced assembly exceeded `max_assembly_size`.
    pub size_truncated: bool,
    /// The state cap was reached before the closure completed.
    pub state_truncated: bool,
    /// Starting assemblies, indexed by [`Derivation::Initial`].
    pub roots: Vec<Assembly>,
}

impl Exploration {
    pub fn truncated(&self) -> bool {
        self.size_truncated || self.state_truncated
    }

    pub fn len(&self) -> usize {
        self.encoded.len()
    }

    pub fn is_empty(&self) -> bool {
        self.encoded.is_empty()
    }

    pub fn assembly(&self, i: usize) -> Assembly {
        Assembly::decode(&self.encoded[i]).expect("well-formed encoding")
    }

    pub fn assemblies(&self) -> impl Iterator<Item = Assembly> + '_ {
        (0..self.len()).map(|i| self.assembly(i))
    }

    pub fn terminal_assemblies(&self) -> impl Iterator<Item = Assembly> + '_ {
        self.terminal.iter().map(|&i| self.assembly(i))
    }

    pub fn is_terminal(&self, i: usize) -> bool {
        self.terminal.binary_search(&i).is_ok()
    }

    pub fn index_of(&self, a: &Assembly) -> Option<usize> {
        let c = a.canonical().encode();
        self.encoded.iter().position(|x| **x == *c)
    }

    /// Rebuilds assembly `i` by replaying its derivation chain.
    pub fn reconstruct(&self, system: &System, i: usize) -> Result<Assembly> {
        let ts = &system.tileset;
        let tau = system.temperature;
        let out = match self.derivations.get(i) {
            None => return Err(StamError::InvalidParameter(format!("no assembly {i}"))),
            Some(Derivation::Initial { index }) => self.roots[*index].clone(),
            Some(Derivation::Combine { a, b, offset }) => {
                let x = self.reconstruct(system, *a)?;
                let y = self.reconstruct(system, *b)?;
                combine(ts, &x, &y, *offset, tau)?
            }
            Some(Derivation::Break {
                from,
                part,
                keep_part,
            }) => {
                let x = self.reconstruct(system, *from)?;
                let part: BTreeSet<Pos> = part.iter().copied().collect();
                let (b, c) = break_apart(ts, &x, &part, tau)?;
                if *keep_part {
                    b
                } else {
                    c
                }
            }
            Some(Derivation::Action { from, pos, action }) => {
                let x = self.reconstruct(system, *from)?;
                apply_pending_action(ts, &x, *pos, *action)?
            }
        };
        Ok(out.canonical())
    }
}

type GlueIndex = HashMap<(GlueId, Side), Vec<(usize, Pos)>>;

struct Explorer<'a> {
    system: &'a System,
    roots: Vec<Assembly>,
    config: ExploreConfig,
    encoded: Vec<Box<[u8]>>,
    derivations: Vec<Derivation>,
    seen: HashMap<u64, Vec<u32>>,
    exposed: Vec<Vec<(GlueId, Side, Pos)>>,
    movable: Vec<bool>,
    size_truncated: bool,
    state_truncated: bool,
}

impl<'a> Explorer<'a> {
    fn add(&mut self, a: Assembly, d: Derivation) -> Option<usize> {
        if a.len() > self.config.max_assembly_size {
            self.size_truncated = true;
            return None;
        }
        let c = a.canonical();
        let bytes = c.encode();
        let h = {
            let mut s = std::collections::hash_map::DefaultHasher::new();
            bytes.hash(&mut s);
            s.finish()
        };
        if let Some(ids) = self.seen.get(&h) {
            if let Some(&i) = ids.iter().find(|&&i| *self.encoded[i as usize] == *bytes) {
                return Some(i as usize);
            }
        }
        if self.encoded.len() >= self.config.max_states {
            self.state_truncated = true;
            return None;
        }
        let i = self.encoded.len();
        let ts = &self.system.tileset;
        self.exposed.push(
            exposed_glues(ts, &c)
                .into_iter()
                .map(|e| (e.glue, e.side, e.pos))
                .collect(),
        );
        self.seen.entry(h).or_default().push(i as u32);
        self.encoded.push(bytes.into_boxed_slice());
        self.derivations.push(d);
        self.movable.push(false);
        Some(i)
    }

    /// Partners `j` in the index (with offsets for `j` relative to `i`) whose
    /// interface with `i` reaches the temperature.
    fn combinations(&self, index: &GlueIndex, i: usize, a: &Assembly) -> Vec<(usize, (i32, i32))> {
        let ts = &self.system.tileset;
        let tau = self.system.temperature;
        let mut cands: BTreeSet<(usize, (i32, i32))> = BTreeSet::new();
        for &(g, side, p) in &self.exposed[i] {
            if let Some(entries) = index.get(&(g, side.opposite())) {
                let t = p.step(side);
                for &(j, q) in entries {
                    cands.insert((j, (t.x - q.x, t.y - q.y)));
                }
            }
        }
        let mut partner: Option<(usize, Assembly)> = None;
        cands
            .into_iter()
            .filter(|&(j, v)| {
                if partner.as_ref().map(|p| p.0) != Some(j) {
                    partner = Some((j, Assembly::decode(&self.encoded[j]).expect("encoding")));
                }
                let b = &partner.as_ref().expect("partner").1;
                matches!(interface_strength(ts, a, b, v), Ok(s) if s >= tau)
            })
            .collect()
    }

    fn run(mut self) -> Exploration {
        let ts = self.system.tileset.clone();
        let tau = self.system.temperature;
        let mut queue = VecDeque::new();
        for (k, a) in self.roots.clone().into_iter().enumerate() {
            if let Some(i) = self.add(a, Derivation::Initial { index: k }) {
                queue.push_back(i);
            }
        }
        let mut index: GlueIndex = HashMap::new();
        let mut processed = vec![];
        while let Some(i) = queue.pop_front() {
            if processed.len() <= i {
                processed.resize(i + 1, false);
            }
            if processed[i] {
                continue;
            }
            processed[i] = true;
            let a = Assembly::decode(&self.encoded[i]).expect("encoding");
            let mut produced: Vec<(Assembly, Derivation)> = Vec::new();
            for (p, t) in &a.tiles {
                let mut acts: Vec<PendingAction> = t.pending.clone();
                acts.dedup();
                for act in acts {
                    if let Ok(b) = apply_pending_action(&ts, &a, *p, act) {
                        produced.push((
                            b,
                            Derivation::Action {
                                from: i,
                                pos: *p,
                                action: act,
                            },
                        ));
                    }
                }
            }
            for part in enumerate_breaks(&ts, &a, tau, self.config.break_exhaustive_bound) {
                if let Ok((b, c)) = break_apart(&ts, &a, &part, tau) {
                    let part: Vec<Pos> = part.into_iter().collect();
                    produced.push((
                        b,
                        Derivation::Break {
                            from: i,
                            part: part.clone(),
                            keep_part: true,
                        },
                    ));
                    produced.push((
                        c,
                        Derivation::Break {
                            from: i,
                            part,
                            keep_part: false,
                        },
                    ));
                }
            }
            if !produced.is_empty() {
                self.movable[i] = true;
            }
            for &(g, side, p) in &self.exposed[i] {
                index.entry((g, side)).or_default().push((i, p));
            }
            for (j, v) in self.combinations(&index, i, &a) {
                self.movable[i] = true;
                self.movable[j] = true;
                let b = Assembly::decode(&self.encoded[j]).expect("encoding");
                if let Ok(c) = combine(&ts, &a, &b, v, tau) {
                    produced.push((
                        c,
                        Derivation::Combine {
                            a: i,
                            b: j,
                            offset: v,
                        },
                    ));
                }
            }
            for (b, d) in produced {
                if let Some(k) = self.add(b, d) {
                    if k >= processed.len() || !processed[k] {
                        queue.push_back(k);
                    }
                }
            }
        }
        // unprocessed assemblies (state cap) still need a combination check
        let n = self.encoded.len();
        if processed.len() < n || processed.iter().any(|p| !p) {
            processed.resize(n, false);
            let mut full: GlueIndex = HashMap::new();
            for j in 0..n {
                for &(g, side, p) in &self.exposed[j] {
                    full.entry((g, side)).or_default().push((j, p));
                }
            }
            for i in (0..n).filter(|&i| !processed[i]) {
                let a = Assembly::decode(&self.encoded[i]).expect("encoding");
                if a.has_pending()
                    || !enumerate_breaks(&ts, &a, tau, self.config.break_exhaustive_bound)
                        .is_empty()
                    || !self.combinations(&full, i, &a).is_empty()
                {
                    self.movable[i] = true;
                }
            }
        }
        let terminal = (0..n).filter(|&i| !self.movable[i]).collect();
        Exploration {
            encoded: self.encoded,
            derivations: self.derivations,
            terminal,
            size_truncated: self.size_truncated,
            state_truncated: self.state_truncated,
            roots: self.roots,
        }
    }
}

/// Bounded breadth-first exploration of the producible set.
pub fn explore(system: &System, config: ExploreConfig) -> Exploration {
    explore_from(system, system.initial.clone(), config)
}

/// Like [`explore`], but closes over `roots` (each available in unbounded
/// supply, pending actions included) instead of the system's initial set.
pub fn explore_from(system: &System, roots: Vec<Assembly>, config: ExploreConfig) -> Exploration {
    Explorer {
        system,
        roots,
        config,
        encoded: Vec::new(),
        derivations: Vec::new(),
        seen: HashMap::new(),
        exposed: Vec::new(),
        movable: Vec::new(),
        size_truncated: false,
        state_truncated: false,
    }
    .run()
}
