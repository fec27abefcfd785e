//! Static data model: glues, active tile types, tile instances, assemblies
//! and systems.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

/// State of an active glue or label.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GlueState {
    Latent,
    On,
    Off,
}

/// Target state of a queued action. `Latent` is never a target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Switch {
    On,
    Off,
}

impl From<Switch> for GlueState {
    fn from(s: Switch) -> Self {
        match s {
            Switch::On => GlueState::On,
            Switch::Off => GlueState::Off,
        }
    }
}

/// True iff `from -> to` is one of LATENT->ON, LATENT->OFF, ON->OFF.
pub fn glue_transition_valid(from: GlueState, to: GlueState) -> bool {
    matches!(
        (from, to),
        (GlueState::Latent, GlueState::On)
            | (GlueState::Latent, GlueState::Off)
            | (GlueState::On, GlueState::Off)
    )
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Side {
    N,
    E,
    S,
    W,
}

impl Side {
    pub const ALL: [Side; 4] = [Side::N, Side::E, Side::S, Side::W];

    pub fn opposite(self) -> Side {
        match self {
            Side::N => Side::S,
            Side::S => Side::N,
            Side::E => Side::W,
            Side::W => Side::E,
        }
    }

    pub fn offset(self) -> (i32, i32) {
        match self {
            Side::N => (0, 1),
            Side::E => (1, 0),
            Side::S => (0, -1),
            Side::W => (-1, 0),
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn parse(s: &str) -> Option<Side> {
        match s {
            "N" | "n" => Some(Side::N),
            "E" | "e" => Some(Side::E),
            "S" | "s" => Some(Side::S),
            "W" | "w" => Some(Side::W),
            _ => None,
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self:?}")
    }
}

/// Lattice coordinate.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default, Serialize, Deserialize,
)]
pub struct Pos {
    pub x: i32,
    pub y: i32,
}

impl Pos {
    pub const fn new(x: i32, y: i32) -> Self {
        Pos { x, y }
    }

    pub fn step(self, side: Side) -> Pos {
        let (dx, dy) = side.offset();
        Pos::new(self.x + dx, self.y + dy)
    }

    pub fn translate(self, v: (i32, i32)) -> Pos {
        Pos::new(self.x + v.0, self.y + v.1)
    }

    /// Side of `self` that faces `other`, if the two are lattice neighbours.
    pub fn side_towards(self, other: Pos) -> Option<Side> {
        Side::ALL.into_iter().find(|s| self.step(*s) == other)
    }
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Glue {
    pub glue_type: String,
    pub strength: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActiveGlue {
    pub glue: Glue,
    pub state: GlueState,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ActiveLabel {
    pub label: String,
    pub state: GlueState,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ActionTarget {
    Glue { side: Side, glue_type: String },
    Label(String),
}

/// A glue or label action produced by a transition function.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Action {
    pub target: ActionTarget,
    pub new_state: Switch,
}

impl Action {
    pub fn glue(side: Side, glue_type: impl Into<String>, new_state: Switch) -> Self {
        Action {
            target: ActionTarget::Glue {
                side,
                glue_type: glue_type.into(),
            },
            new_state,
        }
    }

    pub fn glue_on(side: Side, glue_type: impl Into<String>) -> Self {
        Self::glue(side, glue_type, Switch::On)
    }

    pub fn glue_off(side: Side, glue_type: impl Into<String>) -> Self {
        Self::glue(side, glue_type, Switch::Off)
    }

    pub fn label(label: impl Into<String>, new_state: Switch) -> Self {
        Action {
            target: ActionTarget::Label(label.into()),
            new_state,
        }
    }
}

/// Declarative active tile type: per-side glues, labels and transition
/// function. Duplicates are representable so that validation can report them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TileType {
    pub name: String,
    pub glues: [Vec<ActiveGlue>; 4],
    pub labels: Vec<ActiveLabel>,
    pub delta: BTreeMap<(Side, String), Vec<Action>>,
}

impl TileType {
    pub fn new(name: impl Into<String>) -> Self {
        TileType {
            name: name.into(),
            glues: Default::default(),
            labels: Vec::new(),
            delta: BTreeMap::new(),
        }
    }

    /// Adds a strength-1 glue.
    pub fn glue(self, side: Side, glue_type: impl Into<String>, state: GlueState) -> Self {
        self.glue_with_strength(side, glue_type, 1, state)
    }

    pub fn glue_with_strength(
        mut self,
        side: Side,
        glue_type: impl Into<String>,
        strength: u32,
        state: GlueState,
    ) -> Self {
        self.glues[side.index()].push(ActiveGlue {
            glue: Glue {
                glue_type: glue_type.into(),
                strength,
            },
            state,
        });
        self
    }

    /// Adds the glue unless one of the same type already sits on that side.
    pub fn ensure_glue(mut self, side: Side, glue_type: &str, state: GlueState) -> Self {
        if let Some(g) = self.glues[side.index()]
            .iter_mut()
            .find(|g| g.glue.glue_type == glue_type)
        {
            if state == GlueState::On {
                g.state = GlueState::On;
            }
            self
        } else {
            self.glue(side, glue_type, state)
        }
    }

    pub fn label(mut self, label: impl Into<String>, state: GlueState) -> Self {
        self.labels.push(ActiveLabel {
            label: label.into(),
            state,
        });
        self
    }

    /// Appends actions fired when `glue_type` on `side` binds.
    pub fn on_bind(
        mut self,
        side: Side,
        glue_type: impl Into<String>,
        actions: impl IntoIterator<Item = Action>,
    ) -> Self {
        let entry = self.delta.entry((side, glue_type.into())).or_default();
        for a in actions {
            if !entry.contains(&a) {
                entry.push(a);
            }
        }
        self
    }

    pub fn glues_on(&self, side: Side) -> &[ActiveGlue] {
        &self.glues[side.index()]
    }

    pub fn has_glue(&self, side: Side, glue_type: &str) -> bool {
        self.glues[side.index()]
            .iter()
            .any(|g| g.glue.glue_type == glue_type)
    }

    /// Maximum number of glues on a single face.
    pub fn max_glues_per_side(&self) -> usize {
        self.glues.iter().map(Vec::len).max().unwrap_or(0)
    }
}

pub type GlueId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TileTypeId(pub u16);

/// Index of a glue or label slot within a tile type.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    Glue(u16),
    Label(u16),
}

/// A queued state change on one slot of a tile instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PendingAction {
    pub slot: Slot,
    pub state: Switch,
}

#[derive(Debug, Clone)]
pub struct GlueSlot {
    pub side: Side,
    pub glue: GlueId,
    pub strength: u32,
    pub init: GlueState,
}

/// Slot-indexed form of a [`TileType`] used by the simulator.
#[derive(Debug, Clone)]
pub struct CompiledType {
    pub slots: Vec<GlueSlot>,
    pub by_side: [Vec<u16>; 4],
    pub label_names: Vec<String>,
    pub label_init: Vec<GlueState>,
    /// Indexed by glue slot.
    pub delta: Vec<Vec<PendingAction>>,
}

impl CompiledType {
    /// Slot of `glue` on `side`, if present.
    pub fn find(&self, side: Side, glue: GlueId) -> Option<u16> {
        self.by_side[side.index()]
            .iter()
            .copied()
            .find(|&s| self.slots[s as usize].glue == glue)
    }
}

/// Interned, compiled collection of tile types. Structural problems found
/// while compiling (unresolvable transition targets) are kept as violations.
#[derive(Debug, Clone)]
pub struct TileSet {
    types: Vec<TileType>,
    compiled: Vec<CompiledType>,
    glue_names: Vec<String>,
    glue_ids: HashMap<String, GlueId>,
    by_name: HashMap<String, TileTypeId>,
    compile_violations: Vec<String>,
}

impl TileSet {
    pub fn new(types: Vec<TileType>) -> Self {
        let mut glue_names = Vec::new();
        let mut glue_ids: HashMap<String, GlueId> = HashMap::new();
        let mut intern = |name: &str| -> GlueId {
            if let Some(&id) = glue_ids.get(name) {
                return id;
            }
            let id = glue_names.len() as GlueId;
            glue_names.push(name.to_string());
            glue_ids.insert(name.to_string(), id);
            id
        };
        let mut compiled = Vec::with_capacity(types.len());
        let mut violations = Vec::new();
        let mut by_name = HashMap::new();
        for (i, t) in types.iter().enumerate() {
            if by_name
                .insert(t.name.clone(), TileTypeId(i as u16))
                .is_some()
            {
                violations.push(format!("duplicate tile type name `{}`", t.name));
            }
            let mut slots = Vec::new();
            let mut slot_names: Vec<(Side, &str)> = Vec::new();
            let mut by_side: [Vec<u16>; 4] = Default::default();
            for side in Side::ALL {
                for g in &t.glues[side.index()] {
                    by_side[side.index()].push(slots.len() as u16);
                    slot_names.push((side, g.glue.glue_type.as_str()));
                    slots.push(GlueSlot {
                        side,
                        glue: intern(&g.glue.glue_type),
                        strength: g.glue.strength,
                        init: g.state,
                    });
                }
            }
            let label_names: Vec<String> = t.labels.iter().map(|l| l.label.clone()).collect();
            let label_init = t.labels.iter().map(|l| l.state).collect();
            let mut delta = vec![Vec::new(); slots.len()];
            let find_slot = |side: Side, name: &str| -> Option<u16> {
                slot_names
                    .iter()
                    .position(|&(s, n)| s == side && n == name)
                    .map(|i| i as u16)
            };
            for ((side, gname), actions) in &t.delta {
                let Some(src) = find_slot(*side, gname) else {
                    violations.push(format!(
                        "tile `{}`: transition keyed on ({side}, {gname}) but no such glue on that side",
                        t.name
                    ));
                    continue;
                };
                for a in actions {
                    let slot = match &a.target {
                        ActionTarget::Glue { side, glue_type } => {
                            find_slot(*side, glue_type).map(Slot::Glue)
                        }
                        ActionTarget::Label(l) => label_names
                            .iter()
                            .position(|x| x == l)
                            .map(|i| Slot::Label(i as u16)),
                    };
                    match slot {
                        Some(slot) => delta[src as usize].push(PendingAction {
                            slot,
                            state: a.new_state,
                        }),
                        None => violations.push(format!(
                            "tile `{}`: action {:?} targets a missing glue or label",
                            t.name, a.target
                        )),
                    }
                }
            }
            compiled.push(CompiledType {
                slots,
                by_side,
                label_names,
                label_init,
                delta,
            });
        }
        TileSet {
            types,
            compiled,
            glue_names,
            glue_ids,
            by_name,
            compile_violations: violations,
        }
    }

    pub fn types(&self) -> &[TileType] {
        &self.types
    }

    pub fn len(&self) -> usize {
        self.types.len()
    }

    pub fn is_empty(&self) -> bool {
        self.types.is_empty()
    }

    pub fn tile_type(&self, id: TileTypeId) -> &TileType {
        &self.types[id.0 as usize]
    }

    pub fn compiled(&self, id: TileTypeId) -> &CompiledType {
        &self.compiled[id.0 as usize]
    }

    pub fn id(&self, name: &str) -> Option<TileTypeId> {
        self.by_name.get(name).copied()
    }

    pub fn glue_id(&self, name: &str) -> Option<GlueId> {
        self.glue_ids.get(name).copied()
    }

    pub fn glue_name(&self, id: GlueId) -> &str {
        &self.glue_names[id as usize]
    }

    pub fn compile_violations(&self) -> &[String] {
        &self.compile_violations
    }

    /// Fresh instance of a tile type in its initial state with empty Π.
    pub fn instantiate(&self, id: TileTypeId) -> Tile {
        let c = self.compiled(id);
        Tile {
            kind: id,
            glues: c.slots.iter().map(|s| s.init).collect(),
            labels: c.label_init.clone().into_boxed_slice(),
            pending: Vec::new(),
        }
    }

    /// Signal complexity: maximum glue count on any face of any type.
    pub fn signal_complexity(&self) -> usize {
        self.types
            .iter()
            .map(TileType::max_glues_per_side)
            .max()
            .unwrap_or(0)
    }

    /// Human-readable description of a pending action on a tile of type `id`.
    pub fn describe(&self, id: TileTypeId, a: PendingAction) -> Action {
        let c = self.compiled(id);
        match a.slot {
            Slot::Glue(s) => {
                let slot = &c.slots[s as usize];
                Action::glue(slot.side, self.glue_name(slot.glue), a.state)
            }
            Slot::Label(l) => Action::label(c.label_names[l as usize].clone(), a.state),
        }
    }

    /// Slot-level form of a declarative action on type `id`.
    pub fn resolve(&self, id: TileTypeId, a: &Action) -> Option<PendingAction> {
        let c = self.compiled(id);
        let slot = match &a.target {
            ActionTarget::Glue { side, glue_type } => {
                Slot::Glue(c.find(*side, self.glue_id(glue_type)?)?)
            }
            ActionTarget::Label(l) => {
                Slot::Label(c.label_names.iter().position(|x| x == l)? as u16)
            }
        };
        Some(PendingAction {
            slot,
            state: a.new_state,
        })
    }
}

/// One tile instance: its type plus live glue/label state and pending
/// multiset Π (kept sorted).
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Tile {
    pub kind: TileTypeId,
    pub glues: Box<[GlueState]>,
    pub labels: Box<[GlueState]>,
    pub pending: Vec<PendingAction>,
}

impl Tile {
    pub fn push_pending(&mut self, a: PendingAction) {
        let i = self.pending.partition_point(|p| *p <= a);
        self.pending.insert(i, a);
    }

    /// Removes one instance of `a` from Π; false if absent.
    pub fn take_pending(&mut self, a: PendingAction) -> bool {
        match self.pending.binary_search(&a) {
            Ok(i) => {
                self.pending.remove(i);
                true
            }
            Err(_) => false,
        }
    }

    pub fn slot_state(&self, slot: Slot) -> GlueState {
        match slot {
            Slot::Glue(i) => self.glues[i as usize],
            Slot::Label(i) => self.labels[i as usize],
        }
    }

    pub fn label_state(&self, ts: &TileSet, label: &str) -> Option<GlueState> {
        let c = ts.compiled(self.kind);
        c.label_names
            .iter()
            .position(|l| l == label)
            .map(|i| self.labels[i])
    }

    pub fn glue_state(&self, ts: &TileSet, side: Side, glue: &str) -> Option<GlueState> {
        let c = ts.compiled(self.kind);
        let slot = c.find(side, ts.glue_id(glue)?)?;
        Some(self.glues[slot as usize])
    }
}

/// Finite positioning of tile instances on the lattice.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Assembly {
    pub tiles: BTreeMap<Pos, Tile>,
}

impl Assembly {
    pub fn new() -> Self {
        Assembly::default()
    }

    pub fn singleton(tile: Tile) -> Self {
        let mut a = Assembly::new();
        a.tiles.insert(Pos::new(0, 0), tile);
        a
    }

    pub fn insert(&mut self, p: Pos, t: Tile) {
        self.tiles.insert(p, t);
    }

    pub fn get(&self, p: Pos) -> Option<&Tile> {
        self.tiles.get(&p)
    }

    pub fn len(&self) -> usize {
        self.tiles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tiles.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = Pos> + '_ {
        self.tiles.keys().copied()
    }

    pub fn translated(&self, v: (i32, i32)) -> Assembly {
        Assembly {
            tiles: self
                .tiles
                .iter()
                .map(|(p, t)| (p.translate(v), t.clone()))
                .collect(),
        }
    }

    /// Translation placing the lexicographically smallest position at the
    /// origin, and a hash over the full translated state.
    pub fn canonical_form(&self) -> (Assembly, u64) {
        let c = self.canonical();
        let h = c.state_hash();
        (c, h)
    }

    pub fn canonical(&self) -> Assembly {
        match self.tiles.keys().next() {
            Some(min) if (min.x, min.y) != (0, 0) => self.translated((-min.x, -min.y)),
            _ => self.clone(),
        }
    }

    pub fn state_hash(&self) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        self.hash(&mut h);
        h.finish()
    }

    pub fn has_pending(&self) -> bool {
        self.tiles.values().any(|t| !t.pending.is_empty())
    }

    pub fn count_type(&self, id: TileTypeId) -> usize {
        self.tiles.values().filter(|t| t.kind == id).count()
    }

    /// Bounding box `(min, max)`.
    pub fn bounds(&self) -> Option<(Pos, Pos)> {
        let mut it = self.tiles.keys();
        let first = *it.next()?;
        let (mut lo, mut hi) = (first, first);
        for p in it {
            lo.x = lo.x.min(p.x);
            lo.y = lo.y.min(p.y);
            hi.x = hi.x.max(p.x);
            hi.y = hi.y.max(p.y);
        }
        Some((lo, hi))
    }

    /// Compact self-contained byte encoding; equal assemblies encode equally.
    pub fn encode(&self) -> Vec<u8> {
        fn varint(out: &mut Vec<u8>, mut v: u64) {
            while v >= 0x80 {
                out.push(v as u8 | 0x80);
                v >>= 7;
            }
            out.push(v as u8);
        }
        fn zigzag(v: i32) -> u64 {
            ((v << 1) ^ (v >> 31)) as u32 as u64
        }
        fn states(out: &mut Vec<u8>, s: &[GlueState]) {
            varint(out, s.len() as u64);
            for chunk in s.chunks(4) {
                let mut b = 0u8;
                for (i, g) in chunk.iter().enumerate() {
                    b |= (*g as u8) << (2 * i);
                }
                out.push(b);
            }
        }
        let mut out = Vec::with_capacity(16 * self.tiles.len());
        varint(&mut out, self.tiles.len() as u64);
        for (p, t) in &self.tiles {
            varint(&mut out, zigzag(p.x));
            varint(&mut out, zigzag(p.y));
            varint(&mut out, t.kind.0 as u64);
            states(&mut out, &t.glues);
            states(&mut out, &t.labels);
            varint(&mut out, t.pending.len() as u64);
            for a in &t.pending {
                let (tag, i) = match a.slot {
                    Slot::Glue(i) => (0, i),
                    Slot::Label(i) => (1, i),
                };
                let on = (a.state == Switch::On) as u64;
                varint(&mut out, (i as u64) << 2 | tag << 1 | on);
            }
        }
        out
    }

    /// Inverse of [`Assembly::encode`].
    pub fn decode(bytes: &[u8]) -> Option<Assembly> {
        struct Reader<'a>(&'a [u8]);
        impl Reader<'_> {
            fn varint(&mut self) -> Option<u64> {
                let mut v = 0u64;
                for shift in (0..64).step_by(7) {
                    let (&b, rest) = self.0.split_first()?;
                    self.0 = rest;
                    v |= ((b & 0x7f) as u64) << shift;
                    if b < 0x80 {
                        return Some(v);
                    }
                }
                None
            }
            fn int(&mut self) -> Option<i32> {
                let z = self.varint()? as u32;
                Some(((z >> 1) as i32) ^ -((z & 1) as i32))
            }
            fn states(&mut self) -> Option<Box<[GlueState]>> {
                let n = self.varint()? as usize;
                let mut out = Vec::with_capacity(n);
                for i in 0..n {
                    let b = *self.0.get(i / 4)?;
                    out.push(match (b >> (2 * (i % 4))) & 3 {
                        0 => GlueState::Latent,
                        1 => GlueState::On,
                        2 => GlueState::Off,
                        _ => return None,
                    });
                }
                self.0 = &self.0[n.div_ceil(4)..];
                Some(out.into_boxed_slice())
            }
        }
        let mut r = Reader(bytes);
        let n = r.varint()? as usize;
        let mut a = Assembly::new();
        for _ in 0..n {
            let p = Pos::new(r.int()?, r.int()?);
            let kind = TileTypeId(u16::try_from(r.varint()?).ok()?);
            let glues = r.states()?;
            let labels = r.states()?;
            let np = r.varint()? as usize;
            let mut pending = Vec::with_capacity(np);
            for _ in 0..np {
                let v = r.varint()?;
                let i = u16::try_from(v >> 2).ok()?;
                let slot = if v & 2 == 0 {
                    Slot::Glue(i)
                } else {
                    Slot::Label(i)
                };
                let state = if v & 1 == 1 { Switch::On } else { Switch::Off };
                pending.push(PendingAction { slot, state });
            }
            a.insert(
                p,
                Tile {
                    kind,
                    glues,
                    labels,
                    pending,
                },
            );
        }
        r.0.is_empty().then_some(a)
    }
}

/// A system: tile set, temperature and initial assemblies (all with empty Π).
#[derive(Debug, Clone)]
pub struct System {
    pub tileset: Arc<TileSet>,
    pub temperature: u32,
    pub initial: Vec<Assembly>,
    /// Indices into `initial` present as a single copy rather than an
    /// unbounded supply (e.g. a seed supertile).
    pub seeds: Vec<usize>,
}

impl System {
    /// System whose initial set is one singleton per tile type.
    pub fn singletons(types: Vec<TileType>, temperature: u32) -> System {
        let ts = TileSet::new(types);
        let initial = (0..ts.len())
            .map(|i| Assembly::singleton(ts.instantiate(TileTypeId(i as u16))))
            .collect();
        System {
            tileset: Arc::new(ts),
            temperature,
            initial,
            seeds: Vec::new(),
        }
    }

    pub fn is_seed(&self, i: usize) -> bool {
        self.seeds.contains(&i)
    }

    pub fn tile_complexity(&self) -> usize {
        self.tileset.len()
    }

    pub fn signal_complexity(&self) -> usize {
        self.tileset.signal_complexity()
    }

    /// True if any transition function anywhere queues a deactivation.
    pub fn uses_deactivation(&self) -> bool {
        self.tileset
            .types()
            .iter()
            .flat_map(|t| t.delta.values())
            .flatten()
            .any(|a| a.new_state == Switch::Off)
    }
}

/// One validation finding.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub subject: String,
    pub message: String,
}

/// Checks every type and initial-assembly invariant. Violations are data.
pub fn validate_system(system: &System) -> Vec<Violation> {
    let ts = &system.tileset;
    let mut out = Vec::new();
    if system.temperature == 0 {
        out.push(Violation {
            subject: "system".into(),
            message: "temperature must be positive".into(),
        });
    }
    for v in ts.compile_violations() {
        out.push(Violation {
            subject: "tileset".into(),
            message: v.clone(),
        });
    }
    for t in ts.types() {
        for side in Side::ALL {
            let gs = t.glues_on(side);
            for (i, g) in gs.iter().enumerate() {
                let subject = format!("tile `{}` side {side} glue `{}`", t.name, g.glue.glue_type);
                if gs[..i].iter().any(|h| h.glue.glue_type == g.glue.glue_type) {
                    out.push(Violation {
                        subject: subject.clone(),
                        message: "duplicate glue type".into(),
                    });
                }
                if g.state == GlueState::Off {
                    out.push(Violation {
                        subject: subject.clone(),
                        message: "invalid initial state".into(),
                    });
                }
                if g.glue.strength == 0 {
                    out.push(Violation {
                        subject,
                        message: "glue strength must be positive".into(),
                    });
                }
            }
        }
        for (i, l) in t.labels.iter().enumerate() {
            let subject = format!("tile `{}` label `{}`", t.name, l.label);
            if t.labels[..i].iter().any(|m| m.label == l.label) {
                out.push(Violation {
                    subject: subject.clone(),
                    message: "duplicate label".into(),
                });
            }
            if l.state == GlueState::Off {
                out.push(Violation {
                    subject,
                    message: "invalid initial state".into(),
                });
            }
        }
    }
    for (i, a) in system.initial.iter().enumerate() {
        let subject = format!("initial assembly {i}");
        if a.is_empty() {
            out.push(Violation {
                subject: subject.clone(),
                message: "empty assembly".into(),
            });
            continue;
        }
        for (p, t) in &a.tiles {
            if !t.pending.is_empty() {
                out.push(Violation {
                    subject: subject.clone(),
                    message: format!("tile at {p} has non-empty pending set"),
                });
            }
            if t.glues.contains(&GlueState::Off) || t.labels.contains(&GlueState::Off) {
                out.push(Violation {
                    subject: subject.clone(),
                    message: format!("tile at {p}: invalid initial state"),
                });
            }
        }
        if !crate::dynamics::is_tau_stable(ts, a, system.temperature) {
            out.push(Violation {
                subject,
                message: "initial assembly is not temperature-stable".into(),
            });
        }
    }
    out
}
