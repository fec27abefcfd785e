//! JSON tile-set format.
//!
//! ```json
//! {"temperature": 1,
//!  "tile_types": [{"name": "a0",
//!                  "glues": {"E": [{"type": "g", "strength": 1, "state": "on"}]},
//!                  "labels": [{"label": "black", "state": "latent"}],
//!                  "delta": [{"on_bind": {"side": "E", "glue": "g"},
//!                             "actions": [{"kind": "glue", "side": "W", "target": "h", "set": "on"}]}]}],
//!  "initial_assemblies": [{"tiles": [{"x": 0, "y": 0, "type": "a0"}]}]}
//! ```
//!
//! Tiles may carry optional state overrides (`glue_states`, `label_states`,
//! `pending`) so that snapshots of running assemblies round-trip.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Result, StamError};
use crate::model::{
    Action, ActionTarget, ActiveGlue, ActiveLabel, Assembly, Glue, GlueState, Pos, Side, Switch,
    System, Tile, TileSet, TileType,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileSetFile {
    pub temperature: u32,
    pub tile_types: Vec<TileTypeJson>,
    #[serde(default)]
    pub initial_assemblies: Vec<AssemblyJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileTypeJson {
    pub name: String,
    #[serde(default)]
    pub glues: BTreeMap<Side, Vec<GlueJson>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub labels: Vec<LabelJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub delta: Vec<DeltaJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueJson {
    #[serde(rename = "type")]
    pub glue_type: String,
    #[serde(default = "one")]
    pub strength: u32,
    pub state: GlueState,
}

fn one() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabelJson {
    pub label: String,
    pub state: GlueState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BindKey {
    pub side: Side,
    pub glue: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeltaJson {
    pub on_bind: BindKey,
    pub actions: Vec<ActionJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Glue,
    Label,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActionJson {
    pub kind: ActionKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub side: Option<Side>,
    pub target: String,
    pub set: Switch,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssemblyJson {
    pub tiles: Vec<TileJson>,
    /// Present once instead of in unbounded supply.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub seed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GlueStateJson {
    pub side: Side,
    pub glue: String,
    pub state: GlueState,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TileJson {
    pub x: i32,
    pub y: i32,
    #[serde(rename = "type")]
    pub tile_type: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub glue_states: Vec<GlueStateJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub label_states: Vec<LabelJson>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub pending: Vec<ActionJson>,
}

fn action_to_json(a: &Action) -> ActionJson {
    match &a.target {
        ActionTarget::Glue { side, glue_type } => ActionJson {
            kind: ActionKind::Glue,
            side: Some(*side),
            target: glue_type.clone(),
            set: a.new_state,
        },
        ActionTarget::Label(l) => ActionJson {
            kind: ActionKind::Label,
            side: None,
            target: l.clone(),
            set: a.new_state,
        },
    }
}

fn action_from_json(a: &ActionJson) -> Result<Action> {
    match a.kind {
        ActionKind::Glue => {
            let side = a.side.ok_or_else(|| {
                StamError::Parse(format!("glue action on `{}` lacks a side", a.target))
            })?;
            Ok(Action::glue(side, a.target.clone(), a.set))
        }
        ActionKind::Label => Ok(Action::label(a.target.clone(), a.set)),
    }
}

fn type_to_json(t: &TileType) -> TileTypeJson {
    let mut glues = BTreeMap::new();
    for side in Side::ALL {
        let list: Vec<GlueJson> = t.glues[side.index()]
            .iter()
            .map(|g| GlueJson {
                glue_type: g.glue.glue_type.clone(),
                strength: g.glue.strength,
                state: g.state,
            })
            .collect();
        if !list.is_empty() {
            glues.insert(side, list);
        }
    }
    TileTypeJson {
        name: t.name.clone(),
        glues,
        labels: t
            .labels
            .iter()
            .map(|l| LabelJson {
                label: l.label.clone(),
                state: l.state,
            })
            .collect(),
        delta: t
            .delta
            .iter()
            .map(|((side, glue), actions)| DeltaJson {
                on_bind: BindKey {
                    side: *side,
                    glue: glue.clone(),
                },
                actions: actions.iter().map(action_to_json).collect(),
            })
            .collect(),
    }
}

fn type_from_json(t: &TileTypeJson) -> Result<TileType> {
    let mut out = TileType::new(t.name.clone());
    for (side, list) in &t.glues {
        for g in list {
            out.glues[side.index()].push(ActiveGlue {
                glue: Glue {
                    glue_type: g.glue_type.clone(),
                    strength: g.strength,
                },
                state: g.state,
            });
        }
    }
    out.labels = t
        .labels
        .iter()
        .map(|l| ActiveLabel {
            label: l.label.clone(),
            state: l.state,
        })
        .collect();
    for d in &t.delta {
        let actions = d
            .actions
            .iter()
            .map(action_from_json)
            .collect::<Result<Vec<_>>>()?;
        out = out.on_bind(d.on_bind.side, d.on_bind.glue.clone(), actions);
    }
    Ok(out)
}

/// Serializes a tile instance, listing only state that differs from a fresh instance.
pub fn tile_to_json(ts: &TileSet, p: Pos, t: &Tile) -> TileJson {
    let fresh = ts.instantiate(t.kind);
    let c = ts.compiled(t.kind);
    let glue_states = (0..t.glues.len())
        .filter(|&i| t.glues[i] != fresh.glues[i])
        .map(|i| GlueStateJson {
            side: c.slots[i].side,
            glue: ts.glue_name(c.slots[i].glue).to_string(),
            state: t.glues[i],
        })
        .collect();
    let label_states = (0..t.labels.len())
        .filter(|&i| t.labels[i] != fresh.labels[i])
        .map(|i| LabelJson {
            label: c.label_names[i].clone(),
            state: t.labels[i],
        })
        .collect();
    TileJson {
        x: p.x,
        y: p.y,
        tile_type: ts.tile_type(t.kind).name.clone(),
        glue_states,
        label_states,
        pending: t
            .pending
            .iter()
            .map(|a| action_to_json(&ts.describe(t.kind, *a)))
            .collect(),
    }
}

pub fn assembly_to_json(ts: &TileSet, a: &Assembly) -> AssemblyJson {
    AssemblyJson {
        tiles: a
            .tiles
            .iter()
            .map(|(p, t)| tile_to_json(ts, *p, t))
            .collect(),
        seed: false,
    }
}

pub fn assembly_from_json(ts: &TileSet, a: &AssemblyJson) -> Result<Assembly> {
    let mut out = Assembly::new();
    for tj in &a.tiles {
        let id = ts
            .id(&tj.tile_type)
            .ok_or_else(|| StamError::UnknownTileType(tj.tile_type.clone()))?;
        let mut tile = ts.instantiate(id);
        let c = ts.compiled(id);
        for g in &tj.glue_states {
            let slot = ts
                .glue_id(&g.glue)
                .and_then(|gid| c.find(g.side, gid))
                .ok_or_else(|| {
                    StamError::Parse(format!(
                        "tile `{}` has no glue {} on {}",
                        tj.tile_type, g.glue, g.side
                    ))
                })?;
            tile.glues[slot as usize] = g.state;
        }
        for l in &tj.label_states {
            let i = c
                .label_names
                .iter()
                .position(|x| *x == l.label)
                .ok_or_else(|| {
                    StamError::Parse(format!("tile `{}` has no label {}", tj.tile_type, l.label))
                })?;
            tile.labels[i] = l.state;
        }
        for a in &tj.pending {
            let act = action_from_json(a)?;
            let pa = ts.resolve(id, &act).ok_or_else(|| {
                StamError::Parse(format!("pending action {a:?} does not resolve"))
            })?;
            tile.push_pending(pa);
        }
        let p = Pos::new(tj.x, tj.y);
        if out.get(p).is_some() {
            return Err(StamError::Overlap(p));
        }
        out.insert(p, tile);
    }
    Ok(out)
}

pub fn system_to_json(system: &System) -> TileSetFile {
    let ts = &system.tileset;
    TileSetFile {
        temperature: system.temperature,
        tile_types: ts.types().iter().map(type_to_json).collect(),
        initial_assemblies: system
            .initial
            .iter()
            .enumerate()
            .map(|(i, a)| AssemblyJson {
                seed: system.is_seed(i),
                ..assembly_to_json(ts, a)
            })
            .collect(),
    }
}

/// Builds a system; if no initial assemblies are listed, one singleton per type is used.
pub fn system_from_json(file: &TileSetFile) -> Result<System> {
    let types = file
        .tile_types
        .iter()
        .map(type_from_json)
        .collect::<Result<Vec<_>>>()?;
    if file.initial_assemblies.is_empty() {
        return Ok(System::singletons(types, file.temperature));
    }
    let ts = TileSet::new(types);
    let initial = file
        .initial_assemblies
        .iter()
        .map(|a| assembly_from_json(&ts, a))
        .collect::<Result<Vec<_>>>()?;
    Ok(System {
        tileset: Arc::new(ts),
        temperature: file.temperature,
        initial,
        seeds: file
            .initial_assemblies
            .iter()
            .enumerate()
            .filter(|(_, a)| a.seed)
            .map(|(i, _)| i)
            .collect(),
    })
}

pub fn to_json_string(system: &System) -> Result<String> {
    Ok(serde_json::to_string_pretty(&system_to_json(system))?)
}

pub fn from_json_str(s: &str) -> Result<System> {
    let file: TileSetFile = serde_json::from_str(s)?;
    system_from_json(&file)
}

pub fn load(path: &Path) -> Result<System> {
    from_json_str(&std::fs::read_to_string(path)?)
}

pub fn save(system: &System, path: &Path) -> Result<()> {
    std::fs::write(path, to_json_string(system)?)?;
    Ok(())
}
