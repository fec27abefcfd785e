//! Signal-passing tile assembly: data model, asynchronous dynamics,
//! construction compilers and independent verification oracles.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`] holds the static data model (glues, tile types, assemblies,
//!   systems) and validation.
//! * [`dynamics`] implements combination, breaking and pending-action
//!   execution, plus the seeded stochastic scheduler and the exhaustive
//!   breadth-first explorer.
//! * [`generators`] compiles the constructions (lines, counters, Turing
//!   machines, Sierpinski patterns) into concrete systems.
//! * [`verify`] contains oracles and audits that check simulated behaviour.
//! * [`schema`] and [`render`] handle the JSON tile-set format and SVG output.

pub mod dynamics;
pub mod error;
pub mod generators;
pub mod model;
pub mod render;
pub mod schema;
pub mod verify;

pub use error::{Result, StamError};
pub use model::{
    Action, ActionTarget, ActiveGlue, ActiveLabel, Assembly, Glue, GlueState, Pos, Side, Switch,
    System, Tile, TileSet, TileType, TileTypeId,
};
