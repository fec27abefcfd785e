use thiserror::Error;

use crate::model::Pos;

#[derive(Debug, Error)]
pub enum StamError {
    #[error("positions {0} and {1} are not adjacent")]
    NotAdjacent(Pos, Pos),

    #[error("no tile at {0}")]
    Unoccupied(Pos),

    #[error("assemblies overlap at {0}")]
    Overlap(Pos),

    #[error("interface strength {strength} is below temperature {temperature}")]
    WeakInterface { strength: u32, temperature: u32 },

    #[error("action is not pending on the tile at {0}")]
    NotPending(Pos),

    #[error("invalid partition: {0}")]
    InvalidPartition(String),

    #[error("unknown tile type `{0}`")]
    UnknownTileType(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("invalid input symbol `{0}`")]
    InvalidSymbol(char),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("turing machine moved left from the leftmost cell at step {0}")]
    LeftOfTape(usize),

    #[error("unresolved label at {0}")]
    UnresolvedLabel(Pos),

    #[error("region still dissociating: {0}")]
    Unresolved(String),

    #[error("step boundaries could not be identified: {0}")]
    StepBoundary(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, StamError>;
