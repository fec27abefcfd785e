//! Asynchronous dynamics: the four producibility transitions and the two
//! exploration engines built on them.

mod bonds;
mod explore;
mod stochastic;
mod transitions;
mod universe;

pub use bonds::{
    binding_graph, bond_strength, bound_slots, break_apart, enumerate_breaks, is_tau_stable,
    min_cut, tile_pair_strength, BindingGraph,
};
pub use explore::{explore, explore_from, Derivation, Exploration, ExploreConfig};
pub use stochastic::{run_stochastic, Accounting, Simulation, StepRecord, StochasticConfig, Trace};
pub use transitions::{
    apply_pending_action, apply_pending_in_place, candidate_offsets, combine,
    enumerate_combinations, exposed_glues, fire, interface_strength, ExposedGlue,
};
pub use universe::{enumerate_moves, MemberId, Move, MoveRecord, Operand, Universe};

/// Default size bound for exhaustive sub-temperature cut enumeration.
pub const DEFAULT_BREAK_BOUND: usize = 24;
