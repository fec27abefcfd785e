//! Independent oracles and audits.
mod counter;
mod pattern;
mod strict;
mod tm;

pub use counter::{reattachment_audit, ReattachmentAudit};
pub use pattern::{
    check_column_shape, check_line_shape, check_strict_shape, check_weak_pattern, scaled_block,
    sierpinski_member, weak_region_resolved, Region, ShapeReport,
};
pub use strict::{run_strict, settle, strict_region_report, StrictRun};
pub use tm::{
    bisimulate, decode_tape, fuel_audit, junk_audit, tm_reference, Bisimulation, FuelAudit,
    JunkAudit, QuiescentPoint, TMConfiguration,
};
