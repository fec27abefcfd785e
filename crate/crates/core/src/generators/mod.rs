//! Compilers from construction parameters to concrete systems.
mod counter;
mod lines;
mod sierpinski_strict;
mod sierpinski_weak;
mod tm;
mod tm_spec;

pub use counter::{gen_line_counter, gen_line_counter_with, CounterParams};
pub use lines::{gen_line, gen_line_pow2, glues_per_tile};
pub use sierpinski_strict::{gen_sierpinski_strict, WHITE_TYPES};
pub use sierpinski_weak::{gen_sierpinski_weak, BLACK, WHITE};
pub use tm::{
    compile_tm, initial_tape, tm_role, tm_seed_index, TmRole, ACCEPT, BACKBONE, END, EXTEND, REJECT,
};
pub use tm_spec::{Dir, Rule, TMSpec, SYMBOLS};
