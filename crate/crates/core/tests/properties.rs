//! Model invariants along random move sequences over random small systems.

mod common;

use common::invariants::*;
use proptest::prelude::*;
use proptest::test_runner::Config;

#[test]
fn random_moves_preserve_model_invariants() {
    let moves = random_walks(1024).unwrap();
    assert!(moves >= MIN_MOVES, "only {moves} moves exercised");
}

proptest! {
    #![proptest_config(Config { cases: 64, failure_persistence: None, ..Config::default() })]

    #[test]
    fn seeded_runs_repeat_exactly(s in system_strategy(), seed in any::<u64>()) {
        same_seed_same_trace(&s, seed)?;
    }

    #[test]
    fn canonical_form_ignores_translation(s in system_strategy(), dx in -50i32..50, dy in -50i32..50) {
        let a = s.initial[0].translated((dx, dy));
        prop_assert_eq!(a.canonical_form(), s.initial[0].canonical_form());
    }
}
