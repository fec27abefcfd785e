use std::collections::BTreeSet;

use stam_core::dynamics::{
    apply_pending_action, bond_strength, combine, enumerate_breaks, enumerate_combinations,
    is_tau_stable, DEFAULT_BREAK_BOUND,
};
use stam_core::generators::*;
use stam_core::model::{glue_transition_valid, validate_system};
use stam_core::schema::{from_json_str, to_json_string};
use stam_core::{
    Action, Assembly, GlueState, Pos, Side, Switch, System, TileSet, TileType, TileTypeId,
};

fn top() -> TileType {
    TileType::new("Top")
        .glue(Side::S, "e", GlueState::On)
        .glue(Side::W, "tl", GlueState::Latent)
        .glue(Side::E, "tr", GlueState::Latent)
        .on_bind(
            Side::S,
            "e",
            [
                Action::glue_on(Side::W, "tl"),
                Action::glue_on(Side::E, "tr"),
            ],
        )
}

fn mm() -> TileType {
    TileType::new("MM")
        .glue(Side::N, "e", GlueState::On)
        .glue(Side::S, "b", GlueState::On)
        .on_bind(
            Side::N,
            "e",
            [
                Action::glue_off(Side::N, "e"),
                Action::glue_off(Side::S, "b"),
            ],
        )
}

fn bot() -> TileType {
    TileType::new("Bot")
        .glue(Side::N, "a", GlueState::On)
        .glue(Side::N, "b", GlueState::On)
        .glue(Side::E, "bl", GlueState::Latent)
        .glue(Side::E, "br", GlueState::Latent)
        .glue(Side::W, "bl", GlueState::Latent)
        .glue(Side::W, "br", GlueState::Latent)
        .on_bind(
            Side::N,
            "b",
            [
                Action::glue_on(Side::W, "bl"),
                Action::glue_on(Side::E, "br"),
            ],
        )
}

fn single(ts: &TileSet, name: &str, p: Pos) -> Assembly {
    let mut a = Assembly::new();
    a.insert(p, ts.instantiate(ts.id(name).unwrap()));
    a
}

/// Top placed on top of MM, as produced by their combination on `e`.
fn top_on_mm(ts: &TileSet) -> Assembly {
    let t = single(ts, "Top", Pos::new(0, 0));
    let m = single(ts, "MM", Pos::new(0, 0));
    let vs = enumerate_combinations(ts, &t, &m, 1);
    assert_eq!(vs, vec![(0, -1)]);
    combine(ts, &t, &m, vs[0], 1).unwrap()
}

fn pending_total(a: &Assembly) -> usize {
    a.tiles.values().map(|t| t.pending.len()).sum()
}

#[test]
fn bot_tile_is_valid() {
    let sys = System::singletons(vec![bot(), top(), mm()], 2);
    assert!(
        validate_system(&sys).is_empty(),
        "{:?}",
        validate_system(&sys)
    );
}

#[test]
fn duplicate_glue_and_off_initial_state_are_reported() {
    let dup =
        TileType::new("D")
            .glue(Side::N, "g", GlueState::On)
            .glue(Side::N, "g", GlueState::Latent);
    let off = TileType::new("O").glue(Side::E, "g", GlueState::Off);
    let v = validate_system(&System::singletons(vec![dup, off], 1));
    let msgs: BTreeSet<&str> = v.iter().map(|v| v.message.as_str()).collect();
    assert!(msgs.contains("duplicate glue type"));
    assert!(msgs.contains("invalid initial state"));
    assert!(v
        .iter()
        .any(|v| v.subject.contains("`D`") && v.subject.contains("`g`")));
}

#[test]
fn glue_state_machine() {
    use GlueState::*;
    let valid: Vec<(GlueState, GlueState)> = [Latent, On, Off]
        .into_iter()
        .flat_map(|a| [Latent, On, Off].into_iter().map(move |b| (a, b)))
        .filter(|&(a, b)| glue_transition_valid(a, b))
        .collect();
    assert_eq!(valid, vec![(Latent, On), (Latent, Off), (On, Off)]);
}

#[test]
fn canonical_form_translates_and_hashes_full_state() {
    let ts = TileSet::new(vec![top(), mm()]);
    let a = single(&ts, "Top", Pos::new(5, 7));
    let (c, _) = a.canonical_form();
    assert_eq!(c.positions().collect::<Vec<_>>(), vec![Pos::new(0, 0)]);

    let b = top_on_mm(&ts);
    assert_eq!(
        b.canonical_form().1,
        b.translated((3, -4)).canonical_form().1
    );

    // (b) and (c): identical except for the pending W-tl action on Top
    let p_top = Pos::new(0, 0);
    let act = ts
        .resolve(ts.id("Top").unwrap(), &Action::glue_on(Side::W, "tl"))
        .unwrap();
    let c2 = apply_pending_action(&ts, &b, p_top, act).unwrap();
    assert_ne!(b.canonical_form().1, c2.canonical_form().1);
    let (cc, h) = c2.canonical_form();
    assert_eq!(cc.canonical_form().1, h);
}

#[test]
fn example_states_walkthrough() {
    let ts = TileSet::new(vec![top(), mm()]);
    let b = top_on_mm(&ts);
    // four glues received queued transitions
    assert_eq!(pending_total(&b), 4);
    let top_id = ts.id("Top").unwrap();
    let mm_id = ts.id("MM").unwrap();
    let (pt, pm) = (Pos::new(0, 0), Pos::new(0, -1));

    let tl = ts.resolve(top_id, &Action::glue_on(Side::W, "tl")).unwrap();
    let c = apply_pending_action(&ts, &b, pt, tl).unwrap();
    assert_eq!(
        c.get(pt).unwrap().glue_state(&ts, Side::W, "tl"),
        Some(GlueState::On)
    );
    assert_eq!(pending_total(&c), 3);

    let e_off = ts.resolve(mm_id, &Action::glue_off(Side::N, "e")).unwrap();
    let d = apply_pending_action(&ts, &c, pm, e_off).unwrap();
    assert_eq!(bond_strength(&ts, &d, pt, pm).unwrap(), 0);
    let breaks = enumerate_breaks(&ts, &d, 1, DEFAULT_BREAK_BOUND);
    assert_eq!(breaks.len(), 1);
    assert!(!is_tau_stable(&ts, &d, 1));
}

#[test]
fn executing_on_for_an_off_glue_only_drops_the_action() {
    let ts = TileSet::new(vec![TileType::new("X")
        .glue(Side::N, "g", GlueState::On)
        .glue(Side::E, "h", GlueState::Latent)]);
    let mut a = single(&ts, "X", Pos::new(0, 0));
    let id = TileTypeId(0);
    let off = ts.resolve(id, &Action::glue_off(Side::E, "h")).unwrap();
    let on = ts.resolve(id, &Action::glue_on(Side::E, "h")).unwrap();
    let t = a.tiles.get_mut(&Pos::new(0, 0)).unwrap();
    t.push_pending(off);
    t.push_pending(on);
    let a = apply_pending_action(&ts, &a, Pos::new(0, 0), off).unwrap();
    let a = apply_pending_action(&ts, &a, Pos::new(0, 0), on).unwrap();
    let t = a.get(Pos::new(0, 0)).unwrap();
    assert_eq!(t.glue_state(&ts, Side::E, "h"), Some(GlueState::Off));
    assert!(t.pending.is_empty());
}

#[test]
fn label_actions_share_the_state_machine() {
    let ts = TileSet::new(vec![TileType::new("L")
        .glue(Side::N, "g", GlueState::On)
        .label("black", GlueState::Latent)]);
    let id = TileTypeId(0);
    let act = ts.resolve(id, &Action::label("black", Switch::On)).unwrap();
    let mut a = single(&ts, "L", Pos::new(0, 0));
    a.tiles.get_mut(&Pos::new(0, 0)).unwrap().push_pending(act);
    let a = apply_pending_action(&ts, &a, Pos::new(0, 0), act).unwrap();
    assert_eq!(
        a.get(Pos::new(0, 0)).unwrap().label_state(&ts, "black"),
        Some(GlueState::On)
    );
}

fn all_generated() -> Vec<(String, System)> {
    let mut out = vec![
        ("line-pow2 3".to_string(), gen_line_pow2(3).unwrap()),
        ("line 7".to_string(), gen_line(7).unwrap()),
        ("counter 4".to_string(), gen_line_counter(4).unwrap()),
        ("weak".to_string(), gen_sierpinski_weak()),
        ("strict".to_string(), gen_sierpinski_strict()),
    ];
    for (name, m) in [
        ("inc", TMSpec::unary_increment()),
        ("parity", TMSpec::parity()),
    ] {
        out.push((format!("tm {name}"), compile_tm(&m, "101").unwrap()));
    }
    out
}

#[test]
fn generators_validate_and_round_trip_through_json() {
    for (name, sys) in all_generated() {
        assert!(
            validate_system(&sys).is_empty(),
            "{name}: {:?}",
            validate_system(&sys)
        );
        let text = to_json_string(&sys).unwrap();
        let back = from_json_str(&text).unwrap();
        assert_eq!(to_json_string(&back).unwrap(), text, "{name}");
        assert_eq!(back.seeds, sys.seeds, "{name}");
        assert!(validate_system(&back).is_empty(), "{name}");
    }
}

#[test]
fn json_schema_shape() {
    let v: serde_json::Value =
        serde_json::from_str(&to_json_string(&gen_line_pow2(1).unwrap()).unwrap()).unwrap();
    assert_eq!(v["temperature"], 1);
    let types = v["tile_types"].as_array().unwrap();
    assert_eq!(types.len(), 4);
    assert!(v["initial_assemblies"].is_array());
}
