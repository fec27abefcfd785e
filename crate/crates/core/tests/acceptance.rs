//! Acceptance suite: one PASS/FAIL line per criterion, with runtimes.
//! Criteria run concurrently; the process exits non-zero if any fails.

mod common;

use std::time::{Duration, Instant};

use stam_core::dynamics::{
    explore, run_stochastic, ExploreConfig, MoveRecord, Simulation, StochasticConfig, Trace,
    Universe,
};
use stam_core::generators::*;
use stam_core::verify::*;
use stam_core::{Assembly, System};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn cfg(seed: u64, max_steps: usize) -> StochasticConfig {
    StochasticConfig {
        seed,
        max_steps,
        fairness_window: 1000,
    }
}

const SEEDS: std::ops::RangeInclusive<u64> = 1..=10;

/// The unique terminal assembly larger than one tile, if exactly one exists.
fn unique_terminal(
    system: &System,
    max_size: usize,
    max_states: usize,
) -> Result<Assembly, String> {
    let e = explore(
        system,
        ExploreConfig {
            max_assembly_size: max_size,
            max_states,
            ..Default::default()
        },
    );
    if e.truncated() {
        return Err(format!("exploration truncated after {} states", e.len()));
    }
    let big: Vec<Assembly> = e.terminal_assemblies().filter(|a| a.len() > 1).collect();
    match big.as_slice() {
        [a] => Ok(a.clone()),
        _ => Err(format!("{} terminal assemblies of size > 1", big.len())),
    }
}

fn lines_pow2() -> Outcome {
    let mut worst = Duration::ZERO;
    for k in 1..=3u32 {
        let t = Instant::now();
        let s = gen_line_pow2(k).unwrap();
        if s.tileset.len() != 4 {
            return outcome(false, format!("k={k}: {} tile types", s.tileset.len()));
        }
        let n = 1usize << k;
        match unique_terminal(&s, n, 100_000) {
            Ok(a) if check_line_shape(&a, n) => {}
            Ok(_) => return outcome(false, format!("k={k}: terminal is not {n}x1")),
            Err(e) => return outcome(false, format!("k={k}: {e}")),
        }
        worst = worst.max(t.elapsed());
    }
    let pass = worst < Duration::from_secs(60);
    outcome(
        pass,
        format!("k=1..3 unique 2^k x1, 4 types, slowest k {worst:.2?} (< 60s)"),
    )
}

/// n = 12 closes at roughly 5.5e5 states.
const ARBITRARY_STATES: usize = 1_000_000;

/// Glue budget per tile is at most `GLUE_CONSTANT * floor(log2 n)`.
const GLUE_CONSTANT: usize = 20;

fn lines_arbitrary() -> Outcome {
    let mut glues = Vec::new();
    for n in [3u64, 5, 6, 7, 12] {
        let s = gen_line(n).unwrap();
        if s.uses_deactivation() {
            return outcome(false, format!("n={n}: OFF action present"));
        }
        match unique_terminal(&s, n as usize, ARBITRARY_STATES) {
            Ok(a) if check_line_shape(&a, n as usize) => {}
            Ok(_) => return outcome(false, format!("n={n}: terminal is not {n}x1")),
            Err(e) => return outcome(false, format!("n={n}: {e}")),
        }
        let g = glues_per_tile(&s);
        let log = 63 - n.leading_zeros() as usize;
        if g > GLUE_CONSTANT * log {
            return outcome(false, format!("n={n}: {g} glues > {GLUE_CONSTANT}*{log}"));
        }
        glues.push((n, g));
    }
    outcome(
        true,
        format!("unique n x1 for n in {{3,5,6,7,12}}, no OFF; glues/tile {glues:?} <= c*floor(log2 n), c={GLUE_CONSTANT}"),
    )
}

/// Whether some break in `trace` detached a 1×n column.
fn detaches_line(system: &System, trace: &Trace, n: usize) -> bool {
    let mut u = Universe::new(system);
    for s in &trace.steps {
        let mv = u.resolve(&s.mv).expect("resolvable trace");
        let applied = u.apply(&mv).expect("applicable move");
        if matches!(s.mv, MoveRecord::Break { .. })
            && applied
                .added
                .iter()
                .filter_map(|id| u.member(*id))
                .any(|a| check_column_shape(a, n))
        {
            return true;
        }
    }
    false
}

fn counter_lines() -> Outcome {
    let t = Instant::now();
    let mut types = Vec::new();
    let mut audit = None;
    for n in [3usize, 4, 8] {
        let s = gen_line_counter(n as u64).unwrap();
        // the first line detaches after ~7.5k steps at worst for n = 8
        let steps = if n <= 4 { 4000 } else { 20_000 };
        types.push(s.tileset.len());
        let traces: Vec<Trace> = SEEDS
            .map(|seed| run_stochastic(&s, cfg(seed, steps)).unwrap())
            .collect();
        for (seed, tr) in SEEDS.zip(&traces) {
            if !detaches_line(&s, tr, n) {
                return outcome(false, format!("n={n} seed {seed}: no detached 1x{n} line"));
            }
        }
        if n == 4 {
            audit = Some(reattachment_audit(&s, &traces, n).unwrap());
        }
    }
    let audit = audit.expect("n=4 audited");
    let same_types = types.windows(2).all(|w| w[0] == w[1]);
    let el = t.elapsed();
    let pass = same_types
        && audit.reattachments > 0
        && audit.terminal == 0
        && el < Duration::from_secs(300);
    outcome(
        pass,
        format!(
            "every seed detaches a line for n in {{3,4,8}}; types {types:?}; n=4 reattachments {} over {} hosts, {} terminal; {el:.2?} (< 5min)",
            audit.reattachments, audit.hosts, audit.terminal
        ),
    )
}

fn inputs_up_to(len: usize) -> Vec<String> {
    let mut out = vec![String::new()];
    for l in 1..=len {
        for bits in 0..1u32 << l {
            out.push(
                (0..l)
                    .map(|i| if bits >> i & 1 == 1 { '1' } else { '0' })
                    .collect(),
            );
        }
    }
    out
}

fn tm_check(m: &TMSpec, w: &str, seed: u64) -> Result<(usize, usize), String> {
    let s = compile_tm(m, w).unwrap();
    let trace = run_stochastic(&s, cfg(seed, 200_000)).unwrap();
    let b = bisimulate(&trace, m, w).map_err(|e| e.to_string())?;
    if !b.holds {
        return Err(format!("bisimulation: {:?}", b.divergence));
    }
    if !b.run_finished || !b.reference_halts {
        return Err("run did not finish".into());
    }
    let big: Vec<&usize> = b.final_tape_sizes.iter().filter(|&&s| s > 3).collect();
    if big.len() != 1 || b.final_halt_tiles != 1 {
        return Err(format!(
            "final tapes {:?}, {} halting tiles",
            b.final_tape_sizes, b.final_halt_tiles
        ));
    }
    let f = fuel_audit(&trace, &b).map_err(|e| e.to_string())?;
    if f.max_fuel > 7 || !f.space_ok {
        return Err(format!("fuel {} space {}", f.max_fuel, f.space_ok));
    }
    let j = junk_audit(&s, &trace).map_err(|e| e.to_string())?;
    if let Some(bad) = j.sizes.iter().find(|&&s| !(2..=3).contains(&s)) {
        return Err(format!("junk of size {bad}"));
    }
    Ok((f.max_fuel, j.sizes.len()))
}

fn tm_simulation() -> Outcome {
    let t = Instant::now();
    let inputs = inputs_up_to(4);
    let mut runs = 0;
    let mut max_fuel = 0;
    for (name, m) in [
        ("increment", TMSpec::unary_increment()),
        ("parity", TMSpec::parity()),
    ] {
        for w in &inputs {
            for seed in SEEDS {
                match tm_check(&m, w, seed) {
                    Ok((f, _)) => max_fuel = max_fuel.max(f),
                    Err(e) => return outcome(false, format!("{name} w={w:?} seed {seed}: {e}")),
                }
                runs += 1;
            }
        }
    }
    // bounded non-halting run: no terminal tape within the explored set
    let runaway = compile_tm(&TMSpec::runaway(), "1").unwrap();
    let e = explore(
        &runaway,
        ExploreConfig {
            max_assembly_size: 16,
            max_states: 100_000,
            ..Default::default()
        },
    );
    let stuck = e.terminal_assemblies().filter(|a| a.len() > 3).count();
    let el = t.elapsed();
    let pass = stuck == 0 && el < Duration::from_secs(600);
    outcome(
        pass,
        format!(
            "{runs} halting runs bisimilar, max fuel {max_fuel} (<= 7), junk in {{2,3}}, one halted tape each; non-halting explore: {stuck} terminal > 3 in {} states; {el:.2?} (< 10min)",
            e.len()
        ),
    )
}

fn weak_sierpinski() -> Outcome {
    let s = gen_sierpinski_weak();
    let budget = s.tileset.len() == 5
        && s.signal_complexity() == 4
        && s.temperature == 1
        && !s.uses_deactivation();
    if !budget {
        return outcome(false, "tile/signal/temperature budget not met");
    }
    let ts = &s.tileset;
    let region = Region::square(8);
    for seed in SEEDS {
        let mut sim = Simulation::new(&s, cfg(seed, 200_000));
        let resolved = |sim: &Simulation| {
            sim.universe
                .members()
                .find(|(_, a)| {
                    a.bounds()
                        .is_some_and(|(lo, _)| weak_region_resolved(ts, a, lo, region))
                })
                .map(|(_, a)| a.clone())
        };
        let mut found = None;
        sim.run_until(|sim| {
            if sim.steps_taken() % 200 != 0 {
                return false;
            }
            found = resolved(sim);
            found.is_some()
        })
        .unwrap();
        let Some(a) = found.or_else(|| resolved(&sim)) else {
            return outcome(false, format!("seed {seed}: [0,7]^2 never resolved"));
        };
        let origin = a.bounds().unwrap().0;
        let bad = check_weak_pattern(ts, &a, origin, region).unwrap();
        if !bad.is_empty() {
            return outcome(false, format!("seed {seed}: mismatches at {bad:?}"));
        }
    }
    outcome(
        true,
        "5 types, signal complexity 4, tau 1, no OFF; [0,7]^2 matches for 10 seeds",
    )
}

fn strict_sierpinski() -> Outcome {
    let t = Instant::now();
    let s = gen_sierpinski_strict();
    if s.tileset.len() > 19 || s.signal_complexity() > 5 || s.temperature != 1 {
        return outcome(false, "tile/signal/temperature budget not met");
    }
    let mut junk = 0;
    for seed in SEEDS {
        let r = run_strict(&s, cfg(seed, 200_000), 8, 100).unwrap();
        if !r.resolved || !r.report.is_empty() {
            return outcome(
                false,
                format!(
                    "seed {seed}: resolved {} missing {:?} extra {:?}",
                    r.resolved, r.report.missing, r.report.extra
                ),
            );
        }
        if let Some(bad) = r.junk_sizes.iter().find(|s| ![3, 4, 6].contains(*s)) {
            return outcome(false, format!("seed {seed}: junk of size {bad}"));
        }
        if !r.junk_inert {
            return outcome(false, format!("seed {seed}: junk not inert"));
        }
        junk += r.junk_sizes.len();
    }
    let el = t.elapsed();
    outcome(
        el < Duration::from_secs(900),
        format!(
            "{} types, signal complexity {}; [0,15]^2 exact for 10 seeds; {junk} junk pieces, sizes in {{3,4,6}}, inert; {el:.2?} (< 15min)",
            s.tileset.len(),
            s.signal_complexity()
        ),
    )
}

fn model_invariants() -> Outcome {
    let walks = common::invariants::random_walks(1024);
    let det = common::invariants::determinism_cases(64);
    match (walks, det) {
        (Ok(m), Ok(())) if m >= common::invariants::MIN_MOVES => outcome(
            true,
            format!("{m} random moves: fire-once, state machine, mass, tau=1 break iff disconnected, canonical idempotence; 64 seeded reruns identical"),
        ),
        (Ok(m), Ok(())) => outcome(false, format!("only {m} moves exercised")),
        (Err(e), _) | (_, Err(e)) => outcome(false, e),
    }
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 7] = [
        ("lines, powers of two", lines_pow2),
        ("lines, arbitrary length", lines_arbitrary),
        ("counter lines", counter_lines),
        ("Turing machine simulation", tm_simulation),
        ("weak Sierpinski", weak_sierpinski),
        ("strict Sierpinski", strict_sierpinski),
        ("model invariants", model_invariants),
    ];
    let results: Vec<(Outcome, Duration)> = std::thread::scope(|sc| {
        let handles: Vec<_> = criteria
            .iter()
            .map(|(_, f)| {
                sc.spawn(move || {
                    let t = Instant::now();
                    let o =
                        std::panic::catch_unwind(f).unwrap_or_else(|_| outcome(false, "panicked"));
                    (o, t.elapsed())
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().unwrap()).collect()
    });
    let mut failed = 0;
    for (i, ((name, _), (o, el))) in criteria.iter().zip(&results).enumerate() {
        let tag = if o.pass { "PASS" } else { "FAIL" };
        println!(
            "criterion {} ({name}): {tag} [{el:.1?}] {}",
            i + 1,
            o.detail
        );
        failed += usize::from(!o.pass);
    }
    println!(
        "acceptance: {}/{} passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
