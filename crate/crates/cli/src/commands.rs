use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{BufReader, BufWriter};
use std::path::Path;

use anyhow::{bail, Context, Result};
use log::info;
use stam_core::dynamics::{
    enumerate_breaks, enumerate_combinations, explore, run_stochastic, ExploreConfig,
    StochasticConfig, Trace, Universe, DEFAULT_BREAK_BOUND,
};
use stam_core::generators::{
    compile_tm, gen_line, gen_line_counter, gen_line_counter_with, gen_line_pow2,
    gen_sierpinski_strict, gen_sierpinski_weak, CounterParams, TMSpec,
};
use stam_core::model::validate_system;
use stam_core::render::render_svg;
use stam_core::schema::{assembly_to_json, load, save};
use stam_core::verify::{bisimulate, fuel_audit, junk_audit, run_strict};
use stam_core::{Assembly, System};

use crate::{Command, Construction, RunArgs};

pub const PASS: i32 = 0;
pub const FAIL: i32 = 2;
pub const TRUNCATED: i32 = 3;

pub fn dispatch(cmd: Command) -> Result<i32> {
    match cmd {
        Command::Generate {
            construction,
            k,
            n,
            digits,
            machine,
            input,
            out,
        } => generate(construction, k, n, digits, machine.as_deref(), &input, &out),
        Command::Run { system, run, out } => run_cmd(&system, &run, &out),
        Command::Explore {
            system,
            max_size,
            max_states,
            out,
        } => explore_cmd(&system, max_size, max_states, out.as_deref()),
        Command::Verify {
            tm,
            input,
            trace,
            strict,
            blocks,
            run,
        } => match (tm, strict) {
            (Some(tm), _) => verify_tm(&tm, &input, trace.as_deref(), &run),
            (None, true) => verify_strict(blocks, &run),
            (None, false) => bail!("verify needs --tm or --strict"),
        },
        Command::Render {
            system,
            trace,
            snapshot_every,
            out,
        } => render_cmd(&system, &trace, snapshot_every, &out),
    }
}

fn machine(spec: &str) -> Result<TMSpec> {
    Ok(match spec {
        "builtin:unary-increment" => TMSpec::unary_increment(),
        "builtin:parity" => TMSpec::parity(),
        "builtin:copier" => TMSpec::copier(),
        "builtin:runaway" => TMSpec::runaway(),
        path => {
            let text = fs::read_to_string(path).with_context(|| format!("reading {path}"))?;
            TMSpec::parse(&text)?
        }
    })
}

fn stochastic(run: &RunArgs) -> StochasticConfig {
    StochasticConfig {
        seed: run.seed,
        max_steps: run.max_steps,
        fairness_window: run.fairness,
    }
}

fn generate(
    c: Construction,
    k: Option<u32>,
    n: Option<u64>,
    digits: Option<u32>,
    m: Option<&str>,
    input: &str,
    out: &Path,
) -> Result<i32> {
    let need_n = || n.context("--n is required");
    let system = match c {
        Construction::LinePow2 => gen_line_pow2(k.context("--k is required")?)?,
        Construction::Line => gen_line(need_n()?)?,
        Construction::LineCounter => match digits {
            Some(d) => gen_line_counter_with(CounterParams::with_digits(need_n()?, d)?)?,
            None => gen_line_counter(need_n()?)?,
        },
        Construction::Tm => compile_tm(&machine(m.context("--machine is required")?)?, input)?,
        Construction::SierpinskiWeak => gen_sierpinski_weak(),
        Construction::SierpinskiStrict => gen_sierpinski_strict(),
    };
    let violations = validate_system(&system);
    if !violations.is_empty() {
        for v in &violations {
            eprintln!("{}: {}", v.subject, v.message);
        }
        bail!("generated system is invalid");
    }
    save(&system, out)?;
    println!("tile types: {}", system.tileset.len());
    println!("signal complexity: {}", system.signal_complexity());
    println!("temperature: {}", system.temperature);
    println!("deactivation: {}", system.uses_deactivation());
    let seed_sizes: Vec<usize> = system
        .seeds
        .iter()
        .map(|&i| system.initial[i].len())
        .collect();
    println!("seed sizes: {seed_sizes:?}");
    Ok(PASS)
}

fn load_system(path: &Path) -> Result<System> {
    load(path).with_context(|| format!("loading {}", path.display()))
}

fn load_trace(path: &Path) -> Result<Trace> {
    let f = File::open(path).with_context(|| format!("opening {}", path.display()))?;
    Ok(Trace::read_jsonl(BufReader::new(f))?)
}

fn run_cmd(system: &Path, run: &RunArgs, out: &Path) -> Result<i32> {
    let system = load_system(system)?;
    let trace = run_stochastic(&system, stochastic(run))?;
    trace.write_jsonl(BufWriter::new(File::create(out)?))?;
    let u = trace.replay(&system)?;
    let moves = u.moves();
    let terminal = terminal_histogram(&system, &u);
    let largest = u.members().map(|(_, a)| a.len()).max().unwrap_or(0);
    println!("steps: {}", trace.steps.len());
    println!("no move enabled: {}", moves.is_empty());
    println!("assemblies without enabled moves, by size (>1): {terminal:?}");
    println!("largest assembly: {largest}");
    Ok(PASS)
}

/// Members with no enabled move, by size (singletons omitted). Copies of
/// one shape may combine with each other when at least two exist.
fn terminal_histogram(system: &System, u: &Universe) -> BTreeMap<usize, usize> {
    let ts = &system.tileset;
    let tau = system.temperature;
    let mut shapes: BTreeMap<Vec<u8>, (Assembly, usize)> = BTreeMap::new();
    for (_, a) in u.members() {
        let c = a.canonical();
        shapes.entry(c.encode()).or_insert((c, 0)).1 += 1;
    }
    let mut out = BTreeMap::new();
    for (key, (a, count)) in &shapes {
        if a.len() < 2
            || a.has_pending()
            || !enumerate_breaks(ts, a, tau, DEFAULT_BREAK_BOUND).is_empty()
        {
            continue;
        }
        let binds = |b: &Assembly| !enumerate_combinations(ts, a, b, tau).is_empty();
        let live = system.initial.iter().any(binds)
            || shapes
                .iter()
                .any(|(k, (b, n))| (k != key || *n > 1) && binds(b));
        if !live {
            *out.entry(a.len()).or_default() += count;
        }
    }
    out
}

fn explore_cmd(
    system: &Path,
    max_size: usize,
    max_states: usize,
    out: Option<&Path>,
) -> Result<i32> {
    let system = load_system(system)?;
    let e = explore(
        &system,
        ExploreConfig {
            max_assembly_size: max_size,
            max_states,
            ..Default::default()
        },
    );
    let big: Vec<_> = e.terminal_assemblies().filter(|a| a.len() > 1).collect();
    println!("states: {}", e.len());
    println!("terminal: {}", e.terminal.len());
    println!("size truncated: {}", e.size_truncated);
    println!("state truncated: {}", e.state_truncated);
    println!("unique size>1 terminal: {}", big.len() == 1);
    if let Some(out) = out {
        let json: Vec<_> = big
            .iter()
            .map(|a| assembly_to_json(&system.tileset, a))
            .collect();
        serde_json::to_writer_pretty(BufWriter::new(File::create(out)?), &json)?;
    }
    Ok(if e.truncated() { TRUNCATED } else { PASS })
}

fn verify_tm(spec: &str, input: &str, trace: Option<&Path>, run: &RunArgs) -> Result<i32> {
    let m = machine(spec)?;
    let system = compile_tm(&m, input)?;
    let trace = match trace {
        Some(p) => load_trace(p)?,
        None => run_stochastic(&system, stochastic(run))?,
    };
    let bisim = bisimulate(&trace, &m, input)?;
    let fuel = fuel_audit(&trace, &bisim)?;
    let junk = junk_audit(&system, &trace)?;
    println!(
        "bisimulation: {}",
        if bisim.holds { "pass" } else { "fail" }
    );
    if let Some(d) = &bisim.divergence {
        println!("divergence: {d}");
    }
    println!(
        "quiescent points: {}/{}",
        bisim.points.len(),
        bisim.reference_len
    );
    println!("run finished: {}", bisim.run_finished);
    println!("max fuel: {}", fuel.max_fuel);
    println!("space 2*cells+2: {}", fuel.space_ok);
    println!("junk sizes: {:?}", junk.sizes);
    println!("junk inert: {}", junk.inert);
    let ok =
        bisim.holds && fuel.max_fuel <= 7 && fuel.space_ok && junk.sizes.iter().all(|&s| s <= 3);
    if !ok {
        return Ok(FAIL);
    }
    Ok(if bisim.run_finished || !bisim.reference_halts {
        PASS
    } else {
        TRUNCATED
    })
}

fn verify_strict(blocks: i32, run: &RunArgs) -> Result<i32> {
    let system = gen_sierpinski_strict();
    let r = run_strict(&system, stochastic(run), blocks, 100)?;
    println!("steps: {}", r.steps);
    println!("resolved: {}", r.resolved);
    println!("missing: {:?}", r.report.missing);
    println!("extra: {:?}", r.report.extra);
    println!("junk sizes: {:?}", r.junk_sizes);
    println!("junk inert: {}", r.junk_inert);
    if !r.resolved {
        return Ok(TRUNCATED);
    }
    let sizes_ok = r.junk_sizes.iter().all(|s| [3, 4, 6].contains(s));
    let ok = r.report.missing.is_empty() && r.report.extra.is_empty() && sizes_ok && r.junk_inert;
    Ok(if ok { PASS } else { FAIL })
}

fn render_cmd(system: &Path, trace: &Path, every: usize, out: &Path) -> Result<i32> {
    let system = load_system(system)?;
    let trace = load_trace(trace)?;
    fs::create_dir_all(out)?;
    let every = every.max(1);
    let mut u = Universe::new(&system);
    let write = |u: &Universe, step: usize| -> Result<()> {
        if let Some((_, a)) = u.members().max_by_key(|(_, a)| a.len()) {
            let path = out.join(format!("step_{step:06}.svg"));
            fs::write(&path, render_svg(&system.tileset, a))?;
            info!("wrote {}", path.display());
        }
        Ok(())
    };
    write(&u, 0)?;
    for (i, s) in trace.steps.iter().enumerate() {
        let mv = u.resolve(&s.mv)?;
        u.apply(&mv)?;
        if (i + 1) % every == 0 || i + 1 == trace.steps.len() {
            write(&u, i + 1)?;
        }
    }
    Ok(PASS)
}
