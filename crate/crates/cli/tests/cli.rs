use std::path::Path;
use std::process::{Command, Output};

fn stam(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stam"))
        .args(args)
        .output()
        .expect("stam runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn generate_line_pow2_reports_four_types() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "l.json");
    let o = stam(&["generate", "line-pow2", "--k", "3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("tile types: 4"), "{text}");
    assert!(text.contains("deactivation: false"));
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["tile_types"].as_array().unwrap().len(), 4);
}

#[test]
fn generate_weak_sierpinski_budget() {
    let dir = tempfile::tempdir().unwrap();
    let o = stam(&[
        "generate",
        "sierpinski-weak",
        "--out",
        &path(dir.path(), "w.json"),
    ]);
    let text = stdout(&o);
    assert!(text.contains("tile types: 5"), "{text}");
    assert!(text.contains("signal complexity: 4"));
    assert!(text.contains("temperature: 1"));
}

#[test]
fn generate_tm_seed_size() {
    let dir = tempfile::tempdir().unwrap();
    let o = stam(&[
        "generate",
        "tm",
        "--machine",
        "builtin:unary-increment",
        "--input",
        "1",
        "--out",
        &path(dir.path(), "t.json"),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("seed sizes: [4]"), "{}", stdout(&o));
}

#[test]
fn generate_rejects_missing_parameter() {
    let dir = tempfile::tempdir().unwrap();
    let o = stam(&["generate", "line", "--out", &path(dir.path(), "x.json")]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--n"));
}

#[test]
fn explore_line_is_unique() {
    let dir = tempfile::tempdir().unwrap();
    let sys = path(dir.path(), "l.json");
    stam(&["generate", "line", "--n", "5", "--out", &sys]);
    let term = path(dir.path(), "terminal.json");
    let o = stam(&["explore", &sys, "--max-size", "5", "--out", &term]);
    assert_eq!(o.status.code(), Some(0));
    assert!(
        stdout(&o).contains("unique size>1 terminal: true"),
        "{}",
        stdout(&o)
    );
    let v: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&term).unwrap()).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 1);
}

#[test]
fn explore_truncation_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    let sys = path(dir.path(), "l.json");
    stam(&["generate", "line", "--n", "12", "--out", &sys]);
    let o = stam(&["explore", &sys, "--max-size", "12", "--max-states", "50"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stdout(&o).contains("state truncated: true"));
}

#[test]
fn run_is_byte_identical_per_seed() {
    let dir = tempfile::tempdir().unwrap();
    let sys = path(dir.path(), "w.json");
    stam(&["generate", "sierpinski-weak", "--out", &sys]);
    let (a, b, c) = (
        path(dir.path(), "a.jsonl"),
        path(dir.path(), "b.jsonl"),
        path(dir.path(), "c.jsonl"),
    );
    for (out, seed) in [(&a, "4"), (&b, "4"), (&c, "5")] {
        let o = stam(&[
            "run",
            &sys,
            "--seed",
            seed,
            "--max-steps",
            "500",
            "--out",
            out,
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    let read = |p: &str| std::fs::read(p).unwrap();
    assert_eq!(read(&a), read(&b));
    assert_ne!(read(&a), read(&c));

    let snaps = path(dir.path(), "svg");
    let o = stam(&[
        "render",
        &sys,
        &a,
        "--snapshot-every",
        "250",
        "--out",
        &snaps,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let n = std::fs::read_dir(&snaps).unwrap().count();
    assert_eq!(n, 3);
}

#[test]
fn verify_tm_passes_and_reuses_traces() {
    let dir = tempfile::tempdir().unwrap();
    let o = stam(&[
        "verify",
        "--tm",
        "builtin:parity",
        "--input",
        "101",
        "--seed",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("bisimulation: pass"));

    let sys = path(dir.path(), "t.json");
    let tr = path(dir.path(), "t.jsonl");
    stam(&[
        "generate",
        "tm",
        "--machine",
        "builtin:parity",
        "--input",
        "11",
        "--out",
        &sys,
    ]);
    stam(&[
        "run",
        &sys,
        "--seed",
        "3",
        "--max-steps",
        "100000",
        "--out",
        &tr,
    ]);
    let o = stam(&[
        "verify",
        "--tm",
        "builtin:parity",
        "--input",
        "11",
        "--trace",
        &tr,
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn verify_tm_from_file_and_wrong_input_fails() {
    let dir = tempfile::tempdir().unwrap();
    let m = path(dir.path(), "inc.tm");
    std::fs::write(
        &m,
        "start: q0\naccept: qa\nreject: qr\nq0 1 -> q0 1 R\nq0 _ -> qa 1 R\n",
    )
    .unwrap();
    let o = stam(&["verify", "--tm", &m, "--input", "11"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));

    // a trace of one input audited against another diverges
    let sys = path(dir.path(), "t.json");
    let tr = path(dir.path(), "t.jsonl");
    stam(&[
        "generate",
        "tm",
        "--machine",
        &m,
        "--input",
        "1",
        "--out",
        &sys,
    ]);
    stam(&["run", &sys, "--max-steps", "100000", "--out", &tr]);
    let o = stam(&["verify", "--tm", &m, "--input", "0", "--trace", &tr]);
    assert_ne!(o.status.code(), Some(0));
}

#[test]
fn verify_strict_small_region() {
    let o = stam(&[
        "verify",
        "--strict",
        "--blocks",
        "4",
        "--max-steps",
        "100000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("junk inert: true"));
    let o = stam(&["verify", "--strict", "--blocks", "8", "--max-steps", "50"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn verify_needs_a_mode() {
    assert_eq!(stam(&["verify"]).status.code(), Some(1));
}
