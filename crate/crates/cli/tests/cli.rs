use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const SHIFT_RIGHT: &str = "kind ca\nalphabet 2\nneigh (-1)\nrule\n0 -> 0\n1 -> 1\n";
const SHIFT_LEFT: &str = "kind ca\nalphabet 2\nneigh (1)\nrule\n0 -> 0\n1 -> 1\n";
const PAIR_SWAP: &str = "kind cca
alphabet 2
neigh (0) (1)
interaction
0 0 -> 0 0
0 1 -> 1 0
1 0 -> 0 1
1 1 -> 1 1
update
0 -> 0
1 -> 1
";

struct Workspace {
    dir: TempDir,
}

impl Workspace {
    fn new() -> Self {
        Workspace { dir: tempfile::tempdir().unwrap() }
    }

    fn file(&self, name: &str, text: &str) -> PathBuf {
        let p = self.dir.path().join(name);
        fs::write(&p, text).unwrap();
        p
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }
}

fn cca<P: AsRef<std::ffi::OsStr>>(args: &[P]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cca")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&cca::<&str>(&[])), 1);
    assert_eq!(code(&cca(&["frobnicate"])), 1);
    assert_eq!(code(&cca(&["run", "only-one-arg"])), 1);
    let help = cca(&["--help"]);
    assert_eq!(code(&help), 0);
    assert!(stdout(&help).contains("search"));
}

#[test]
fn check_accepts_compiled_rule() {
    let w = Workspace::new();
    let ca = w.file("shift.rule", SHIFT_RIGHT);
    let out = w.path("shift.cca");
    assert_eq!(code(&cca(&["compile", "ca-to-cca", s(&ca), "-o", s(&out)])), 0);
    let o = cca(&["check", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("kind cca\nalphabet 2x2\nneigh (-1) (0)\n"), "{text}");
    assert!(text.contains("extended (-1) (0) (1)"));
    assert!(text.contains("commutative yes"));
    assert!(text.contains("reversible no"));
}

#[test]
fn check_reports_witness_and_exits_two() {
    let w = Workspace::new();
    let p = w.file("swap.rule", PAIR_SWAP);
    let o = cca(&["check", s(&p)]);
    assert_eq!(code(&o), 2);
    let text = stdout(&o);
    assert!(text.contains("commutative no"));
    assert!(text.contains("witness offset (1)\nwitness region (0) (1) (2)\nwitness assignment 0 0 1\n"), "{text}");
    assert!(stderr(&o).contains("not translation commutative"));
}

#[test]
fn parse_errors_exit_two() {
    let w = Workspace::new();
    let missing_row = w.file("partial.rule", "kind ca\nalphabet 2\nneigh (0)\nrule\n0 -> 1\n");
    let o = cca(&["check", s(&missing_row)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("table not total: rule has no row for input 1"), "{}", stderr(&o));

    let bad_line = w.file("bad.rule", "kind ca\nalphabet 2\nneigh (0\n");
    let o = cca(&["check", s(&bad_line)]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"));

    assert_eq!(code(&cca(&["check", s(&w.path("absent.rule"))])), 2);

    let rule = w.file("shift.rule", SHIFT_RIGHT);
    let cfg = w.file("bad.cfg", "dims 4\ncells 0 1 2 0\n");
    assert_eq!(code(&cca(&["run", s(&rule), s(&cfg)])), 2);
}

#[test]
fn run_prints_trajectory() {
    let w = Workspace::new();
    let rule = w.file("shift.rule", SHIFT_RIGHT);
    let cfg = w.file("start.cfg", "dims 4\ncells 0 0 1 1\n");
    let o = cca(&["run", s(&rule), s(&cfg), "--steps", "4"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "kind ca\ndims 4\nalphabet 2\nsteps 4\n0 0 1 1\n1 0 0 1\n1 1 0 0\n0 1 1 0\n0 0 1 1\n");

    let out = w.path("traj.txt");
    assert_eq!(code(&cca(&["run", s(&rule), s(&cfg), "--steps", "2", "-o", s(&out)])), 0);
    let saved = fs::read_to_string(out).unwrap();
    assert!(saved.ends_with("0 0 1 1\n1 0 0 1\n1 1 0 0\n"));
}

#[test]
fn compiled_automaton_tracks_source() {
    let w = Workspace::new();
    let rule = w.file("shift.rule", SHIFT_RIGHT);
    let compiled = w.path("shift.cca");
    assert_eq!(code(&cca(&["compile", "ca-to-cca", s(&rule), "-o", s(&compiled)])), 0);
    let cfg = w.file("start.cfg", "dims 4\ncells 0.1 0.0 1.1 1.0\n");
    let o = cca(&["run", s(&compiled), s(&cfg), "--steps", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let last = stdout(&o).lines().last().unwrap().to_string();
    let firsts: Vec<&str> = last.split(' ').map(|c| &c[..1]).collect();
    assert_eq!(firsts, ["1", "0", "0", "1"]);
}

#[test]
fn margolus_builtins() {
    let w = Workspace::new();
    let rule = w.path("margolus.cca");
    assert_eq!(code(&cca(&["compile", "margolus", "--u", "swap", "--v", "identity", "-o", s(&rule)])), 0);
    let cfg = w.file("start.cfg", "dims 4\ncells 0.0 1.1 1.0 0.1\n");
    let o = cca(&["run", s(&rule), s(&cfg), "--steps", "2"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().skip(4).map(String::from).collect();
    assert_eq!(lines, ["0.0 1.1 1.0 0.1", "1.3 0.2 0.3 1.2", "1.0 0.1 0.0 1.1"]);
}

#[test]
fn margolus_block_file() {
    let w = Workspace::new();
    let swap = w.file("swap.block", "alphabet 2\nblock\n0 0 -> 0 0\n0 1 -> 1 0\n1 0 -> 0 1\n1 1 -> 1 1\n");
    let from_file = cca(&["compile", "margolus", "--u", s(&swap), "--v", s(&swap)]);
    let builtin = cca(&["compile", "margolus", "--u", "swap", "--v", "swap"]);
    assert_eq!(code(&from_file), 0, "{}", stderr(&from_file));
    assert_eq!(stdout(&from_file), stdout(&builtin));
}

#[test]
fn reversible_compile_invert_round_trip() {
    let w = Workspace::new();
    let fwd = w.file("right.rule", SHIFT_RIGHT);
    let rev = w.file("left.rule", SHIFT_LEFT);
    let rcca = w.path("shift.rcca");
    let inv = w.path("shift.inv");
    assert_eq!(code(&cca(&["compile", "rca-to-rcca", s(&fwd), s(&rev), "--addition", "0 1", "-o", s(&rcca)])), 0);
    let o = cca(&["check", s(&rcca)]);
    assert!(stdout(&o).contains("reversible yes"));
    assert_eq!(code(&cca(&["invert", s(&rcca), "-o", s(&inv)])), 0);

    let start = "dims 5\ncells 0.1 1.1 1.0 0.0 1.0\n";
    let cfg = w.file("start.cfg", start);
    let forward = stdout(&cca(&["run", s(&rcca), s(&cfg), "--steps", "3"]));
    let end = forward.lines().last().unwrap();
    let cfg2 = w.file("end.cfg", &format!("dims 5\ncells {end}\n"));
    let back = stdout(&cca(&["run", s(&inv), s(&cfg2), "--steps", "3"]));
    assert_eq!(back.lines().last().unwrap(), "0.1 1.1 1.0 0.0 1.0");
}

#[test]
fn reduce_matches_compiled_automaton() {
    let w = Workspace::new();
    let rule = w.file("shift.rule", SHIFT_RIGHT);
    let compiled = w.path("shift.cca");
    let reduced = w.path("shift.reduced");
    assert_eq!(code(&cca(&["compile", "ca-to-cca", s(&rule), "-o", s(&compiled)])), 0);
    assert_eq!(code(&cca(&["reduce", s(&compiled), "-o", s(&reduced)])), 0);
    let text = fs::read_to_string(&reduced).unwrap();
    assert!(text.starts_with("kind ca\nalphabet 2x2\n"), "{text}");
    let cfg = w.file("start.cfg", "dims 5\ncells 0.1 1.1 1.0 0.0 1.0\n");
    let a = stdout(&cca(&["run", s(&compiled), s(&cfg), "--steps", "3"]));
    let b = stdout(&cca(&["run", s(&reduced), s(&cfg), "--steps", "3"]));
    assert_eq!(a.lines().skip(4).collect::<Vec<_>>(), b.lines().skip(4).collect::<Vec<_>>());
}

#[test]
fn coloured_schedule_compiles() {
    let w = Workspace::new();
    let mut text = String::from("alphabet 2\nneigh (-1) (0) (1)\ncolours 2\ntile 2 : 0 1\nrule 0\n");
    for i in 0..8u32 {
        text += &format!("{} {} {} -> {}\n", i >> 2, (i >> 1) & 1, i & 1, (i >> 2) ^ (i & 1));
    }
    text += "rule 1\n";
    for i in 0..8u32 {
        text += &format!("{} {} {} -> {}\n", i >> 2, (i >> 1) & 1, i & 1, (i >> 1) & 1);
    }
    let sched = w.file("xor.sched", &text);
    let out = w.path("xor.cca");
    let o = cca(&["compile", "coloured", s(&sched), "-o", s(&out)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    // Σ1 . colour . clock; white cells read 1 on both sides.
    let cfg = w.file("start.cfg", "dims 4\ncells 0.0.0 1.1.0 0.0.0 1.1.0\n");
    let o = cca(&["run", s(&out), s(&cfg), "--steps", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o).lines().last().unwrap(), "0.0.1 1.1.1 0.0.1 1.1.1");
    let cfg = w.file("start2.cfg", "dims 4\ncells 0.0.0 1.1.0 0.0.0 0.1.0\n");
    let o = cca(&["run", s(&out), s(&cfg), "--steps", "1"]);
    assert_eq!(stdout(&o).lines().last().unwrap(), "1.0.1 1.1.1 1.0.1 0.1.1");
}

#[test]
fn search_reports_counts() {
    let w = Workspace::new();
    let spec = w.file("shift.search", "alphabet 2\nneigh (0) (1)\nreversible true\ntarget shift-right\nrings 4 5 6\n");
    let o = cca(&["search", s(&spec)]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("candidates 48\ncommutative 8\nmatches 0\n"), "{text}");
    assert!(text.contains("finite-lattice evidence only"));
}

#[test]
fn search_emits_matches() {
    let w = Workspace::new();
    let spec = w.file("id.search", "alphabet 2\nneigh (0)\nreversible true\ntarget identity\nrings 3\n");
    let o = cca(&["search", s(&spec), "--emit-matches"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    assert!(text.contains("matches 2\n"));
    assert_eq!(text.matches("kind cca").count(), 2);
}

#[test]
fn search_ceiling_exits_three() {
    let w = Workspace::new();
    let spec = w.file(
        "big.search",
        "alphabet 2\nneigh (0) (1)\nreversible true\ntarget shift-right\nrings 4\ncandidate-ceiling 10\n",
    );
    let o = cca(&["search", s(&spec)]);
    assert_eq!(code(&o), 3);
    assert!(stderr(&o).contains("exceeds the ceiling"));
}
