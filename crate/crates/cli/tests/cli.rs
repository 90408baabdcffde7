use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_mltt"));
    c.env_remove("MLTT_FUEL");
    c
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join(rel)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn reflection() -> String {
    here("../core/tests/fixtures/extensional/reflection.mltt").display().to_string()
}

fn fixture(name: &str) -> String {
    here("tests/fixtures").join(name).display().to_string()
}

#[test]
fn check_exit_codes() {
    let stdlib = here("../core/data/stdlib.mltt").display().to_string();
    assert_eq!(code(&run(&["check", &stdlib])), 0);
    let o = run(&["check", &reflection()]);
    assert_eq!(code(&o), 1);
    assert!(stderr(&o).contains("reflection.mltt:6:1: error"), "{}", stderr(&o));
    assert_eq!(code(&run(&["check", "--extensional", &reflection()])), 0);
    assert_eq!(code(&run(&["check", "/definitely/not/here.mltt"])), 3);
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mltt");
    std::fs::write(&bad, "def x := (\n").unwrap();
    let o = run(&["check", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("bad.mltt:1:"), "{}", stderr(&o));
}

#[test]
fn fuel_comes_from_the_environment() {
    let stdlib = here("../core/data/stdlib.mltt").display().to_string();
    let starved = bin().env("MLTT_FUEL", "1").args(["check", &stdlib]).output().unwrap();
    assert_eq!(code(&starved), 1, "{}", stderr(&starved));
    let zero = bin().env("MLTT_FUEL", "0").args(["check", &stdlib]).output().unwrap();
    assert_eq!(code(&zero), 2);
    assert_eq!(code(&run(&["check", "--fuel", "1", &stdlib])), 1);
}

#[test]
fn normalize_prints_normal_forms() {
    let f = fixture("normalize.mltt");
    let nf = |name: &str| {
        let o = run(&["normalize", &f, "--term", name]);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        stdout(&o).trim().to_owned()
    };
    assert_eq!(nf("j_base"), "a");
    assert_eq!(nf("c_l_refl"), "q");
    assert_eq!(nf("normal"), "q");
    assert_eq!(nf("q"), "q");
    assert_eq!(code(&run(&["normalize", &f, "--term", "missing"])), 1);
}

#[test]
fn normalizing_printed_output_reprints_it() {
    let f = fixture("normalize.mltt");
    let o = run(&["normalize", &f, "--term", "c_l"]);
    let printed = stdout(&o).trim().to_owned();
    let dir = tempfile::tempdir().unwrap();
    let again = dir.path().join("again.mltt");
    let src = format!(
        "{}\ndef again : Pi (x y z : A), Id A x y -> Id A y z -> Id A x z := {printed}\n",
        std::fs::read_to_string(&f).unwrap()
    );
    std::fs::write(&again, src).unwrap();
    let o2 = run(&["normalize", again.to_str().unwrap(), "--term", "again"]);
    assert_eq!(code(&o2), 0, "{}", stderr(&o2));
    assert_eq!(stdout(&o2).trim(), printed);
}

#[test]
fn semantics_rejects_a_broken_catalog() {
    let o = run(&["semantics", "--catalog", &fixture("broken.gpd")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("broken"), "{}", stderr(&o));
    assert_eq!(code(&run(&["semantics", "--catalog", "/no/such.gpd"])), 3);
}

#[test]
fn semantics_flags_the_reflection_file() {
    let cat = fixture("interval.gpd");
    let o = run(&["semantics", "--extensional", "--no-wfs", "--catalog", &cat, &reflection()]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).lines().any(|l| l.starts_with("FAIL ")), "{}", stdout(&o));
    // the same file does not check intensionally
    assert_eq!(code(&run(&["semantics", "--no-wfs", "--catalog", &cat, &reflection()])), 1);
}

#[test]
fn semantics_output_is_sorted_and_stable() {
    let cat = fixture("interval.gpd");
    let stdlib = here("../core/data/stdlib.mltt").display().to_string();
    let a = run(&["semantics", "--catalog", &cat, &stdlib]);
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    let b = run(&["semantics", "--catalog", &cat, &stdlib]);
    assert_eq!(stdout(&a), stdout(&b));
    let text = stdout(&a);
    let lines: Vec<&str> = text.lines().collect();
    let keys: Vec<Vec<&str>> = lines.iter().map(|l| l.split(' ').skip(1).collect()).collect();
    assert!(keys.windows(2).all(|w| w[0] <= w[1]));
    assert!(lines.iter().all(|l| l.split(' ').count() == 4));
}

#[test]
fn higher_examples() {
    let o = run(&["higher", "--graph", &fixture("one_edge.glob"), "--wordlen", "3", "--depth", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS surjectivity L3_D5 one_edge"));
    let g = here("../higher/tests/fixtures/two_cell.glob").display().to_string();
    let o = run(&["higher", "--globular", &g, "--maxdim", "2"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).contains("PASS complete operations dim1-2"));
    let o = run(&["higher", "--graph", &fixture("five_loops.glob"), "--wordlen", "50", "--depth", "6"]);
    assert_eq!(code(&o), 4);
    assert!(stderr(&o).contains("bound too large"), "{}", stderr(&o));
    // a raised limit lets a moderate run through
    let o = run(&["higher", "--graph", &fixture("five_loops.glob"), "--wordlen", "2", "--depth", "3", "--cell-limit", "10"]);
    assert_eq!(code(&o), 4);
    let o = run(&["higher", "--graph", &g]);
    assert_eq!(code(&o), 2, "a 2-cell is not a graph");
    let o = run(&["higher", "--globular", &here("../higher/tests/fixtures/not_globular.glob").display().to_string()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn higher_runs_are_deterministic() {
    let args = ["higher", "--all-graphs", "--max-vertices", "2", "--max-edges", "2", "--wordlen", "3", "--depth", "4"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(code(&a), 0, "{}", stdout(&a));
    assert_eq!(stdout(&a), stdout(&b));
}

#[test]
fn stdlib_command_regenerates_the_committed_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("stdlib.mltt");
    let o = run(&["stdlib", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).lines().all(|l| l.starts_with("PASS derivation")));
    let committed = std::fs::read_to_string(here("../core/data/stdlib.mltt")).unwrap();
    assert_eq!(std::fs::read_to_string(out).unwrap(), committed);
}
