//! End-to-end checks of the command-line interface: report contents,
//! exit codes, error formatting, and cross-command composition.

use std::path::PathBuf;
use std::process::Output;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_ratsolve"))
        .args(args)
        .output()
        .expect("CLI binary must run")
}

fn stdout_of(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("reports are UTF-8")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).expect("errors are UTF-8")
}

#[test]
fn solve_reports_singletons_for_dominant_actions() {
    let out = run(&["solve", "bfr", &fixture("dominant.game")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("concept: belief-free rationalizability"), "{text}");
    assert!(text.contains("player 1 type s1: safe\n"), "{text}");
    assert!(text.contains("player 2 type t1: high\n"), "{text}");
}

#[test]
fn solve_trace_lists_every_round() {
    let out = run(&["solve", "bfr", &fixture("pennies.game"), "--trace"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("trace:"), "{text}");
    assert!(text.contains("round 0:"), "{text}");
    // Matching pennies eliminates nothing: one round only.
    assert!(text.contains("rounds: 0\n"), "{text}");
    assert!(!text.contains("round 1:"), "{text}");
}

#[test]
fn solve_witnesses_substantiate_each_survivor() {
    let out = run(&["solve", "dr", &fixture("pinned.game"), "--witnesses"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("player 1 type s1: match2\n"), "{text}");
    assert!(text.contains("witnesses:"), "{text}");
    assert!(text.contains("action match2 ="), "{text}");
}

#[test]
fn interim_solve_requires_a_structure_section() {
    let out = run(&["solve", "icr", &fixture("pennies.game")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("instance has no [structure] section"));
}

#[test]
fn parse_errors_carry_line_and_column() {
    let out = run(&["solve", "bfr", &fixture("broken.game")]);
    assert_eq!(out.status.code(), Some(2));
    let err = stderr_of(&out);
    assert!(err.contains("line 4, column 1: unknown key \"actionz1\""), "{err}");
    assert!(err.starts_with("error: "), "{err}");
}

#[test]
fn missing_files_are_input_errors() {
    let out = run(&["solve", "bfr", "/nonexistent/instance.game"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn unknown_subcommands_are_input_errors() {
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn canonical_output_feeds_the_interim_solver() {
    let out = run(&["canonical", &fixture("pennies.game")]);
    assert_eq!(out.status.code(), Some(0));
    let canonical_file =
        std::env::temp_dir().join(format!("ratsolve-canonical-{}.game", std::process::id()));
    std::fs::write(&canonical_file, &out.stdout).unwrap();
    let solved = run(&["solve", "icr", canonical_file.to_str().unwrap()]);
    std::fs::remove_file(&canonical_file).ok();
    assert_eq!(solved.status.code(), Some(0), "{}", stderr_of(&solved));
    let text = stdout_of(&solved);
    assert!(text.contains("concept: interim correlated rationalizability"), "{text}");
    // Pennies has no elimination, so every recommendation signal keeps its
    // own action rationalizable.
    assert!(text.contains("signal a1"), "{text}");
    assert!(text.contains("signal a2"), "{text}");
}

#[test]
fn consistency_verdicts_set_the_exit_code() {
    let ok = run(&["consistent", &fixture("dominant.game")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout_of(&ok).contains("consistent: yes"));

    let bad = run(&["consistent", &fixture("inconsistent.game")]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout_of(&bad).contains("consistent: no"));
}

#[test]
fn bne_enumerates_the_coordination_equilibria() {
    let out = run(&["bne", &fixture("coordination.game")]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout_of(&out);
    assert!(text.contains("pure equilibria: 4"), "{text}");
    assert!(text.contains("equilibrium 1:"), "{text}");
    assert!(text.contains("equilibrium 4:"), "{text}");
}

#[test]
fn union_check_confirms_the_identity_on_pennies() {
    let out = run(&["check", "union", &fixture("pennies.game"), "--samples", "50", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("structures: 1 canonical + 50 supplied"), "{text}");
    assert!(text.contains("counterexamples: 0"), "{text}");
    assert!(text.contains("verdict: holds"), "{text}");
}

#[test]
fn bne_union_check_confirms_the_identity_on_dominant() {
    let out =
        run(&["check", "bne-union", &fixture("dominant.game"), "--samples", "10", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout_of(&out));
    let text = stdout_of(&out);
    assert!(text.contains("counterexamples: 0"), "{text}");
    assert!(text.contains("verdict: holds"), "{text}");
}

#[test]
fn generation_is_seed_deterministic() {
    let a = run(&["gen", "env", "--seed", "11"]);
    let b = run(&["gen", "env", "--seed", "11"]);
    let c = run(&["gen", "env", "--seed", "12"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);

    let s = run(&["gen", "structure", "--seed", "11"]);
    assert_eq!(s.status.code(), Some(0));
    assert!(stdout_of(&s).contains("[structure]"));
}

#[test]
fn generated_environments_are_valid_solver_input() {
    let out = run(&["gen", "env", "--seed", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let generated =
        std::env::temp_dir().join(format!("ratsolve-gen-{}.game", std::process::id()));
    std::fs::write(&generated, &out.stdout).unwrap();
    let solved = run(&["solve", "bfr", generated.to_str().unwrap()]);
    std::fs::remove_file(&generated).ok();
    assert_eq!(solved.status.code(), Some(0), "{}", stderr_of(&solved));
}
