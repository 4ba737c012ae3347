//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line (visible under `cargo test --test acceptance --
//! --nocapture`). All checks are exact — zero tolerance — and every
//! random object is reproducible from the per-iteration seeds below.

use std::path::PathBuf;
use std::process::Output;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use ratsolve::bne::{enumerate_pure_bne, DEFAULT_BNE_CAP};
use ratsolve::game::{
    BeliefRestriction, EconomicEnvironment, InformationStructure, Player, StatePoint,
    TypeRestriction,
};
use ratsolve::oracle::{
    bfr_by_expost_dominance, complete_info_rationalizability, random_consistent_structure,
    random_environment, random_restriction, random_restriction_of_variant, random_structure,
    GeneratorSpec, RestrictionVariant,
};
use ratsolve::rational::{int, rat};
use ratsolve::robust::{
    canonical_structure, check_union, is_consistent, is_pure_bne, obedient_profile,
};
use ratsolve::solver::{
    solve, solve_bfr, solve_delta_r, solve_icr, verify_fixed_point, SolveMode, SolveResult,
};

/// Seed bases; criterion 3 re-derives the suite-1 and suite-2 instances
/// from the same bases, so the canonical structures it checks are exactly
/// the ones those suites solved.
const SUITE1_BASE: u64 = 1_000;
const SUITE2_BASES: [(RestrictionVariant, u64); 3] = [
    (RestrictionVariant::Support, 2_000),
    (RestrictionVariant::Polytope, 3_000),
    (RestrictionVariant::FiniteSet, 4_000),
];
const ORACLE_BASE: u64 = 5_000;
const DEGENERATE_BASE: u64 = 6_000;
const PINNED_BASE: u64 = 6_500;
const INVARIANT_BASE: u64 = 7_000;

const SUITE1_ENVS: usize = 200;
const SUITE2_ENVS: usize = 100;
const STRUCTURES_PER_ENV: usize = 20;

fn conclude(number: usize, name: &str, failures: usize) {
    let verdict = if failures == 0 { "PASS" } else { "FAIL" };
    println!("acceptance criterion {number} ({name}): {verdict}");
    assert_eq!(failures, 0, "criterion {number} ({name}) recorded {failures} failure(s)");
}

/// Desk-scale shape draw shared by all suites.
fn draw_spec(rng: &mut ChaCha8Rng) -> GeneratorSpec {
    GeneratorSpec {
        num_states: rng.gen_range(1..=3),
        num_actions: [rng.gen_range(1..=3), rng.gen_range(1..=3)],
        num_types: [rng.gen_range(1..=2), rng.gen_range(1..=2)],
        num_signals: [rng.gen_range(1..=3), rng.gen_range(1..=3)],
        utility_bound: 4,
        max_denominator: 4,
    }
}

/// The deterministic instance prefix for one suite iteration: shape, then
/// environment, then (for restricted suites) the restriction.
fn draw_instance(
    seed: u64,
    variant: Option<RestrictionVariant>,
) -> (GeneratorSpec, EconomicEnvironment, BeliefRestriction, ChaCha8Rng) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let spec = draw_spec(&mut rng);
    let env = random_environment(&spec, &mut rng);
    let restriction = match variant {
        Some(variant) => {
            random_restriction_of_variant(&env, variant, spec.max_denominator, &mut rng)
        }
        None => BeliefRestriction::unrestricted(&env),
    };
    (spec, env, restriction, rng)
}

#[test]
fn criterion_1_union_identity_over_arbitrary_structures() {
    let mut failures = 0;
    for i in 0..SUITE1_ENVS {
        let (spec, env, restriction, mut rng) = draw_instance(SUITE1_BASE + i as u64, None);
        let structures: Vec<InformationStructure> = (0..STRUCTURES_PER_ENV)
            .map(|_| random_structure(&env, spec.num_signals, spec.max_denominator, &mut rng))
            .collect();
        let report = check_union(&env, &restriction, &structures).unwrap();
        // Without restrictions the baseline must literally be the
        // belief-free correspondence.
        let belief_free = solve_bfr(&env);
        if !report.equal()
            || !report.skipped_inconsistent.is_empty()
            || report.baseline.final_correspondence() != belief_free.final_correspondence()
        {
            failures += 1;
            eprintln!("criterion 1 counterexample at seed {}: {report:?}", SUITE1_BASE + i as u64);
        }
    }
    conclude(1, "union identity over arbitrary structures", failures);
}

#[test]
fn criterion_2_union_identity_per_restriction_variant() {
    let mut failures = 0;
    for (variant, base) in SUITE2_BASES {
        for i in 0..SUITE2_ENVS {
            let (spec, env, restriction, mut rng) = draw_instance(base + i as u64, Some(variant));
            let structures: Vec<InformationStructure> = (0..STRUCTURES_PER_ENV)
                .map(|_| {
                    random_consistent_structure(
                        &env,
                        &restriction,
                        spec.num_signals,
                        spec.max_denominator,
                        &mut rng,
                    )
                })
                .collect();
            if structures.iter().any(|s| !is_consistent(&env, &restriction, s).consistent()) {
                failures += 1;
                eprintln!("criterion 2: inconsistent sample from generator at seed {}", base + i as u64);
                continue;
            }
            let report = check_union(&env, &restriction, &structures).unwrap();
            if !report.equal() || !report.skipped_inconsistent.is_empty() {
                failures += 1;
                eprintln!(
                    "criterion 2 counterexample ({variant:?}) at seed {}: {report:?}",
                    base + i as u64
                );
            }
        }
    }
    conclude(2, "union identity per restriction variant", failures);
}

/// Coverage and containment for the equilibrium union identity on one suite
/// instance: the obedient profile is an exact equilibrium of the canonical
/// structure, and every equilibrium action of sampled consistent
/// structures lies in the baseline sets.
fn equilibrium_union_holds(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
    baseline: &SolveResult,
    rng: &mut ChaCha8Rng,
) -> bool {
    let fixed = baseline.final_correspondence();
    let Ok(canonical) = canonical_structure(env, baseline) else {
        return false;
    };
    let Ok(obedient) = obedient_profile(env, fixed) else {
        return false;
    };
    if !is_pure_bne(env, &canonical, &obedient) {
        return false;
    }
    if !is_consistent(env, restriction, &canonical).consistent() {
        return false;
    }
    for _ in 0..2 {
        let structure =
            random_consistent_structure(env, restriction, [2, 2], 4, rng);
        let result = enumerate_pure_bne(env, &structure, DEFAULT_BNE_CAP);
        if result.truncated {
            return false;
        }
        for profile in &result.profiles {
            for player in Player::BOTH {
                for payoff_type in 0..env.num_types(player) {
                    for signal in 0..structure.num_signals(player) {
                        let action = profile.action(player, payoff_type, signal);
                        if !fixed.at_type(player, payoff_type).contains(&action) {
                            return false;
                        }
                    }
                }
            }
        }
    }
    true
}

#[test]
fn criterion_3_equilibrium_union_on_suite_instances() {
    let mut failures = 0;
    for i in 0..SUITE1_ENVS {
        let (_, env, restriction, mut rng) = draw_instance(SUITE1_BASE + i as u64, None);
        let baseline = solve_bfr(&env);
        if !equilibrium_union_holds(&env, &restriction, &baseline, &mut rng) {
            failures += 1;
            eprintln!("criterion 3 counterexample at seed {}", SUITE1_BASE + i as u64);
        }
    }
    for (variant, base) in SUITE2_BASES {
        for i in 0..SUITE2_ENVS {
            let (_, env, restriction, mut rng) = draw_instance(base + i as u64, Some(variant));
            let baseline = solve_delta_r(&env, &restriction);
            if !equilibrium_union_holds(&env, &restriction, &baseline, &mut rng) {
                failures += 1;
                eprintln!(
                    "criterion 3 counterexample ({variant:?}) at seed {}",
                    base + i as u64
                );
            }
        }
    }
    conclude(3, "equilibrium union on suite instances", failures);
}

#[test]
fn criterion_4_solver_matches_dominance_oracle() {
    let mut failures = 0;
    for i in 0..200 {
        let (_, env, _, _) = draw_instance(ORACLE_BASE + i as u64, None);
        let solved = solve_bfr(&env);
        let oracle = bfr_by_expost_dominance(&env);
        if *solved.final_correspondence() != oracle {
            failures += 1;
            eprintln!("criterion 4 disagreement at seed {}", ORACLE_BASE + i as u64);
        }
    }
    conclude(4, "solver agrees with the dominance oracle", failures);
}

#[test]
fn criterion_5_degenerate_equivalences() {
    let mut failures = 0;
    // Complete information: one state, one type per player.
    for i in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(DEGENERATE_BASE + i as u64);
        let spec = GeneratorSpec {
            num_states: 1,
            num_actions: [rng.gen_range(1..=3), rng.gen_range(1..=3)],
            num_types: [1, 1],
            num_signals: [1, 1],
            utility_bound: 4,
            max_denominator: 4,
        };
        let env = random_environment(&spec, &mut rng);
        let reference = complete_info_rationalizability(&env, 0, [0, 0]);
        let bfr = solve_bfr(&env);
        let unrestricted = BeliefRestriction::unrestricted(&env);
        let delta = solve_delta_r(&env, &unrestricted);
        let trivial = InformationStructure::degenerate(&env, 0, [0, 0]);
        let interim = solve_icr(&env, &trivial);
        let ok = Player::BOTH.iter().all(|&player| {
            let expected = &reference[player.index()];
            bfr.final_correspondence().at_type(player, 0) == expected
                && delta.final_correspondence().at_type(player, 0) == expected
                && interim.final_correspondence().get(player, 0, 0) == expected
        });
        if !ok {
            failures += 1;
            eprintln!("criterion 5 (complete info) counterexample at seed {}", DEGENERATE_BASE + i as u64);
        }
    }
    // Point-mass belief menus pin a state and opponent types.
    for i in 0..100 {
        let mut rng = ChaCha8Rng::seed_from_u64(PINNED_BASE + i as u64);
        let spec = draw_spec(&mut rng);
        let env = random_environment(&spec, &mut rng);
        let state = rng.gen_range(0..env.num_states());
        let pinned_types =
            [rng.gen_range(0..env.num_types(Player::One)), rng.gen_range(0..env.num_types(Player::Two))];
        let per_type = [Player::One, Player::Two].map(|player| {
            let opp = player.other();
            let pinned = StatePoint { state, opp_type: pinned_types[opp.index()] };
            vec![
                TypeRestriction::FiniteSet { beliefs: vec![[(pinned, int(1))].into()] };
                env.num_types(player)
            ]
        });
        let restriction = BeliefRestriction { per_type };
        let delta = solve_delta_r(&env, &restriction);
        let reference = complete_info_rationalizability(&env, state, pinned_types);
        let ok = Player::BOTH.iter().all(|&player| {
            delta
                .final_correspondence()
                .at_type(player, pinned_types[player.index()])
                == &reference[player.index()]
        });
        if !ok {
            failures += 1;
            eprintln!("criterion 5 (pinned) counterexample at seed {}", PINNED_BASE + i as u64);
        }
    }
    conclude(5, "degenerate equivalences", failures);
}

/// Positive affine transformation of both utility tensors; best replies,
/// and hence every correspondence, must be unchanged.
fn affine_transform(env: &EconomicEnvironment, rng: &mut ChaCha8Rng) -> EconomicEnvironment {
    let mut transformed = env.clone();
    for player in Player::BOTH {
        let scale = [rat(1, 2), int(2), rat(5, 2), int(3)][rng.gen_range(0..4)].clone();
        let shift = int(rng.gen_range(-2..=2));
        for value in &mut transformed.utility[player.index()] {
            *value = &*value * &scale + &shift;
        }
    }
    transformed
}

fn invariants_hold(
    env: &EconomicEnvironment,
    mode: SolveMode,
    result: &SolveResult,
) -> bool {
    // Monotone rounds.
    if !result.rounds.windows(2).all(|w| w[1].is_subset_of(&w[0])) {
        return false;
    }
    // Convergence within the theoretical bound: every recorded elimination
    // round removes at least one action.
    if result.elimination_rounds() > result.rounds[0].total_actions() {
        return false;
    }
    // Independent fixed-point verification of the solver's output.
    if verify_fixed_point(env, mode, result.final_correspondence()).is_err() {
        return false;
    }
    // Determinism.
    if solve(env, mode) != *result {
        return false;
    }
    true
}

#[test]
fn criterion_6_structural_invariants() {
    let mut failures = 0;
    for i in 0..200 {
        let mut rng = ChaCha8Rng::seed_from_u64(INVARIANT_BASE + i as u64);
        let spec = draw_spec(&mut rng);
        let env = random_environment(&spec, &mut rng);
        let restriction = random_restriction(&env, spec.max_denominator, &mut rng);
        let structure = random_structure(&env, spec.num_signals, spec.max_denominator, &mut rng);

        let bfr = solve_bfr(&env);
        let delta = solve_delta_r(&env, &restriction);
        let interim = solve_icr(&env, &structure);

        let mut ok = invariants_hold(&env, SolveMode::BeliefFree, &bfr)
            && invariants_hold(&env, SolveMode::Delta { restriction: &restriction }, &delta)
            && invariants_hold(&env, SolveMode::Interim { structure: &structure }, &interim);

        // Nonemptiness: always for the belief-free and interim concepts,
        // and under restrictions because every generated entry is nonempty.
        ok = ok
            && !bfr.final_correspondence().any_empty()
            && !delta.final_correspondence().any_empty()
            && !interim.final_correspondence().any_empty();

        // Restricted sets embed in the belief-free sets, and interim sets
        // project into them.
        ok = ok
            && Player::BOTH.iter().all(|&player| {
                (0..env.num_types(player)).all(|payoff_type| {
                    let bfr_set = bfr.final_correspondence().at_type(player, payoff_type);
                    delta
                        .final_correspondence()
                        .at_type(player, payoff_type)
                        .is_subset(bfr_set)
                        && (0..structure.num_signals(player)).all(|signal| {
                            interim
                                .final_correspondence()
                                .get(player, payoff_type, signal)
                                .is_subset(bfr_set)
                        })
                })
            });

        // Positive affine transformations leave every correspondence
        // unchanged.
        let transformed = affine_transform(&env, &mut rng);
        ok = ok
            && solve_bfr(&transformed).final_correspondence() == bfr.final_correspondence()
            && solve_delta_r(&transformed, &restriction).final_correspondence()
                == delta.final_correspondence()
            && solve_icr(&transformed, &structure).final_correspondence()
                == interim.final_correspondence();

        if !ok {
            failures += 1;
            eprintln!("criterion 6 violation at seed {}", INVARIANT_BASE + i as u64);
        }
    }
    conclude(6, "structural invariants", failures);
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn run_cli(args: &[&str]) -> Output {
    std::process::Command::new(env!("CARGO_BIN_EXE_ratsolve"))
        .args(args)
        .output()
        .expect("CLI binary must run")
}

#[test]
fn criterion_7_cli_determinism() {
    let pennies = fixture("pennies.game");
    let dominant = fixture("dominant.game");
    let coordination = fixture("coordination.game");
    let pinned = fixture("pinned.game");
    let inconsistent = fixture("inconsistent.game");

    let commands: Vec<(Vec<&str>, i32)> = vec![
        (vec!["solve", "bfr", &pennies, "--trace", "--witnesses"], 0),
        (vec!["solve", "dr", &pinned, "--witnesses"], 0),
        (vec!["solve", "icr", &coordination, "--trace"], 0),
        (vec!["bne", &coordination], 0),
        (vec!["consistent", &dominant], 0),
        (vec!["consistent", &inconsistent], 1),
        (vec!["canonical", &pennies], 0),
        (vec!["check", "union", &pennies, "--samples", "5", "--seed", "3"], 0),
        (vec!["check", "bne-union", &pennies, "--samples", "3", "--seed", "3"], 0),
        (vec!["gen", "env", "--seed", "9"], 0),
        (vec!["gen", "structure", "--seed", "9"], 0),
    ];

    let mut failures = 0;
    for (args, expected_code) in &commands {
        let first = run_cli(args);
        let second = run_cli(args);
        let ok = first.status.code() == Some(*expected_code)
            && second.status.code() == Some(*expected_code)
            && first.stdout == second.stdout
            && first.stderr == second.stderr
            && !first.stdout.is_empty();
        if !ok {
            failures += 1;
            eprintln!(
                "criterion 7: nondeterministic or failing command {:?} (codes {:?}/{:?})",
                args,
                first.status.code(),
                second.status.code()
            );
        }
    }
    conclude(7, "byte-identical CLI output", failures);
}

#[test]
fn acceptance_fixtures_behave_as_documented() {
    // The dominant-action instance collapses to singletons.
    let out = run_cli(&["solve", "bfr", &fixture("dominant.game")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("player 1 type s1: safe"), "{text}");
    assert!(text.contains("player 2 type t1: high"), "{text}");

    // A missing structure block is a usage error, not a crash.
    let out = run_cli(&["solve", "icr", &fixture("pennies.game")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stderr).unwrap().contains("no [structure] section"));

    // The union check reports zero counterexamples on the pennies file.
    let out = run_cli(&["check", "union", &fixture("pennies.game"), "--samples", "5", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("counterexamples: 0"), "{text}");

    // Pinned menus: only the state-n2 best reply survives for player 1.
    let out = run_cli(&["solve", "dr", &fixture("pinned.game")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("player 1 type s1: match2\n"), "{text}");

    // The public-coin coordination instance has exactly four pure
    // equilibria.
    let out = run_cli(&["bne", &fixture("coordination.game")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("pure equilibria: 4"), "{text}");
}
