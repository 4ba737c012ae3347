//! Deterministic text rendering of solver output.
//!
//! Every renderer walks its data in fixed index order and prints exact
//! rationals, so the same input always yields byte-identical text. The
//! conjecture cells reuse the instance-file token syntax
//! (`state:type[:signal]:action=mass`) to stay readable next to the
//! inputs.

use std::fmt::Write as _;

use crate::bne::BneResult;
use crate::game::{
    ActionCorrespondence, EconomicEnvironment, InformationStructure, Player, StrategyProfile,
};
use crate::rational::format_rational;
use crate::robust::{BneUnionReport, ConsistencyReport, UnionReport};
use crate::solver::{SolveKind, SolveResult, WitnessKey};

fn concept_name(kind: SolveKind) -> &'static str {
    match kind {
        SolveKind::BeliefFree => "belief-free rationalizability",
        SolveKind::Delta => "restricted rationalizability",
        SolveKind::Interim => "interim correlated rationalizability",
    }
}

fn action_list(env: &EconomicEnvironment, player: Player, set: &std::collections::BTreeSet<usize>) -> String {
    if set.is_empty() {
        return "-".to_string();
    }
    set.iter()
        .map(|&a| env.actions[player.index()][a].as_str())
        .collect::<Vec<_>>()
        .join(" ")
}

/// One line per key of the correspondence, in player/type/signal order.
fn write_correspondence(
    out: &mut String,
    indent: &str,
    env: &EconomicEnvironment,
    structure: Option<&InformationStructure>,
    sets: &ActionCorrespondence,
) {
    for player in Player::BOTH {
        for payoff_type in 0..sets.num_payoff_types(player) {
            let type_name = &env.payoff_types[player.index()][payoff_type];
            for signal in 0..sets.num_signals(player) {
                let set = sets.get(player, payoff_type, signal);
                match structure {
                    Some(structure) => {
                        let signal_name = &structure.signals[player.index()][signal];
                        let _ = writeln!(
                            out,
                            "{indent}player {player} type {type_name} signal {signal_name}: {}",
                            action_list(env, player, set)
                        );
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "{indent}player {player} type {type_name}: {}",
                            action_list(env, player, set)
                        );
                    }
                }
            }
        }
    }
}

fn witness_cells(
    env: &EconomicEnvironment,
    structure: Option<&InformationStructure>,
    player: Player,
    witness: &crate::game::Conjecture,
) -> String {
    let opp = player.other();
    witness
        .mass()
        .iter()
        .map(|(point, mass)| {
            let state = &env.nature_states[point.state];
            let opp_type = &env.payoff_types[opp.index()][point.opp_type];
            let opp_action = &env.actions[opp.index()][point.opp_action];
            match point.opp_signal {
                Some(signal) => {
                    let name = structure
                        .map(|s| s.signals[opp.index()][signal].as_str())
                        .unwrap_or("?");
                    format!("{state}:{opp_type}:{name}:{opp_action}={}", format_rational(mass))
                }
                None => format!("{state}:{opp_type}:{opp_action}={}", format_rational(mass)),
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Renders a solve: concept, round count, the fixed point, and optionally
/// the full elimination trace and the justifying conjectures.
pub fn render_solve(
    env: &EconomicEnvironment,
    structure: Option<&InformationStructure>,
    result: &SolveResult,
    trace: bool,
    witnesses: bool,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "concept: {}", concept_name(result.kind));
    let _ = writeln!(out, "rounds: {}", result.elimination_rounds());
    write_correspondence(&mut out, "", env, structure, result.final_correspondence());

    if trace {
        let _ = writeln!(out, "trace:");
        for (round, sets) in result.rounds.iter().enumerate() {
            let _ = writeln!(out, "round {round}:");
            write_correspondence(&mut out, "  ", env, structure, sets);
        }
    }

    if witnesses {
        let _ = writeln!(out, "witnesses:");
        for (key, witness) in &result.witnesses {
            let WitnessKey { player, payoff_type, signal, action } = *key;
            let type_name = &env.payoff_types[player.index()][payoff_type];
            let action_name = &env.actions[player.index()][action];
            let cells = witness_cells(env, structure, player, witness);
            match structure {
                Some(structure) if result.kind == SolveKind::Interim => {
                    let signal_name = &structure.signals[player.index()][signal];
                    let _ = writeln!(
                        out,
                        "  player {player} type {type_name} signal {signal_name} action {action_name} = {cells}"
                    );
                }
                _ => {
                    let _ = writeln!(
                        out,
                        "  player {player} type {type_name} action {action_name} = {cells}"
                    );
                }
            }
        }
    }
    out
}

fn write_profile(
    out: &mut String,
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    profile: &StrategyProfile,
) {
    for player in Player::BOTH {
        let cells: Vec<String> = (0..env.num_types(player))
            .flat_map(|payoff_type| {
                let type_name = &env.payoff_types[player.index()][payoff_type];
                (0..structure.num_signals(player)).map(move |signal| {
                    let signal_name = &structure.signals[player.index()][signal];
                    let action = profile.action(player, payoff_type, signal);
                    let action_name = &env.actions[player.index()][action];
                    format!("{type_name}:{signal_name}->{action_name}")
                })
            })
            .collect();
        let _ = writeln!(out, "  player {player}: {}", cells.join(" "));
    }
}

/// Renders an equilibrium enumeration: totals, then every profile found.
pub fn render_bne(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    result: &BneResult,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "profile pairs: {}", result.total_pairs);
    let _ = writeln!(out, "examined: {}", result.examined);
    if result.truncated {
        let _ = writeln!(out, "note: enumeration stopped at the pair cap");
    }
    let _ = writeln!(out, "pure equilibria: {}", result.profiles.len());
    for (index, profile) in result.profiles.iter().enumerate() {
        let _ = writeln!(out, "equilibrium {}:", index + 1);
        write_profile(&mut out, env, structure, profile);
    }
    out
}

/// Renders a consistency check of interim beliefs against a restriction.
pub fn render_consistency(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    report: &ConsistencyReport,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "consistent: {}", if report.consistent() { "yes" } else { "no" });
    for failure in &report.failures {
        let type_name = &env.payoff_types[failure.player.index()][failure.payoff_type];
        let signal_name = &structure.signals[failure.player.index()][failure.signal];
        let _ = writeln!(
            out,
            "  player {} type {} signal {}: state marginal escapes the restriction",
            failure.player, type_name, signal_name
        );
    }
    out
}

fn action_line(env: &EconomicEnvironment, player: Player, payoff_type: usize, action: usize) -> String {
    format!(
        "player {} type {} action {}",
        player,
        env.payoff_types[player.index()][payoff_type],
        env.actions[player.index()][action]
    )
}

/// Renders the rationalizability union check.
pub fn render_union(env: &EconomicEnvironment, report: &UnionReport, supplied: usize) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "identity: rationalizability union");
    let _ = writeln!(out, "baseline concept: {}", concept_name(report.baseline.kind));
    let _ = writeln!(out, "baseline rounds: {}", report.baseline.elimination_rounds());
    write_correspondence(
        &mut out,
        "baseline ",
        env,
        None,
        report.baseline.final_correspondence(),
    );
    let _ = writeln!(out, "structures: 1 canonical + {supplied} supplied");
    let _ = writeln!(out, "skipped inconsistent: {}", report.skipped_inconsistent.len());
    let _ = writeln!(
        out,
        "canonical consistent: {}",
        if report.canonical_consistent { "yes" } else { "no" }
    );
    for &(player, payoff_type, action) in &report.obedience_failures {
        let _ = writeln!(
            out,
            "obedience failure: {} not interim-rationalizable at its own signal",
            action_line(env, player, payoff_type, action)
        );
    }
    for &(player, payoff_type, action) in &report.missing {
        let _ = writeln!(out, "missing: {}", action_line(env, player, payoff_type, action));
    }
    for excess in &report.excess {
        let _ = writeln!(
            out,
            "excess: {} from structure {} signal index {}",
            action_line(env, excess.player, excess.payoff_type, excess.action),
            excess.structure_index,
            excess.signal
        );
    }
    let counterexamples = usize::from(!report.canonical_consistent)
        + report.obedience_failures.len()
        + report.missing.len()
        + report.excess.len();
    let _ = writeln!(out, "counterexamples: {counterexamples}");
    let _ = writeln!(out, "verdict: {}", if report.equal() { "holds" } else { "FAILS" });
    out
}

/// Renders the equilibrium union check.
pub fn render_bne_union(
    env: &EconomicEnvironment,
    report: &BneUnionReport,
    supplied: usize,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "identity: equilibrium union");
    let _ = writeln!(out, "baseline concept: {}", concept_name(report.baseline.kind));
    let _ = writeln!(out, "baseline rounds: {}", report.baseline.elimination_rounds());
    write_correspondence(
        &mut out,
        "baseline ",
        env,
        None,
        report.baseline.final_correspondence(),
    );
    let _ = writeln!(out, "structures: 1 canonical + {supplied} supplied");
    let _ = writeln!(out, "skipped inconsistent: {}", report.skipped_inconsistent.len());
    let _ = writeln!(
        out,
        "canonical consistent: {}",
        if report.canonical_consistent { "yes" } else { "no" }
    );
    let _ = writeln!(
        out,
        "obedient profile is an equilibrium: {}",
        if report.obedient_is_equilibrium { "yes" } else { "no" }
    );
    if report.truncated {
        let _ = writeln!(out, "note: some enumeration stopped at the pair cap");
    }
    for &(player, payoff_type, action) in &report.missing {
        let _ = writeln!(out, "missing: {}", action_line(env, player, payoff_type, action));
    }
    for excess in &report.excess {
        let _ = writeln!(
            out,
            "excess: {} from structure {}",
            action_line(env, excess.player, excess.payoff_type, excess.action),
            excess.structure_index
        );
    }
    let counterexamples = usize::from(!report.canonical_consistent)
        + usize::from(!report.obedient_is_equilibrium)
        + report.missing.len()
        + report.excess.len();
    let _ = writeln!(out, "counterexamples: {counterexamples}");
    let _ = writeln!(out, "verdict: {}", if report.equal() { "holds" } else { "FAILS" });
    out
}
