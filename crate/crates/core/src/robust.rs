//! Informational-robustness checks.
//!
//! The identities checked here relate the three solution concepts: the
//! union over all information structures of interim-rationalizable actions
//! equals belief-free rationalizability, and the union over structures
//! consistent with a belief restriction equals restricted
//! rationalizability. The inclusion direction is sampled (every supplied
//! structure's interim sets must project into the baseline), while the
//! coverage direction is certified constructively through the canonical
//! structure: signals are action recommendations, belief rows are the
//! justifying conjectures of the baseline solve, and obedience is both
//! interim-rationalizable and an exact pure equilibrium there. The same
//! canonical construction drives the equilibrium-union check.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;
use thiserror::Error;

use crate::bne::{enumerate_pure_bne, BneResult};
use crate::game::{
    best_replies, pushforward_conjecture, ActionCorrespondence, BeliefPoint, BeliefRestriction,
    EconomicEnvironment, FirstOrderBelief, InformationStructure, Player, StatePoint,
    StrategyProfile,
};
use crate::rational::Rational;
use crate::solver::{solve_delta_r, solve_icr, SolveKind, SolveResult, WitnessKey};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum RobustError {
    #[error("baseline solve must be belief-free or restricted, not interim")]
    KindMismatch,
    #[error("player {player} payoff type {payoff_type} has no surviving action")]
    EmptyBaseline { player: Player, payoff_type: usize },
}

/// One belief row whose state marginal escapes its restriction set.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct ConsistencyFailure {
    pub player: Player,
    pub payoff_type: usize,
    pub signal: usize,
}

/// Outcome of [`is_consistent`]: all failing rows, none when consistent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ConsistencyReport {
    pub failures: Vec<ConsistencyFailure>,
}

impl ConsistencyReport {
    pub fn consistent(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks that every interim belief row's marginal over state and opponent
/// type is admitted by the player's restriction entry. Exact membership,
/// no tolerance.
pub fn is_consistent(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
    structure: &InformationStructure,
) -> ConsistencyReport {
    let mut failures = Vec::new();
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            let entry = restriction.entry(player, payoff_type);
            for signal in 0..structure.num_signals(player) {
                let row = structure.belief(player, payoff_type, signal);
                let mut marginal: FirstOrderBelief = BTreeMap::new();
                for (cell, mass) in row {
                    *marginal
                        .entry(StatePoint { state: cell.state, opp_type: cell.opp_type })
                        .or_insert_with(Rational::zero) += mass;
                }
                marginal.retain(|_, v| !v.is_zero());
                if !entry.contains(&marginal) {
                    failures.push(ConsistencyFailure { player, payoff_type, signal });
                }
            }
        }
    }
    ConsistencyReport { failures }
}

/// Builds the canonical information structure of a belief-free or
/// restricted baseline: signals are the player's own actions, and the row
/// of `(payoff type, action)` is the action's justifying conjecture with
/// opponent actions relabeled as opponent signals. Rows of eliminated
/// actions reuse the lexicographically first survivor's conjecture, so
/// every row is a baseline witness and the structure inherits consistency
/// from the witnesses' first-order beliefs.
pub fn canonical_structure(
    env: &EconomicEnvironment,
    baseline: &SolveResult,
) -> Result<InformationStructure, RobustError> {
    if baseline.kind == SolveKind::Interim {
        return Err(RobustError::KindMismatch);
    }
    let fixed = baseline.final_correspondence();
    let signals = [
        env.actions[Player::One.index()].clone(),
        env.actions[Player::Two.index()].clone(),
    ];
    let mut beliefs = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            let surviving = fixed.at_type(player, payoff_type);
            let Some(&first) = surviving.iter().next() else {
                return Err(RobustError::EmptyBaseline { player, payoff_type });
            };
            for action in 0..env.num_actions(player) {
                let source = if surviving.contains(&action) { action } else { first };
                let key = WitnessKey { player, payoff_type, signal: 0, action: source };
                let witness = baseline
                    .witness(&key)
                    .expect("surviving actions carry witnesses");
                let mut row: BTreeMap<BeliefPoint, Rational> = BTreeMap::new();
                for (point, mass) in witness.mass() {
                    let cell = BeliefPoint {
                        state: point.state,
                        opp_type: point.opp_type,
                        opp_signal: point.opp_action,
                    };
                    *row.entry(cell).or_insert_with(Rational::zero) += mass;
                }
                beliefs[player.index()].push(row);
            }
        }
    }
    Ok(InformationStructure { signals, beliefs })
}

/// The obedient profile on a canonical structure: follow the recommended
/// action whenever it survives in `baseline`, otherwise fall back to the
/// lexicographically first survivor of the payoff type.
pub fn obedient_profile(
    env: &EconomicEnvironment,
    baseline: &ActionCorrespondence,
) -> Result<StrategyProfile, RobustError> {
    let signal_counts = [env.num_actions(Player::One), env.num_actions(Player::Two)];
    let mut choices = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            let surviving = baseline.at_type(player, payoff_type);
            let Some(&first) = surviving.iter().next() else {
                return Err(RobustError::EmptyBaseline { player, payoff_type });
            };
            for action in 0..env.num_actions(player) {
                choices[player.index()].push(if surviving.contains(&action) {
                    action
                } else {
                    first
                });
            }
        }
    }
    Ok(StrategyProfile::new(signal_counts, choices))
}

/// Definitional equilibrium check of one profile: best reply at every
/// information type against the pushforward conjecture.
pub fn is_pure_bne(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    profile: &StrategyProfile,
) -> bool {
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            for signal in 0..structure.num_signals(player) {
                let Ok(conjecture) =
                    pushforward_conjecture(env, structure, player, payoff_type, signal, profile)
                else {
                    return false;
                };
                let Ok(replies) = best_replies(env, player, payoff_type, &conjecture) else {
                    return false;
                };
                if !replies.contains(&profile.action(player, payoff_type, signal)) {
                    return false;
                }
            }
        }
    }
    true
}

/// An interim-rationalizable action that escapes the baseline sets: a
/// counterexample to the inclusion direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct UnionExcess {
    pub player: Player,
    pub payoff_type: usize,
    pub action: usize,
    /// Index into the supplied structure list; the canonical structure is
    /// index 0 and supplied structures follow in order.
    pub structure_index: usize,
    pub signal: usize,
}

/// Result of the rationalizability union check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct UnionReport {
    pub baseline: SolveResult,
    pub canonical: InformationStructure,
    /// Whether the canonical structure passes [`is_consistent`].
    pub canonical_consistent: bool,
    /// Surviving actions that are not interim-rationalizable at their own
    /// recommendation signal on the canonical structure.
    pub obedience_failures: Vec<(Player, usize, usize)>,
    /// Baseline actions covered by no sampled interim set.
    pub missing: Vec<(Player, usize, usize)>,
    /// Interim actions outside the baseline, with their origin.
    pub excess: Vec<UnionExcess>,
    /// Indices (0 = canonical) of structures skipped as inconsistent.
    pub skipped_inconsistent: Vec<usize>,
}

impl UnionReport {
    /// The union identity as sampled: inclusion holds everywhere and the
    /// canonical structure certifies coverage.
    pub fn equal(&self) -> bool {
        self.canonical_consistent
            && self.obedience_failures.is_empty()
            && self.missing.is_empty()
            && self.excess.is_empty()
    }
}

/// Checks the union identity for the baseline induced by `restriction`
/// (the whole-simplex restriction gives the belief-free case): interim
/// sets of every consistent sampled structure must project into the
/// baseline, and the canonical structure plus any samples must jointly
/// cover it. Structure index 0 is the canonical structure; supplied
/// structures follow in order and inconsistent ones are skipped and
/// recorded.
pub fn check_union(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
    structures: &[InformationStructure],
) -> Result<UnionReport, RobustError> {
    let baseline = solve_delta_r(env, restriction);
    let canonical = canonical_structure(env, &baseline)?;
    let canonical_consistent = is_consistent(env, restriction, &canonical).consistent();
    let fixed = baseline.final_correspondence();

    let mut covered: BTreeMap<(Player, usize), BTreeSet<usize>> = BTreeMap::new();
    let mut excess = Vec::new();
    let mut skipped = Vec::new();
    let mut obedience_failures = Vec::new();

    let all: Vec<&InformationStructure> =
        std::iter::once(&canonical).chain(structures.iter()).collect();
    for (structure_index, structure) in all.iter().enumerate() {
        if !is_consistent(env, restriction, structure).consistent() {
            skipped.push(structure_index);
            continue;
        }
        let interim = solve_icr(env, structure);
        let interim_fixed = interim.final_correspondence();
        for player in Player::BOTH {
            for payoff_type in 0..env.num_types(player) {
                let baseline_set = fixed.at_type(player, payoff_type);
                for signal in 0..structure.num_signals(player) {
                    for &action in interim_fixed.get(player, payoff_type, signal) {
                        covered.entry((player, payoff_type)).or_default().insert(action);
                        if !baseline_set.contains(&action) {
                            excess.push(UnionExcess {
                                player,
                                payoff_type,
                                action,
                                structure_index,
                                signal,
                            });
                        }
                    }
                }
            }
        }
        if structure_index == 0 {
            // Obedience on the canonical structure: each survivor must be
            // interim-rationalizable at its own recommendation signal.
            for player in Player::BOTH {
                for payoff_type in 0..env.num_types(player) {
                    for &action in fixed.at_type(player, payoff_type) {
                        if !interim_fixed.get(player, payoff_type, action).contains(&action) {
                            obedience_failures.push((player, payoff_type, action));
                        }
                    }
                }
            }
        }
    }

    let mut missing = Vec::new();
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            let empty = BTreeSet::new();
            let hit = covered.get(&(player, payoff_type)).unwrap_or(&empty);
            for &action in fixed.at_type(player, payoff_type) {
                if !hit.contains(&action) {
                    missing.push((player, payoff_type, action));
                }
            }
        }
    }

    Ok(UnionReport {
        baseline,
        canonical,
        canonical_consistent,
        obedience_failures,
        missing,
        excess,
        skipped_inconsistent: skipped,
    })
}

/// An equilibrium-played action outside the baseline sets.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct BneExcess {
    pub player: Player,
    pub payoff_type: usize,
    pub action: usize,
    pub structure_index: usize,
}

/// Result of the equilibrium union check.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BneUnionReport {
    pub baseline: SolveResult,
    pub canonical: InformationStructure,
    pub canonical_consistent: bool,
    /// Whether the obedient profile passes the definitional equilibrium
    /// check on the canonical structure.
    pub obedient_is_equilibrium: bool,
    /// Baseline actions played by no sampled equilibrium.
    pub missing: Vec<(Player, usize, usize)>,
    /// Equilibrium-played actions outside the baseline.
    pub excess: Vec<BneExcess>,
    pub skipped_inconsistent: Vec<usize>,
    /// Whether any enumeration hit the pair cap.
    pub truncated: bool,
}

impl BneUnionReport {
    pub fn equal(&self) -> bool {
        self.canonical_consistent
            && self.obedient_is_equilibrium
            && self.missing.is_empty()
            && self.excess.is_empty()
    }
}

/// Checks that the actions played by pure equilibria, across the canonical
/// structure and the supplied consistent structures, are exactly the
/// baseline sets. Index 0 is again the canonical structure.
pub fn check_bne_union(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
    structures: &[InformationStructure],
    cap: u64,
) -> Result<BneUnionReport, RobustError> {
    let baseline = solve_delta_r(env, restriction);
    let canonical = canonical_structure(env, &baseline)?;
    let canonical_consistent = is_consistent(env, restriction, &canonical).consistent();
    let fixed = baseline.final_correspondence();
    let obedient = obedient_profile(env, fixed)?;
    let obedient_is_equilibrium = is_pure_bne(env, &canonical, &obedient);

    let mut covered: BTreeMap<(Player, usize), BTreeSet<usize>> = BTreeMap::new();
    let mut excess = Vec::new();
    let mut skipped = Vec::new();
    let mut truncated = false;

    let all: Vec<&InformationStructure> =
        std::iter::once(&canonical).chain(structures.iter()).collect();
    for (structure_index, structure) in all.iter().enumerate() {
        if !is_consistent(env, restriction, structure).consistent() {
            skipped.push(structure_index);
            continue;
        }
        let BneResult { profiles, truncated: hit_cap, .. } =
            enumerate_pure_bne(env, structure, cap);
        truncated |= hit_cap;
        for profile in &profiles {
            for player in Player::BOTH {
                for payoff_type in 0..env.num_types(player) {
                    let baseline_set = fixed.at_type(player, payoff_type);
                    for signal in 0..structure.num_signals(player) {
                        let action = profile.action(player, payoff_type, signal);
                        covered.entry((player, payoff_type)).or_default().insert(action);
                        if !baseline_set.contains(&action) {
                            excess.push(BneExcess { player, payoff_type, action, structure_index });
                        }
                    }
                }
            }
        }
    }
    excess.sort_unstable_by_key(|e| (e.player, e.payoff_type, e.action, e.structure_index));
    excess.dedup();

    let mut missing = Vec::new();
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            let empty = BTreeSet::new();
            let hit = covered.get(&(player, payoff_type)).unwrap_or(&empty);
            for &action in fixed.at_type(player, payoff_type) {
                if !hit.contains(&action) {
                    missing.push((player, payoff_type, action));
                }
            }
        }
    }

    Ok(BneUnionReport {
        baseline,
        canonical,
        canonical_consistent,
        obedient_is_equilibrium,
        missing,
        excess,
        skipped_inconsistent: skipped,
        truncated,
    })
}
