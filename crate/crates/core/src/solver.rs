//! Iterated elimination solvers and fixed-point verification.
//!
//! All three solution concepts share one engine: start from the full action
//! correspondence and repeatedly, simultaneously for both players and all
//! their keys, keep exactly the actions that some admissible conjecture
//! justifies. The concepts differ only in the key space and in which
//! conditions a conjecture must meet:
//!
//! * belief-free: keyed by payoff type, support inside the opponent's
//!   surviving graph, no other condition;
//! * belief-restricted: additionally the first-order belief must be
//!   admitted by the per-type restriction;
//! * interim: keyed by information type, conjectures live on the extended
//!   domain, and the marginal over state, opponent type, and opponent
//!   signal must equal the interim belief of the key exactly.
//!
//! Elimination is monotone, so the loop terminates after at most one round
//! per listed action. Convergence is detected by a round that changes
//! nothing; that same round re-justifies every survivor against the
//! converged correspondence, and those final conjectures are the witnesses
//! reported in the result. Cheap candidate scans (cached witnesses, point
//! masses, uniform spreads, per-cell selections) run before the exact
//! feasibility solver, which keeps the solver fast without affecting what
//! it computes: every shortcut answer passes the same definition-level
//! check the solver would otherwise enforce.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::Zero;

use crate::game::{
    ActionCorrespondence, BeliefPoint, BeliefRestriction, Conjecture, EconomicEnvironment,
    InformationStructure, OutcomePoint, Player, TypeRestriction,
};
use crate::lp::{check_justification, solve_justification, JustificationProblem};
use crate::rational::Rational;

/// Which solution concept a result belongs to.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SolveKind {
    BeliefFree,
    Delta,
    Interim,
}

/// Solver configuration: the concept plus its side data.
#[derive(Clone, Copy, Debug)]
pub enum SolveMode<'a> {
    BeliefFree,
    Delta { restriction: &'a BeliefRestriction },
    Interim { structure: &'a InformationStructure },
}

impl SolveMode<'_> {
    pub fn kind(&self) -> SolveKind {
        match self {
            SolveMode::BeliefFree => SolveKind::BeliefFree,
            SolveMode::Delta { .. } => SolveKind::Delta,
            SolveMode::Interim { .. } => SolveKind::Interim,
        }
    }
}

/// Identifies one justified action: the signal is zero whenever the
/// correspondence is keyed by payoff type alone.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct WitnessKey {
    pub player: Player,
    pub payoff_type: usize,
    pub signal: usize,
    pub action: usize,
}

/// Outcome of a solve: the round trace (first entry is the full
/// correspondence, last is the fixed point) and one justifying conjecture
/// per surviving action, valid against the converged correspondence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct SolveResult {
    pub kind: SolveKind,
    pub rounds: Vec<ActionCorrespondence>,
    pub witnesses: BTreeMap<WitnessKey, Conjecture>,
}

impl SolveResult {
    pub fn final_correspondence(&self) -> &ActionCorrespondence {
        self.rounds.last().expect("trace always holds the initial round")
    }

    /// Number of elimination rounds before the fixed point was reached.
    pub fn elimination_rounds(&self) -> usize {
        self.rounds.len() - 1
    }

    pub fn witness(&self, key: &WitnessKey) -> Option<&Conjecture> {
        self.witnesses.get(key)
    }
}

static UNRESTRICTED: TypeRestriction = TypeRestriction::Unrestricted;

fn initial_correspondence(env: &EconomicEnvironment, mode: &SolveMode) -> ActionCorrespondence {
    match mode {
        SolveMode::Interim { structure } => {
            ActionCorrespondence::full_information_type(env, structure)
        }
        _ => ActionCorrespondence::full_payoff_type(env),
    }
}

/// Conjecture support admitted for `player` this round: the opponent's
/// surviving graph, crossed with every state of nature.
fn build_support(
    env: &EconomicEnvironment,
    mode: &SolveMode,
    current: &ActionCorrespondence,
    player: Player,
) -> BTreeSet<OutcomePoint> {
    let opp = player.other();
    let mut support = BTreeSet::new();
    match mode {
        SolveMode::Interim { structure } => {
            for state in 0..env.num_states() {
                for opp_type in 0..env.num_types(opp) {
                    for opp_signal in 0..structure.num_signals(opp) {
                        for &opp_action in current.get(opp, opp_type, opp_signal) {
                            support.insert(OutcomePoint::extended(
                                state, opp_type, opp_signal, opp_action,
                            ));
                        }
                    }
                }
            }
        }
        _ => {
            for state in 0..env.num_states() {
                for opp_type in 0..env.num_types(opp) {
                    for &opp_action in current.at_type(opp, opp_type) {
                        support.insert(OutcomePoint::basic(state, opp_type, opp_action));
                    }
                }
            }
        }
    }
    support
}

fn restriction_of<'a>(mode: &SolveMode<'a>, player: Player, payoff_type: usize) -> &'a TypeRestriction {
    match mode {
        SolveMode::Delta { restriction } => restriction.entry(player, payoff_type),
        _ => &UNRESTRICTED,
    }
}

fn marginal_of<'a>(
    mode: &SolveMode<'a>,
    player: Player,
    payoff_type: usize,
    signal: usize,
) -> Option<&'a BTreeMap<BeliefPoint, Rational>> {
    match mode {
        SolveMode::Interim { structure } => Some(structure.belief(player, payoff_type, signal)),
        _ => None,
    }
}

/// Cheap candidate conjectures tried before the feasibility solver. Each
/// candidate is validated by [`check_justification`], so a hit is exactly
/// as authoritative as a solver witness; order is fixed for determinism.
fn quick_candidates(problem: &JustificationProblem) -> Vec<Conjecture> {
    let mut out = Vec::new();
    match problem.marginal {
        None => {
            for point in problem.support.iter() {
                out.push(Conjecture::point_mass(problem.player, *point));
            }
            let n = problem.support.len();
            if n > 1 {
                let uniform = Conjecture::new(
                    problem.player,
                    false,
                    problem
                        .support
                        .iter()
                        .map(|p| (*p, Rational::new(1.into(), (n as i64).into()))),
                );
                if let Ok(conjecture) = uniform {
                    out.push(conjecture);
                }
            }
        }
        Some(marginal) => {
            // The marginal fixes everything except which surviving opponent
            // action carries each cell's mass. Try three deterministic
            // selections: lexicographically first, greedy by worst-case
            // payoff margin, and the uniform spread within each cell.
            let positive: Vec<(&BeliefPoint, &Rational)> =
                marginal.iter().filter(|(_, v)| !v.is_zero()).collect();
            let cell_points = |cell: &BeliefPoint| -> Vec<OutcomePoint> {
                problem
                    .support
                    .iter()
                    .filter(|p| p.belief_point().as_ref() == Some(cell))
                    .copied()
                    .collect()
            };
            let mut lex = Vec::new();
            let mut greedy = Vec::new();
            let mut spread = Vec::new();
            let mut complete = true;
            for &(cell, mass) in &positive {
                let points = cell_points(cell);
                if points.is_empty() {
                    complete = false;
                    break;
                }
                lex.push((points[0], mass.clone()));
                let best = points
                    .iter()
                    .max_by_key(|p| {
                        let own = problem.env.utility_for(
                            problem.player,
                            problem.action,
                            p.opp_action,
                            p.state,
                            problem.payoff_type,
                            p.opp_type,
                        );
                        (0..problem.env.num_actions(problem.player))
                            .filter(|&b| b != problem.action)
                            .map(|b| {
                                own - problem.env.utility_for(
                                    problem.player,
                                    b,
                                    p.opp_action,
                                    p.state,
                                    problem.payoff_type,
                                    p.opp_type,
                                )
                            })
                            .min()
                            .unwrap_or_else(Rational::zero)
                    })
                    .copied()
                    .expect("cell has points");
                greedy.push((best, mass.clone()));
                let share = Rational::new(1.into(), (points.len() as i64).into());
                for p in &points {
                    spread.push((*p, mass * &share));
                }
            }
            if complete {
                for masses in [lex, greedy, spread] {
                    if let Ok(conjecture) =
                        Conjecture::new(problem.player, true, masses)
                    {
                        out.push(conjecture);
                    }
                }
            }
        }
    }
    out
}

/// One justification query with witness reuse: a cached conjecture from an
/// earlier round is accepted if it still passes the full definition-level
/// check (only the support can have shrunk), then candidate scans, then the
/// exact solver.
fn justify(problem: &JustificationProblem, cached: Option<&Conjecture>) -> Option<Conjecture> {
    if let Some(witness) = cached {
        if check_justification(problem, witness) {
            return Some(witness.clone());
        }
    }
    for candidate in quick_candidates(problem) {
        if check_justification(problem, &candidate) {
            return Some(candidate);
        }
    }
    solve_justification(problem)
}

/// Runs iterated simultaneous maximal elimination to its fixed point.
pub fn solve(env: &EconomicEnvironment, mode: SolveMode) -> SolveResult {
    let mut current = initial_correspondence(env, &mode);
    let mut rounds = vec![current.clone()];
    let mut cache: BTreeMap<WitnessKey, Conjecture> = BTreeMap::new();
    // Each non-final round eliminates at least one action.
    let bound = current.total_actions() + 2;
    for _ in 0..bound {
        let mut next = current.clone();
        let mut changed = false;
        for player in Player::BOTH {
            let support = build_support(env, &mode, &current, player);
            let keys: Vec<(usize, usize)> = current.keys(player).collect();
            for (payoff_type, signal) in keys {
                let mut keep = BTreeSet::new();
                for &action in current.get(player, payoff_type, signal) {
                    let key = WitnessKey { player, payoff_type, signal, action };
                    let problem = JustificationProblem {
                        env,
                        player,
                        payoff_type,
                        action,
                        support: &support,
                        marginal: marginal_of(&mode, player, payoff_type, signal),
                        restriction: restriction_of(&mode, player, payoff_type),
                    };
                    match justify(&problem, cache.get(&key)) {
                        Some(witness) => {
                            cache.insert(key, witness);
                            keep.insert(action);
                        }
                        None => {
                            cache.remove(&key);
                            changed = true;
                        }
                    }
                }
                next.set(player, payoff_type, signal, keep);
            }
        }
        if !changed {
            // `current` is the fixed point and every cache entry was
            // revalidated against it during this very round.
            return SolveResult { kind: mode.kind(), rounds, witnesses: cache };
        }
        rounds.push(next.clone());
        current = next;
    }
    unreachable!("elimination exceeded its round bound");
}

/// Belief-free rationalizability.
pub fn solve_bfr(env: &EconomicEnvironment) -> SolveResult {
    solve(env, SolveMode::BeliefFree)
}

/// Rationalizability under first-order belief restrictions.
pub fn solve_delta_r(env: &EconomicEnvironment, restriction: &BeliefRestriction) -> SolveResult {
    solve(env, SolveMode::Delta { restriction })
}

/// Interim rationalizability on an information structure.
pub fn solve_icr(env: &EconomicEnvironment, structure: &InformationStructure) -> SolveResult {
    solve(env, SolveMode::Interim { structure })
}

/// A reason why a claimed fixed point fails verification.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FixedPointDefect {
    /// The correspondence shape does not match the environment and mode.
    ShapeMismatch { detail: String },
    /// A listed action has no admissible justifying conjecture.
    Unjustifiable { key: WitnessKey },
}

/// Fresh witnesses for every listed action, proving the fixed-point
/// property directly.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FixedPointCertificate {
    pub witnesses: BTreeMap<WitnessKey, Conjecture>,
}

/// Checks from scratch that one elimination round maps `correspondence` to
/// itself: every listed action must be justifiable against the listed
/// sets. No caching and no shortcut scans are involved beyond what the
/// justification itself validates. All defects are reported, not only the
/// first.
pub fn verify_fixed_point(
    env: &EconomicEnvironment,
    mode: SolveMode,
    correspondence: &ActionCorrespondence,
) -> Result<FixedPointCertificate, Vec<FixedPointDefect>> {
    let expected = initial_correspondence(env, &mode);
    if !correspondence.is_subset_of(&expected)
        || correspondence.kind() != expected.kind()
        || Player::BOTH.iter().any(|&p| {
            correspondence.num_signals(p) != expected.num_signals(p)
                || correspondence.num_payoff_types(p) != expected.num_payoff_types(p)
        })
    {
        return Err(vec![FixedPointDefect::ShapeMismatch {
            detail: "correspondence does not fit the environment and mode".into(),
        }]);
    }
    let mut witnesses = BTreeMap::new();
    let mut defects = Vec::new();
    for player in Player::BOTH {
        let support = build_support(env, &mode, correspondence, player);
        let keys: Vec<(usize, usize)> = correspondence.keys(player).collect();
        for (payoff_type, signal) in keys {
            for &action in correspondence.get(player, payoff_type, signal) {
                let key = WitnessKey { player, payoff_type, signal, action };
                let problem = JustificationProblem {
                    env,
                    player,
                    payoff_type,
                    action,
                    support: &support,
                    marginal: marginal_of(&mode, player, payoff_type, signal),
                    restriction: restriction_of(&mode, player, payoff_type),
                };
                match solve_justification(&problem) {
                    Some(witness) => {
                        witnesses.insert(key, witness);
                    }
                    None => defects.push(FixedPointDefect::Unjustifiable { key }),
                }
            }
        }
    }
    if defects.is_empty() {
        Ok(FixedPointCertificate { witnesses })
    } else {
        Err(defects)
    }
}
