//! Domain types for two-player incomplete-information games.
//!
//! An [`EconomicEnvironment`] holds the payoff-relevant primitives: states of
//! nature, per-player actions, payoff types, and exact utility tensors. An
//! [`InformationStructure`] appends signal sets and interim beliefs, turning
//! the environment into a Bayesian game. A [`Conjecture`] is one player's
//! belief over the unknowns (state of nature, opponent type, opponent action,
//! and optionally the opponent signal). [`BeliefRestriction`] describes, per
//! player and payoff type, which first-order beliefs over state and opponent
//! type the analyst is willing to entertain.
//!
//! All values are immutable after construction and every operation here is a
//! pure function, so shared instances can be used concurrently.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Zero};
use thiserror::Error;

use crate::rational::{format_rational, Rational};

/// One of the two players. Indexing is hard-wired to two players; the
/// opponent of `i` is always `i.other()`.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Player {
    One,
    Two,
}

impl Player {
    pub const BOTH: [Player; 2] = [Player::One, Player::Two];

    pub fn other(self) -> Player {
        match self {
            Player::One => Player::Two,
            Player::Two => Player::One,
        }
    }

    /// Zero-based index for array storage.
    pub fn index(self) -> usize {
        match self {
            Player::One => 0,
            Player::Two => 1,
        }
    }

    /// One-based number as used in game files and reports.
    pub fn number(self) -> usize {
        self.index() + 1
    }

    pub fn from_number(n: usize) -> Option<Player> {
        match n {
            1 => Some(Player::One),
            2 => Some(Player::Two),
            _ => None,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.number())
    }
}

/// A point of `Θ0 × Θ_{-i}`: a state of nature together with an opponent
/// payoff type. First-order beliefs and belief restrictions live on these.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct StatePoint {
    pub state: usize,
    pub opp_type: usize,
}

/// A point of `Θ0 × Θ_{-i} × Y_{-i}`: what an interim belief row of an
/// information structure is defined over.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BeliefPoint {
    pub state: usize,
    pub opp_type: usize,
    pub opp_signal: usize,
}

impl BeliefPoint {
    pub fn state_point(self) -> StatePoint {
        StatePoint { state: self.state, opp_type: self.opp_type }
    }
}

/// A point of a conjecture domain. `opp_signal` is `None` for the basic
/// domain `Θ0 × Θ_{-i} × A_{-i}` and `Some` for the extended domain
/// `Θ0 × Θ_{-i} × Y_{-i} × A_{-i}` used by interim solving.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct OutcomePoint {
    pub state: usize,
    pub opp_type: usize,
    pub opp_signal: Option<usize>,
    pub opp_action: usize,
}

impl OutcomePoint {
    pub fn basic(state: usize, opp_type: usize, opp_action: usize) -> OutcomePoint {
        OutcomePoint { state, opp_type, opp_signal: None, opp_action }
    }

    pub fn extended(state: usize, opp_type: usize, opp_signal: usize, opp_action: usize) -> OutcomePoint {
        OutcomePoint { state, opp_type, opp_signal: Some(opp_signal), opp_action }
    }

    pub fn state_point(self) -> StatePoint {
        StatePoint { state: self.state, opp_type: self.opp_type }
    }

    pub fn belief_point(self) -> Option<BeliefPoint> {
        self.opp_signal.map(|opp_signal| BeliefPoint {
            state: self.state,
            opp_type: self.opp_type,
            opp_signal,
        })
    }
}

/// First-order belief: an exact distribution over `Θ0 × Θ_{-i}`.
pub type FirstOrderBelief = BTreeMap<StatePoint, Rational>;

/// Errors raised by the domain operations.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum GameError {
    #[error("conjecture domain mismatch: expected {expected} domain")]
    DomainMismatch { expected: &'static str },
    #[error("value belongs to player {found}, operation is for player {expected}")]
    WrongPlayer { expected: Player, found: Player },
    #[error("not a probability distribution: {reason}")]
    NotADistribution { reason: String },
    #[error("index out of range: {what}")]
    IndexOutOfRange { what: String },
}

/// The payoff-relevant primitives of a two-player incomplete-information
/// game: finite states of nature, and per player a finite action set, a
/// finite payoff-type set, and an exact utility tensor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EconomicEnvironment {
    /// Names of the states of nature, in index order.
    pub nature_states: Vec<String>,
    /// Per player: action names in index order.
    pub actions: [Vec<String>; 2],
    /// Per player: payoff-type names in index order.
    pub payoff_types: [Vec<String>; 2],
    /// Per player: dense utility tensor indexed by
    /// `(a_1, a_2, state, type_1, type_2)`, row-major in that order.
    pub utility: [Vec<Rational>; 2],
}

impl EconomicEnvironment {
    /// Builds an environment by tabulating `payoff(player, a1, a2, state, t1, t2)`
    /// over the full index grid.
    pub fn from_fn<F>(
        nature_states: Vec<String>,
        actions: [Vec<String>; 2],
        payoff_types: [Vec<String>; 2],
        mut payoff: F,
    ) -> EconomicEnvironment
    where
        F: FnMut(Player, usize, usize, usize, usize, usize) -> Rational,
    {
        let mut utility = [Vec::new(), Vec::new()];
        for player in Player::BOTH {
            let mut tensor = Vec::new();
            for a1 in 0..actions[0].len() {
                for a2 in 0..actions[1].len() {
                    for state in 0..nature_states.len() {
                        for t1 in 0..payoff_types[0].len() {
                            for t2 in 0..payoff_types[1].len() {
                                tensor.push(payoff(player, a1, a2, state, t1, t2));
                            }
                        }
                    }
                }
            }
            utility[player.index()] = tensor;
        }
        EconomicEnvironment { nature_states, actions, payoff_types, utility }
    }

    pub fn num_states(&self) -> usize {
        self.nature_states.len()
    }

    pub fn num_actions(&self, player: Player) -> usize {
        self.actions[player.index()].len()
    }

    pub fn num_types(&self, player: Player) -> usize {
        self.payoff_types[player.index()].len()
    }

    /// Expected size of each utility tensor.
    pub fn tensor_len(&self) -> usize {
        self.actions[0].len()
            * self.actions[1].len()
            * self.nature_states.len()
            * self.payoff_types[0].len()
            * self.payoff_types[1].len()
    }

    fn tensor_index(&self, a1: usize, a2: usize, state: usize, t1: usize, t2: usize) -> usize {
        ((((a1 * self.actions[1].len()) + a2) * self.nature_states.len() + state)
            * self.payoff_types[0].len()
            + t1)
            * self.payoff_types[1].len()
            + t2
    }

    /// Utility of `player` at a full index profile `(a_1, a_2, θ0, θ_1, θ_2)`.
    pub fn utility(&self, player: Player, a1: usize, a2: usize, state: usize, t1: usize, t2: usize) -> &Rational {
        &self.utility[player.index()][self.tensor_index(a1, a2, state, t1, t2)]
    }

    /// Utility of `player` written from their own perspective: own action,
    /// opponent action, state, own payoff type, opponent payoff type.
    pub fn utility_for(
        &self,
        player: Player,
        own_action: usize,
        opp_action: usize,
        state: usize,
        own_type: usize,
        opp_type: usize,
    ) -> &Rational {
        match player {
            Player::One => self.utility(player, own_action, opp_action, state, own_type, opp_type),
            Player::Two => self.utility(player, opp_action, own_action, state, opp_type, own_type),
        }
    }
}

/// A probability distribution over the unknowns faced by one player:
/// state of nature, opponent payoff type, opponent action, and (in the
/// extended domain) the opponent signal. Zero-mass points are not stored.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Conjecture {
    player: Player,
    extended: bool,
    mass: BTreeMap<OutcomePoint, Rational>,
}

impl Conjecture {
    /// Builds a conjecture from point masses, checking nonnegativity, exact
    /// normalization, and that every point matches the declared domain.
    pub fn new(
        player: Player,
        extended: bool,
        masses: impl IntoIterator<Item = (OutcomePoint, Rational)>,
    ) -> Result<Conjecture, GameError> {
        let mut mass = BTreeMap::new();
        let mut total = Rational::zero();
        for (point, value) in masses {
            if point.opp_signal.is_some() != extended {
                return Err(GameError::DomainMismatch {
                    expected: if extended { "extended" } else { "basic" },
                });
            }
            if value < Rational::zero() {
                return Err(GameError::NotADistribution {
                    reason: format!("negative mass {}", format_rational(&value)),
                });
            }
            if value.is_zero() {
                continue;
            }
            total += &value;
            let slot = mass.entry(point).or_insert_with(Rational::zero);
            *slot += value;
        }
        if !total.is_one() {
            return Err(GameError::NotADistribution {
                reason: format!("masses sum to {}", format_rational(&total)),
            });
        }
        Ok(Conjecture { player, extended, mass })
    }

    /// Degenerate conjecture putting all mass on one point.
    pub fn point_mass(player: Player, point: OutcomePoint) -> Conjecture {
        Conjecture {
            player,
            extended: point.opp_signal.is_some(),
            mass: BTreeMap::from([(point, Rational::one())]),
        }
    }

    pub fn player(&self) -> Player {
        self.player
    }

    /// True when the domain includes the opponent-signal coordinate.
    pub fn is_extended(&self) -> bool {
        self.extended
    }

    /// Strictly positive masses, keyed by domain point.
    pub fn mass(&self) -> &BTreeMap<OutcomePoint, Rational> {
        &self.mass
    }

    pub fn mass_at(&self, point: &OutcomePoint) -> Rational {
        self.mass.get(point).cloned().unwrap_or_else(Rational::zero)
    }

    /// Marginal over `Θ0 × Θ_{-i}`.
    pub fn marg_state(&self) -> FirstOrderBelief {
        let mut out = FirstOrderBelief::new();
        for (point, value) in &self.mass {
            *out.entry(point.state_point()).or_insert_with(Rational::zero) += value;
        }
        out
    }

    /// Marginal over `Θ0 × Θ_{-i} × Y_{-i}`; requires the extended domain.
    pub fn marg_belief(&self) -> Result<BTreeMap<BeliefPoint, Rational>, GameError> {
        if !self.extended {
            return Err(GameError::DomainMismatch { expected: "extended" });
        }
        let mut out = BTreeMap::new();
        for (point, value) in &self.mass {
            let key = point.belief_point().expect("extended conjecture has signals");
            *out.entry(key).or_insert_with(Rational::zero) += value;
        }
        Ok(out)
    }

    /// Marginal over `Θ0 × Θ_{-i} × A_{-i}`: collapses the opponent-signal
    /// coordinate. On a basic conjecture this is a clone.
    pub fn marg_basic(&self) -> Conjecture {
        if !self.extended {
            return self.clone();
        }
        let mut mass: BTreeMap<OutcomePoint, Rational> = BTreeMap::new();
        for (point, value) in &self.mass {
            let key = OutcomePoint::basic(point.state, point.opp_type, point.opp_action);
            *mass.entry(key).or_insert_with(Rational::zero) += value;
        }
        Conjecture { player: self.player, extended: false, mass }
    }
}

/// A randomization over one player's own actions. Zero weights are not
/// stored; a pure action is the degenerate case.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MixedAction {
    player: Player,
    weights: BTreeMap<usize, Rational>,
}

impl MixedAction {
    pub fn pure(player: Player, action: usize) -> MixedAction {
        MixedAction { player, weights: BTreeMap::from([(action, Rational::one())]) }
    }

    pub fn mixed(
        player: Player,
        weights: impl IntoIterator<Item = (usize, Rational)>,
    ) -> Result<MixedAction, GameError> {
        let mut map = BTreeMap::new();
        let mut total = Rational::zero();
        for (action, weight) in weights {
            if weight < Rational::zero() {
                return Err(GameError::NotADistribution {
                    reason: format!("negative weight {}", format_rational(&weight)),
                });
            }
            if weight.is_zero() {
                continue;
            }
            total += &weight;
            *map.entry(action).or_insert_with(Rational::zero) += weight;
        }
        if !total.is_one() {
            return Err(GameError::NotADistribution {
                reason: format!("weights sum to {}", format_rational(&total)),
            });
        }
        Ok(MixedAction { player, weights: map })
    }

    pub fn player(&self) -> Player {
        self.player
    }

    pub fn weights(&self) -> &BTreeMap<usize, Rational> {
        &self.weights
    }
}

/// Signal sets and interim beliefs appended to an environment; together with
/// an [`EconomicEnvironment`] this pins down a Bayesian game. The belief row
/// of `(player, payoff type, signal)` is an exact distribution over
/// `Θ0 × Θ_{-i} × Y_{-i}`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InformationStructure {
    /// Per player: signal names in index order.
    pub signals: [Vec<String>; 2],
    /// Per player: belief rows indexed by `payoff_type * num_signals + signal`.
    pub beliefs: [Vec<BTreeMap<BeliefPoint, Rational>>; 2],
}

impl InformationStructure {
    pub fn num_signals(&self, player: Player) -> usize {
        self.signals[player.index()].len()
    }

    pub fn belief(&self, player: Player, payoff_type: usize, signal: usize) -> &BTreeMap<BeliefPoint, Rational> {
        &self.beliefs[player.index()][payoff_type * self.num_signals(player) + signal]
    }

    /// The one-signal structure in which every information type of each
    /// player is certain of `(state, opponent type)`. The workhorse for
    /// embedding complete-information games.
    pub fn degenerate(env: &EconomicEnvironment, state: usize, types: [usize; 2]) -> InformationStructure {
        let signals = [vec!["y0".to_string()], vec!["z0".to_string()]];
        let mut beliefs = [Vec::new(), Vec::new()];
        for player in Player::BOTH {
            let opp_type = types[player.other().index()];
            let row = BTreeMap::from([(
                BeliefPoint { state, opp_type, opp_signal: 0 },
                Rational::one(),
            )]);
            beliefs[player.index()] = vec![row; env.num_types(player)];
        }
        InformationStructure { signals, beliefs }
    }
}

/// One linear constraint `Σ coeffs · ν ≤ bound` on a first-order belief ν.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearConstraint {
    pub coeffs: BTreeMap<StatePoint, Rational>,
    pub bound: Rational,
}

impl LinearConstraint {
    pub fn holds_for(&self, belief: &FirstOrderBelief) -> bool {
        let mut lhs = Rational::zero();
        for (point, coeff) in &self.coeffs {
            if let Some(mass) = belief.get(point) {
                lhs += coeff * mass;
            }
        }
        lhs <= self.bound
    }
}

/// The allowed set of first-order beliefs for one (player, payoff type).
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum TypeRestriction {
    /// The whole simplex: no informational assumption.
    Unrestricted,
    /// Beliefs supported inside `allowed`; the baseline-information case
    /// where only states deemed possible may carry mass.
    Support { allowed: BTreeSet<StatePoint> },
    /// Beliefs satisfying every listed linear inequality.
    Polytope { constraints: Vec<LinearConstraint> },
    /// An explicit finite menu of admissible beliefs.
    FiniteSet { beliefs: Vec<FirstOrderBelief> },
}

impl TypeRestriction {
    /// Exact membership of a first-order belief in the restriction set.
    pub fn contains(&self, belief: &FirstOrderBelief) -> bool {
        match self {
            TypeRestriction::Unrestricted => true,
            TypeRestriction::Support { allowed } => {
                belief.iter().all(|(point, mass)| mass.is_zero() || allowed.contains(point))
            }
            TypeRestriction::Polytope { constraints } => {
                constraints.iter().all(|c| c.holds_for(belief))
            }
            TypeRestriction::FiniteSet { beliefs } => beliefs.iter().any(|candidate| {
                // Compare ignoring explicit zeros.
                let lhs: BTreeMap<_, _> = belief.iter().filter(|(_, m)| !m.is_zero()).collect();
                let rhs: BTreeMap<_, _> = candidate.iter().filter(|(_, m)| !m.is_zero()).collect();
                lhs == rhs
            }),
        }
    }
}

/// Per-player, per-payoff-type informational restrictions.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BeliefRestriction {
    /// `per_type[player][payoff_type]`.
    pub per_type: [Vec<TypeRestriction>; 2],
}

impl BeliefRestriction {
    /// No restriction anywhere: every belief set is the whole simplex.
    pub fn unrestricted(env: &EconomicEnvironment) -> BeliefRestriction {
        BeliefRestriction {
            per_type: [
                vec![TypeRestriction::Unrestricted; env.num_types(Player::One)],
                vec![TypeRestriction::Unrestricted; env.num_types(Player::Two)],
            ],
        }
    }

    /// Support restrictions derived from a baseline belief map: each payoff
    /// type may only believe points its baseline belief deems possible.
    pub fn from_baseline_supports(baseline: [Vec<FirstOrderBelief>; 2]) -> BeliefRestriction {
        let per_type = baseline.map(|rows| {
            rows.into_iter()
                .map(|belief| TypeRestriction::Support {
                    allowed: belief
                        .into_iter()
                        .filter(|(_, mass)| !mass.is_zero())
                        .map(|(point, _)| point)
                        .collect(),
                })
                .collect()
        });
        BeliefRestriction { per_type }
    }

    pub fn entry(&self, player: Player, payoff_type: usize) -> &TypeRestriction {
        &self.per_type[player.index()][payoff_type]
    }
}

/// A pure strategy per player: a total map from information types
/// `(payoff type, signal)` to actions.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct StrategyProfile {
    signal_counts: [usize; 2],
    /// `choices[player][payoff_type * num_signals + signal]` is an action index.
    choices: [Vec<usize>; 2],
}

impl StrategyProfile {
    pub fn new(signal_counts: [usize; 2], choices: [Vec<usize>; 2]) -> StrategyProfile {
        StrategyProfile { signal_counts, choices }
    }

    pub fn action(&self, player: Player, payoff_type: usize, signal: usize) -> usize {
        self.choices[player.index()][payoff_type * self.signal_counts[player.index()] + signal]
    }

    pub fn num_signals(&self, player: Player) -> usize {
        self.signal_counts[player.index()]
    }

    pub fn choices(&self, player: Player) -> &[usize] {
        &self.choices[player.index()]
    }
}

/// How an [`ActionCorrespondence`] is keyed.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum KeyKind {
    /// One action set per payoff type (belief-free and Δ solving).
    PayoffType,
    /// One action set per `(payoff type, signal)` pair (interim solving).
    InformationType,
}

/// A per-player assignment of action subsets to keys, used both for
/// elimination rounds and for fixed points.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ActionCorrespondence {
    kind: KeyKind,
    /// Signals per key: `[1, 1]` when keyed by payoff type alone.
    signal_counts: [usize; 2],
    /// `sets[player][payoff_type * signal_count + signal]`.
    sets: [Vec<BTreeSet<usize>>; 2],
}

impl ActionCorrespondence {
    /// Full action sets keyed by payoff type.
    pub fn full_payoff_type(env: &EconomicEnvironment) -> ActionCorrespondence {
        let sets = [Player::One, Player::Two].map(|player| {
            let all: BTreeSet<usize> = (0..env.num_actions(player)).collect();
            vec![all; env.num_types(player)]
        });
        ActionCorrespondence { kind: KeyKind::PayoffType, signal_counts: [1, 1], sets }
    }

    /// Full action sets keyed by information type.
    pub fn full_information_type(
        env: &EconomicEnvironment,
        structure: &InformationStructure,
    ) -> ActionCorrespondence {
        let sets = [Player::One, Player::Two].map(|player| {
            let all: BTreeSet<usize> = (0..env.num_actions(player)).collect();
            vec![all; env.num_types(player) * structure.num_signals(player)]
        });
        ActionCorrespondence {
            kind: KeyKind::InformationType,
            signal_counts: [
                structure.num_signals(Player::One),
                structure.num_signals(Player::Two),
            ],
            sets,
        }
    }

    pub fn kind(&self) -> KeyKind {
        self.kind
    }

    /// Signals per key for `player` (1 when keyed by payoff type).
    pub fn num_signals(&self, player: Player) -> usize {
        self.signal_counts[player.index()]
    }

    pub fn num_payoff_types(&self, player: Player) -> usize {
        self.sets[player.index()].len() / self.signal_counts[player.index()]
    }

    pub fn get(&self, player: Player, payoff_type: usize, signal: usize) -> &BTreeSet<usize> {
        &self.sets[player.index()][payoff_type * self.signal_counts[player.index()] + signal]
    }

    /// Payoff-type-keyed access; requires `kind == PayoffType`.
    pub fn at_type(&self, player: Player, payoff_type: usize) -> &BTreeSet<usize> {
        debug_assert_eq!(self.kind, KeyKind::PayoffType);
        self.get(player, payoff_type, 0)
    }

    pub fn set(&mut self, player: Player, payoff_type: usize, signal: usize, actions: BTreeSet<usize>) {
        let idx = payoff_type * self.signal_counts[player.index()] + signal;
        self.sets[player.index()][idx] = actions;
    }

    /// All keys of `player` in `(payoff_type, signal)` order.
    pub fn keys(&self, player: Player) -> impl Iterator<Item = (usize, usize)> + '_ {
        let signals = self.signal_counts[player.index()];
        (0..self.sets[player.index()].len()).map(move |flat| (flat / signals, flat % signals))
    }

    /// Pointwise set inclusion against another correspondence of the same shape.
    pub fn is_subset_of(&self, other: &ActionCorrespondence) -> bool {
        Player::BOTH.iter().all(|&player| {
            self.sets[player.index()]
                .iter()
                .zip(&other.sets[player.index()])
                .all(|(a, b)| a.is_subset(b))
        })
    }

    /// Total number of listed actions across players and keys.
    pub fn total_actions(&self) -> usize {
        self.sets.iter().flatten().map(|s| s.len()).sum()
    }

    pub fn any_empty(&self) -> bool {
        self.sets.iter().flatten().any(|s| s.is_empty())
    }
}

/// A defect found by one of the validators. Violations are data, not
/// errors: validation returns every problem it can find.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Violation {
    EmptySet { what: String },
    TensorSize { player: Player, expected: usize, found: usize },
    BadDistribution { where_: String, total: Rational },
    NegativeMass { where_: String },
    IndexOutOfRange { where_: String },
    EmptyRestriction { player: Player, payoff_type: usize, reason: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EmptySet { what } => write!(f, "{what} must be nonempty"),
            Violation::TensorSize { player, expected, found } => write!(
                f,
                "utility tensor of player {player} has {found} entries, expected {expected}"
            ),
            Violation::BadDistribution { where_, total } => {
                write!(f, "{where_} sums to {} instead of 1", format_rational(total))
            }
            Violation::NegativeMass { where_ } => write!(f, "{where_} has a negative mass"),
            Violation::IndexOutOfRange { where_ } => write!(f, "{where_} is out of range"),
            Violation::EmptyRestriction { player, payoff_type, reason } => write!(
                f,
                "restriction of player {player} payoff type {payoff_type} is empty: {reason}"
            ),
        }
    }
}

/// Checks every type invariant of an environment; an empty result means the
/// environment is well-formed.
pub fn validate_environment(env: &EconomicEnvironment) -> Vec<Violation> {
    let mut out = Vec::new();
    if env.nature_states.is_empty() {
        out.push(Violation::EmptySet { what: "nature state set".into() });
    }
    for player in Player::BOTH {
        if env.actions[player.index()].is_empty() {
            out.push(Violation::EmptySet { what: format!("action set of player {player}") });
        }
        if env.payoff_types[player.index()].is_empty() {
            out.push(Violation::EmptySet { what: format!("payoff type set of player {player}") });
        }
        let expected = env.tensor_len();
        let found = env.utility[player.index()].len();
        if expected != found {
            out.push(Violation::TensorSize { player, expected, found });
        }
    }
    out
}

/// Checks an information structure against its environment: nonempty signal
/// sets, one belief row per information type, rows that are exact
/// distributions over in-range points.
pub fn validate_structure(env: &EconomicEnvironment, structure: &InformationStructure) -> Vec<Violation> {
    let mut out = Vec::new();
    for player in Player::BOTH {
        let n_signals = structure.num_signals(player);
        if n_signals == 0 {
            out.push(Violation::EmptySet { what: format!("signal set of player {player}") });
            continue;
        }
        let expected_rows = env.num_types(player) * n_signals;
        let rows = &structure.beliefs[player.index()];
        if rows.len() != expected_rows {
            out.push(Violation::IndexOutOfRange {
                where_: format!(
                    "belief table of player {player}: {} rows, expected {expected_rows}",
                    rows.len()
                ),
            });
            continue;
        }
        let opp = player.other();
        for payoff_type in 0..env.num_types(player) {
            for signal in 0..n_signals {
                let row = structure.belief(player, payoff_type, signal);
                let where_ = format!("belief of player {player} payoff type {payoff_type} signal {signal}");
                let mut total = Rational::zero();
                for (point, mass) in row {
                    if mass < &Rational::zero() {
                        out.push(Violation::NegativeMass { where_: where_.clone() });
                    }
                    if point.state >= env.num_states()
                        || point.opp_type >= env.num_types(opp)
                        || point.opp_signal >= structure.num_signals(opp)
                    {
                        out.push(Violation::IndexOutOfRange {
                            where_: format!("{where_}: point {point:?}"),
                        });
                    }
                    total += mass;
                }
                if !total.is_one() {
                    out.push(Violation::BadDistribution { where_, total });
                }
            }
        }
    }
    out
}

/// Checks shape and nonemptiness of a belief restriction. Polytope
/// nonemptiness requires a feasibility solve and lives in the LP module;
/// this validator checks everything that is a pure data property.
pub fn validate_restriction_shape(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
) -> Vec<Violation> {
    let mut out = Vec::new();
    for player in Player::BOTH {
        let rows = &restriction.per_type[player.index()];
        if rows.len() != env.num_types(player) {
            out.push(Violation::IndexOutOfRange {
                where_: format!(
                    "restriction table of player {player}: {} rows, expected {}",
                    rows.len(),
                    env.num_types(player)
                ),
            });
            continue;
        }
        let opp = player.other();
        let in_range = |point: &StatePoint| {
            point.state < env.num_states() && point.opp_type < env.num_types(opp)
        };
        for (payoff_type, entry) in rows.iter().enumerate() {
            match entry {
                TypeRestriction::Unrestricted => {}
                TypeRestriction::Support { allowed } => {
                    if allowed.is_empty() {
                        out.push(Violation::EmptyRestriction {
                            player,
                            payoff_type,
                            reason: "support restriction allows no points".into(),
                        });
                    }
                    for point in allowed {
                        if !in_range(point) {
                            out.push(Violation::IndexOutOfRange {
                                where_: format!(
                                    "support restriction of player {player} payoff type {payoff_type}: point {point:?}"
                                ),
                            });
                        }
                    }
                }
                TypeRestriction::Polytope { constraints } => {
                    for constraint in constraints {
                        for point in constraint.coeffs.keys() {
                            if !in_range(point) {
                                out.push(Violation::IndexOutOfRange {
                                    where_: format!(
                                        "polytope restriction of player {player} payoff type {payoff_type}: point {point:?}"
                                    ),
                                });
                            }
                        }
                    }
                }
                TypeRestriction::FiniteSet { beliefs } => {
                    if beliefs.is_empty() {
                        out.push(Violation::EmptyRestriction {
                            player,
                            payoff_type,
                            reason: "finite belief set has no elements".into(),
                        });
                    }
                    for (k, belief) in beliefs.iter().enumerate() {
                        let where_ = format!(
                            "belief {k} of player {player} payoff type {payoff_type} restriction"
                        );
                        let mut total = Rational::zero();
                        for (point, mass) in belief {
                            if mass < &Rational::zero() {
                                out.push(Violation::NegativeMass { where_: where_.clone() });
                            }
                            if !in_range(point) {
                                out.push(Violation::IndexOutOfRange {
                                    where_: format!("{where_}: point {point:?}"),
                                });
                            }
                            total += mass;
                        }
                        if !total.is_one() {
                            out.push(Violation::BadDistribution { where_, total });
                        }
                    }
                }
            }
        }
    }
    out
}

/// Expected utility of a (possibly mixed) action against a basic-domain
/// conjecture: the exact double sum over domain points and own actions.
pub fn expected_utility(
    env: &EconomicEnvironment,
    player: Player,
    payoff_type: usize,
    conjecture: &Conjecture,
    action: &MixedAction,
) -> Result<Rational, GameError> {
    if conjecture.player() != player {
        return Err(GameError::WrongPlayer { expected: player, found: conjecture.player() });
    }
    if action.player() != player {
        return Err(GameError::WrongPlayer { expected: player, found: action.player() });
    }
    if conjecture.is_extended() {
        return Err(GameError::DomainMismatch { expected: "basic" });
    }
    let mut total = Rational::zero();
    for (point, mass) in conjecture.mass() {
        for (own_action, weight) in action.weights() {
            let utility = env.utility_for(
                player,
                *own_action,
                point.opp_action,
                point.state,
                payoff_type,
                point.opp_type,
            );
            total += mass * weight * utility;
        }
    }
    Ok(total)
}

/// Expected utility of one pure action against a basic-domain conjecture.
pub fn pure_expected_utility(
    env: &EconomicEnvironment,
    player: Player,
    payoff_type: usize,
    conjecture: &Conjecture,
    action: usize,
) -> Result<Rational, GameError> {
    expected_utility(env, player, payoff_type, conjecture, &MixedAction::pure(player, action))
}

/// The set of pure actions achieving the exact maximum expected utility
/// against `conjecture`; ties are all included.
pub fn best_replies(
    env: &EconomicEnvironment,
    player: Player,
    payoff_type: usize,
    conjecture: &Conjecture,
) -> Result<BTreeSet<usize>, GameError> {
    let mut best: Option<Rational> = None;
    let mut winners = BTreeSet::new();
    for action in 0..env.num_actions(player) {
        let value = pure_expected_utility(env, player, payoff_type, conjecture, action)?;
        match &best {
            Some(current) if value < *current => {}
            Some(current) if value == *current => {
                winners.insert(action);
            }
            _ => {
                best = Some(value);
                winners = BTreeSet::from([action]);
            }
        }
    }
    Ok(winners)
}

/// The conjecture induced at information type `(payoff_type, signal)` by an
/// opponent strategy: pushes the interim belief forward through the
/// opponent's choice map, summing belief mass over signals that map to the
/// same action.
pub fn pushforward_conjecture(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    player: Player,
    payoff_type: usize,
    signal: usize,
    profile: &StrategyProfile,
) -> Result<Conjecture, GameError> {
    let opp = player.other();
    if payoff_type >= env.num_types(player) || signal >= structure.num_signals(player) {
        return Err(GameError::IndexOutOfRange {
            what: format!("information type ({payoff_type}, {signal}) of player {player}"),
        });
    }
    if profile.num_signals(opp) != structure.num_signals(opp) {
        return Err(GameError::IndexOutOfRange {
            what: format!(
                "strategy of player {opp} covers {} signals, structure has {}",
                profile.num_signals(opp),
                structure.num_signals(opp)
            ),
        });
    }
    let mut mass: BTreeMap<OutcomePoint, Rational> = BTreeMap::new();
    for (point, value) in structure.belief(player, payoff_type, signal) {
        let opp_action = profile.action(opp, point.opp_type, point.opp_signal);
        let key = OutcomePoint::basic(point.state, point.opp_type, opp_action);
        *mass.entry(key).or_insert_with(Rational::zero) += value;
    }
    Ok(Conjecture { player, extended: false, mass })
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn names(prefix: &str, n: usize) -> Vec<String> {
        (1..=n).map(|k| format!("{prefix}{k}")).collect()
    }

    /// 2x2 matching pennies as a complete-information environment:
    /// player 1 wants to match, player 2 wants to mismatch.
    pub(crate) fn matching_pennies() -> EconomicEnvironment {
        EconomicEnvironment::from_fn(
            names("n", 1),
            [names("a", 2), names("b", 2)],
            [names("s", 1), names("t", 1)],
            |player, a1, a2, _, _, _| {
                let value = if a1 == a2 { int(1) } else { int(-1) };
                match player {
                    Player::One => value,
                    Player::Two => -value,
                }
            },
        )
    }

    #[test]
    fn constant_game_expected_utility_is_the_constant() {
        let env = EconomicEnvironment::from_fn(
            names("n", 2),
            [names("a", 2), names("b", 2)],
            [names("s", 1), names("t", 1)],
            |_, _, _, _, _, _| int(5),
        );
        let conjecture = Conjecture::new(
            Player::One,
            false,
            [
                (OutcomePoint::basic(0, 0, 0), rat(1, 3)),
                (OutcomePoint::basic(1, 0, 1), rat(2, 3)),
            ],
        )
        .unwrap();
        let mixed = MixedAction::mixed(Player::One, [(0, rat(1, 2)), (1, rat(1, 2))]).unwrap();
        let value = expected_utility(&env, Player::One, 0, &conjecture, &mixed).unwrap();
        assert_eq!(value, int(5));
    }

    #[test]
    fn point_mass_conjecture_reads_single_utility() {
        let env = EconomicEnvironment::from_fn(
            names("n", 2),
            [names("a", 2), names("b", 3)],
            [names("s", 2), names("t", 2)],
            |player, a1, a2, state, t1, t2| {
                int((player.index() + 2 * a1 + 3 * a2 + 5 * state + 7 * t1 + 11 * t2) as i64)
            },
        );
        let point = OutcomePoint::basic(1, 0, 2);
        let conjecture = Conjecture::point_mass(Player::One, point);
        let value = pure_expected_utility(&env, Player::One, 1, &conjecture, 1).unwrap();
        assert_eq!(value, *env.utility(Player::One, 1, 2, 1, 1, 0));

        // Same shape from player 2's side: own action indexes a2.
        let point = OutcomePoint::basic(0, 1, 1);
        let conjecture = Conjecture::point_mass(Player::Two, point);
        let value = pure_expected_utility(&env, Player::Two, 0, &conjecture, 2).unwrap();
        assert_eq!(value, *env.utility(Player::Two, 1, 2, 0, 1, 0));
    }

    #[test]
    fn uniform_conjecture_matches_enumeration_oracle() {
        // 2x2 own/opponent actions, 2 states; uniform over 2 states x 2
        // opponent actions. Oracle: direct enumeration over domain points.
        let env = EconomicEnvironment::from_fn(
            names("n", 2),
            [names("a", 2), names("b", 2)],
            [names("s", 1), names("t", 1)],
            |player, a1, a2, state, _, _| {
                int((1 + player.index() * 13 + 2 * a1 + 3 * a2 + 5 * state) as i64)
            },
        );
        let quarter = rat(1, 4);
        let conjecture = Conjecture::new(
            Player::One,
            false,
            (0..2).flat_map(|state| {
                let quarter = quarter.clone();
                (0..2).map(move |opp_action| {
                    (OutcomePoint::basic(state, 0, opp_action), quarter.clone())
                })
            }),
        )
        .unwrap();

        let mut oracle = Rational::zero();
        for state in 0..2 {
            for opp_action in 0..2 {
                oracle += rat(1, 4) * env.utility(Player::One, 0, opp_action, state, 0, 0);
            }
        }
        let value = pure_expected_utility(&env, Player::One, 0, &conjecture, 0).unwrap();
        assert_eq!(value, oracle);
    }

    #[test]
    fn best_replies_picks_dominant_action_and_all_ties() {
        let env = EconomicEnvironment::from_fn(
            names("n", 1),
            [names("a", 3), names("b", 2)],
            [names("s", 1), names("t", 1)],
            |_, a1, _, _, _, _| int(if a1 == 2 { 10 } else { 1 }),
        );
        let conjecture = Conjecture::point_mass(Player::One, OutcomePoint::basic(0, 0, 1));
        let replies = best_replies(&env, Player::One, 0, &conjecture).unwrap();
        assert_eq!(replies, BTreeSet::from([2]));

        let flat = EconomicEnvironment::from_fn(
            names("n", 1),
            [names("a", 3), names("b", 2)],
            [names("s", 1), names("t", 1)],
            |_, _, _, _, _, _| int(7),
        );
        let replies = best_replies(&flat, Player::One, 0, &conjecture).unwrap();
        assert_eq!(replies, BTreeSet::from([0, 1, 2]));
    }

    #[test]
    fn matching_pennies_uniform_conjecture_ties_both_actions() {
        let env = matching_pennies();
        let conjecture = Conjecture::new(
            Player::One,
            false,
            [
                (OutcomePoint::basic(0, 0, 0), rat(1, 2)),
                (OutcomePoint::basic(0, 0, 1), rat(1, 2)),
            ],
        )
        .unwrap();
        let replies = best_replies(&env, Player::One, 0, &conjecture).unwrap();
        assert_eq!(replies, BTreeSet::from([0, 1]));
        assert_eq!(
            pure_expected_utility(&env, Player::One, 0, &conjecture, 0).unwrap(),
            int(0)
        );
    }

    #[test]
    fn conjecture_rejects_bad_masses() {
        let err = Conjecture::new(
            Player::One,
            false,
            [(OutcomePoint::basic(0, 0, 0), rat(1, 2))],
        )
        .unwrap_err();
        assert!(matches!(err, GameError::NotADistribution { .. }));

        let err = Conjecture::new(
            Player::One,
            false,
            [
                (OutcomePoint::basic(0, 0, 0), rat(3, 2)),
                (OutcomePoint::basic(0, 0, 1), rat(-1, 2)),
            ],
        )
        .unwrap_err();
        assert!(matches!(err, GameError::NotADistribution { .. }));

        let err = Conjecture::new(
            Player::One,
            false,
            [(OutcomePoint::extended(0, 0, 0, 0), int(1))],
        )
        .unwrap_err();
        assert_eq!(err, GameError::DomainMismatch { expected: "basic" });
    }

    #[test]
    fn expected_utility_rejects_extended_domain() {
        let env = matching_pennies();
        let conjecture = Conjecture::point_mass(Player::One, OutcomePoint::extended(0, 0, 0, 0));
        let err = pure_expected_utility(&env, Player::One, 0, &conjecture, 0).unwrap_err();
        assert_eq!(err, GameError::DomainMismatch { expected: "basic" });
    }

    fn two_signal_structure(env: &EconomicEnvironment) -> InformationStructure {
        // Player 2 has two signals; player 1's single type splits belief
        // between them. Player 2's rows are degenerate.
        let row_p1 = BTreeMap::from([
            (BeliefPoint { state: 0, opp_type: 0, opp_signal: 0 }, rat(1, 3)),
            (BeliefPoint { state: 0, opp_type: 0, opp_signal: 1 }, rat(2, 3)),
        ]);
        let row_p2 = BTreeMap::from([(
            BeliefPoint { state: 0, opp_type: 0, opp_signal: 0 },
            Rational::one(),
        )]);
        InformationStructure {
            signals: [vec!["y1".into()], vec!["z1".into(), "z2".into()]],
            beliefs: [
                vec![row_p1; env.num_types(Player::One)],
                vec![row_p2; env.num_types(Player::Two) * 2],
            ],
        }
    }

    #[test]
    fn pushforward_single_signal_is_relabeling() {
        let env = matching_pennies();
        let structure = InformationStructure::degenerate(&env, 0, [0, 0]);
        let profile = StrategyProfile::new([1, 1], [vec![0], vec![1]]);
        let conjecture =
            pushforward_conjecture(&env, &structure, Player::One, 0, 0, &profile).unwrap();
        assert_eq!(
            conjecture,
            Conjecture::point_mass(Player::One, OutcomePoint::basic(0, 0, 1))
        );
    }

    #[test]
    fn pushforward_constant_strategy_preserves_marginal() {
        let env = matching_pennies();
        let structure = two_signal_structure(&env);
        // Player 2 plays action 1 at both signals.
        let profile = StrategyProfile::new([1, 2], [vec![0], vec![1, 1]]);
        let conjecture =
            pushforward_conjecture(&env, &structure, Player::One, 0, 0, &profile).unwrap();
        assert_eq!(
            conjecture,
            Conjecture::point_mass(Player::One, OutcomePoint::basic(0, 0, 1))
        );
    }

    #[test]
    fn pushforward_splits_mass_by_signal_map() {
        let env = matching_pennies();
        let structure = two_signal_structure(&env);
        // Player 2 maps signal z1 to action 0 and z2 to action 1.
        let profile = StrategyProfile::new([1, 2], [vec![0], vec![0, 1]]);
        let conjecture =
            pushforward_conjecture(&env, &structure, Player::One, 0, 0, &profile).unwrap();

        // Oracle: enumerate all (state, opp type, opp signal) belief terms.
        let mut expected: BTreeMap<OutcomePoint, Rational> = BTreeMap::new();
        for (point, mass) in structure.belief(Player::One, 0, 0) {
            let action = profile.action(Player::Two, point.opp_type, point.opp_signal);
            *expected
                .entry(OutcomePoint::basic(point.state, point.opp_type, action))
                .or_insert_with(Rational::zero) += mass;
        }
        assert_eq!(conjecture.mass(), &expected);
        let total: Rational = conjecture.mass().values().cloned().sum();
        assert!(total.is_one());
    }

    #[test]
    fn validators_accept_well_formed_inputs() {
        let env = matching_pennies();
        assert!(validate_environment(&env).is_empty());
        let structure = InformationStructure::degenerate(&env, 0, [0, 0]);
        assert!(validate_structure(&env, &structure).is_empty());
        let restriction = BeliefRestriction::unrestricted(&env);
        assert!(validate_restriction_shape(&env, &restriction).is_empty());
    }

    #[test]
    fn validator_flags_unnormalized_belief_row() {
        let env = matching_pennies();
        let mut structure = InformationStructure::degenerate(&env, 0, [0, 0]);
        structure.beliefs[0][0] = BTreeMap::from([(
            BeliefPoint { state: 0, opp_type: 0, opp_signal: 0 },
            rat(3, 2),
        )]);
        let violations = validate_structure(&env, &structure);
        assert_eq!(violations.len(), 1);
        match &violations[0] {
            Violation::BadDistribution { where_, total } => {
                assert!(where_.contains("player 1"), "{where_}");
                assert!(where_.contains("payoff type 0"), "{where_}");
                assert!(where_.contains("signal 0"), "{where_}");
                assert_eq!(*total, rat(3, 2));
            }
            other => panic!("unexpected violation {other:?}"),
        }
    }

    #[test]
    fn validator_flags_empty_action_set() {
        let mut env = matching_pennies();
        env.actions[0].clear();
        env.utility[0].clear();
        env.utility[1].clear();
        let violations = validate_environment(&env);
        assert!(violations
            .iter()
            .any(|v| matches!(v, Violation::EmptySet { what } if what.contains("action set of player 1"))));
    }

    #[test]
    fn restriction_membership_by_variant() {
        let point_a = StatePoint { state: 0, opp_type: 0 };
        let point_b = StatePoint { state: 1, opp_type: 0 };
        let half: FirstOrderBelief =
            BTreeMap::from([(point_a, rat(1, 2)), (point_b, rat(1, 2))]);
        let pure_a: FirstOrderBelief = BTreeMap::from([(point_a, int(1))]);

        assert!(TypeRestriction::Unrestricted.contains(&half));

        let support = TypeRestriction::Support { allowed: BTreeSet::from([point_a]) };
        assert!(support.contains(&pure_a));
        assert!(!support.contains(&half));

        let polytope = TypeRestriction::Polytope {
            constraints: vec![LinearConstraint {
                coeffs: BTreeMap::from([(point_b, int(1))]),
                bound: rat(1, 4),
            }],
        };
        assert!(polytope.contains(&pure_a));
        assert!(!polytope.contains(&half));

        let finite = TypeRestriction::FiniteSet { beliefs: vec![half.clone()] };
        assert!(finite.contains(&half));
        assert!(!finite.contains(&pure_a));
    }
}
