//! Exact solver for two-player incomplete-information games.
//!
//! The crate computes belief-free, belief-restricted, and interim
//! rationalizability by iterated simultaneous elimination, enumerates pure
//! Bayes-Nash equilibria, and checks the union identities that relate the
//! three solution concepts across information structures. All arithmetic is
//! over arbitrary-precision rationals; every reported action carries an
//! exactly verifiable justifying belief.

pub mod bne;
pub mod format;
pub mod game;
pub mod lp;
pub mod oracle;
pub mod rational;
pub mod report;
pub mod robust;
pub mod solver;

pub use game::{
    best_replies, expected_utility, pure_expected_utility, pushforward_conjecture,
    validate_environment, validate_restriction_shape, validate_structure, ActionCorrespondence,
    BeliefPoint, BeliefRestriction, Conjecture, EconomicEnvironment, FirstOrderBelief, GameError,
    InformationStructure, KeyKind, LinearConstraint, MixedAction, OutcomePoint, Player,
    StatePoint, StrategyProfile, TypeRestriction, Violation,
};
pub use rational::{format_rational, int, parse_rational, rat, Rational};
