//! Pure-strategy Bayes-Nash equilibrium enumeration.
//!
//! A pure profile is an equilibrium when every information type of each
//! player plays a best reply to the conjecture induced by pushing the
//! type's interim belief through the opponent's strategy. Enumeration is
//! exhaustive over profile pairs in lexicographic order of the two choice
//! vectors, capped to keep the quadratic loop bounded; best-reply sets per
//! opponent strategy are computed once through the definitional path
//! (pushforward, then exact expected-utility argmax) and memoized.

use std::collections::BTreeMap;

use crate::game::{
    best_replies, pushforward_conjecture, EconomicEnvironment, InformationStructure, Player,
    StrategyProfile,
};

/// Default bound on examined profile pairs.
pub const DEFAULT_BNE_CAP: u64 = 1_000_000;

/// Outcome of [`enumerate_pure_bne`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BneResult {
    /// Equilibria in lexicographic order of (player 1 choices, player 2
    /// choices).
    pub profiles: Vec<StrategyProfile>,
    /// Whether enumeration stopped at the cap before covering every pair.
    pub truncated: bool,
    /// Profile pairs actually examined.
    pub examined: u128,
    /// Total profile pairs in the game.
    pub total_pairs: u128,
}

fn strategy_count(num_actions: usize, cells: usize) -> u128 {
    (num_actions as u128)
        .checked_pow(cells as u32)
        .expect("strategy space exceeds u128")
}

/// Decodes a strategy index into the choice vector, most significant cell
/// first, so index order is lexicographic order of the vector.
fn decode_strategy(index: u128, num_actions: usize, cells: usize) -> Vec<usize> {
    let mut out = vec![0; cells];
    let mut rest = index;
    for slot in out.iter_mut().rev() {
        *slot = (rest % num_actions as u128) as usize;
        rest /= num_actions as u128;
    }
    out
}

/// Best-reply action sets of `player`, one bitmask per information type
/// cell, against a fixed opponent strategy.
fn reply_masks(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    player: Player,
    opp_choices: &[usize],
) -> Vec<u32> {
    let signal_counts = [
        structure.num_signals(Player::One),
        structure.num_signals(Player::Two),
    ];
    let mut choices = [Vec::new(), Vec::new()];
    choices[player.other().index()] = opp_choices.to_vec();
    choices[player.index()] =
        vec![0; env.num_types(player) * structure.num_signals(player)];
    let profile = StrategyProfile::new(signal_counts, choices);

    let mut masks = Vec::new();
    for payoff_type in 0..env.num_types(player) {
        for signal in 0..structure.num_signals(player) {
            let conjecture =
                pushforward_conjecture(env, structure, player, payoff_type, signal, &profile)
                    .expect("well-formed inputs");
            let replies = best_replies(env, player, payoff_type, &conjecture)
                .expect("well-formed inputs");
            let mask = replies.iter().fold(0u32, |m, &a| m | (1 << a));
            masks.push(mask);
        }
    }
    masks
}

/// Exhaustively enumerates pure Bayes-Nash equilibria, visiting at most
/// `cap` profile pairs.
pub fn enumerate_pure_bne(
    env: &EconomicEnvironment,
    structure: &InformationStructure,
    cap: u64,
) -> BneResult {
    let cells = [
        env.num_types(Player::One) * structure.num_signals(Player::One),
        env.num_types(Player::Two) * structure.num_signals(Player::Two),
    ];
    let actions = [env.num_actions(Player::One), env.num_actions(Player::Two)];
    let counts = [
        strategy_count(actions[0], cells[0]),
        strategy_count(actions[1], cells[1]),
    ];
    let total_pairs = counts[0].saturating_mul(counts[1]);
    let signal_counts = [
        structure.num_signals(Player::One),
        structure.num_signals(Player::Two),
    ];

    // Masks for player 1 are keyed by player 2's strategy index and vice
    // versa; filled lazily so the cap bounds all work.
    let mut masks_one: BTreeMap<u128, Vec<u32>> = BTreeMap::new();
    let mut masks_two: BTreeMap<u128, Vec<u32>> = BTreeMap::new();

    let mut profiles = Vec::new();
    let mut examined: u128 = 0;
    let mut truncated = false;
    'outer: for i1 in 0..counts[0] {
        let s1 = decode_strategy(i1, actions[0], cells[0]);
        for i2 in 0..counts[1] {
            if examined == u128::from(cap) {
                truncated = true;
                break 'outer;
            }
            examined += 1;
            let s2 = decode_strategy(i2, actions[1], cells[1]);
            let m1 = masks_one
                .entry(i2)
                .or_insert_with(|| reply_masks(env, structure, Player::One, &s2));
            if s1.iter().zip(m1.iter()).any(|(&a, &m)| m & (1 << a) == 0) {
                continue;
            }
            let m2 = masks_two
                .entry(i1)
                .or_insert_with(|| reply_masks(env, structure, Player::Two, &s1));
            if s2.iter().zip(m2.iter()).any(|(&a, &m)| m & (1 << a) == 0) {
                continue;
            }
            profiles.push(StrategyProfile::new(signal_counts, [s1.clone(), s2.clone()]));
        }
    }

    BneResult { profiles, truncated, examined, total_pairs }
}
