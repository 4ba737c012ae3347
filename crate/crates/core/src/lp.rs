//! Exact linear feasibility and best-reply justification.
//!
//! The solver core is a phase-1 simplex over arbitrary-precision rationals
//! using Bland's rule, so termination is guaranteed and every answer is
//! exact. On top of it, [`solve_justification`] decides whether a candidate
//! action is a best reply to some conjecture satisfying support, marginal,
//! and first-order-belief conditions, and returns such a conjecture when one
//! exists. Returned witnesses are always re-verified by direct substitution
//! through the game-theoretic definitions, never trusted from the tableau.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};

use crate::game::{
    best_replies, Conjecture, EconomicEnvironment, FirstOrderBelief, OutcomePoint, Player,
    TypeRestriction,
};
use crate::rational::{format_rational, Rational};

/// Row sense of a [`LinearRow`].
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Relation {
    Eq,
    Le,
}

/// One constraint `coeffs · x (= | ≤) rhs` over nonnegative variables.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearRow {
    pub coeffs: Vec<Rational>,
    pub relation: Relation,
    pub rhs: Rational,
}

/// A system of linear constraints over `x ≥ 0`. Rows are dense; every
/// `coeffs` vector must have length `num_vars`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct LinearSystem {
    pub num_vars: usize,
    pub rows: Vec<LinearRow>,
}

impl LinearSystem {
    /// Exact render of the system, one constraint per line, for debugging
    /// and error reports.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            let mut first = true;
            for (j, coeff) in row.coeffs.iter().enumerate() {
                if coeff.is_zero() {
                    continue;
                }
                if !first {
                    out.push_str(" + ");
                }
                out.push_str(&format!("{}*x{}", format_rational(coeff), j));
                first = false;
            }
            if first {
                out.push('0');
            }
            let op = match row.relation {
                Relation::Eq => "=",
                Relation::Le => "<=",
            };
            out.push_str(&format!(" {op} {}\n", format_rational(&row.rhs)));
        }
        out
    }

    /// Exact substitution check of a candidate point (which must also be
    /// componentwise nonnegative).
    pub fn satisfied_by(&self, point: &[Rational]) -> bool {
        if point.len() != self.num_vars || point.iter().any(|v| v.is_negative()) {
            return false;
        }
        self.rows.iter().all(|row| {
            let lhs: Rational = row
                .coeffs
                .iter()
                .zip(point)
                .filter(|(c, _)| !c.is_zero())
                .map(|(c, v)| c * v)
                .sum();
            match row.relation {
                Relation::Eq => lhs == row.rhs,
                Relation::Le => lhs <= row.rhs,
            }
        })
    }
}

/// Outcome of [`solve_feasibility`].
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FeasibilityResult {
    /// The system has a solution; `witness` is one, already re-checked by
    /// substitution.
    Feasible { witness: Vec<Rational> },
    Infeasible,
}

impl FeasibilityResult {
    pub fn is_feasible(&self) -> bool {
        matches!(self, FeasibilityResult::Feasible { .. })
    }
}

/// Decides feasibility of `system` exactly.
///
/// Phase-1 simplex: convert `≤` rows to equalities with slack variables,
/// orient all right-hand sides nonnegative, add one artificial variable per
/// row, and minimize the artificial total with Bland's anticycling rule.
/// Feasible iff the minimum is zero. Any returned witness is verified by
/// substitution before being handed back; a tableau/substitution mismatch
/// is an internal bug and panics.
pub fn solve_feasibility(system: &LinearSystem) -> FeasibilityResult {
    let n_slacks = system.rows.iter().filter(|r| r.relation == Relation::Le).count();
    let n_struct = system.num_vars + n_slacks;
    let m = system.rows.len();
    let n_total = n_struct + m;

    // Tableau rows: structural columns, slack columns, artificial columns, rhs.
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m);
    let mut next_slack = system.num_vars;
    for (i, row) in system.rows.iter().enumerate() {
        let mut t_row = vec![Rational::zero(); n_total + 1];
        t_row[..system.num_vars].clone_from_slice(&row.coeffs);
        if row.relation == Relation::Le {
            t_row[next_slack] = Rational::one();
            next_slack += 1;
        }
        t_row[n_total] = row.rhs.clone();
        if t_row[n_total].is_negative() {
            for entry in t_row.iter_mut() {
                *entry = -std::mem::take(entry);
            }
        }
        t_row[n_struct + i] = Rational::one();
        tableau.push(t_row);
    }

    let mut basis: Vec<usize> = (n_struct..n_total).collect();
    // Artificial columns are retired permanently once they leave the basis.
    let mut dead = vec![false; n_total];

    loop {
        // Reduced costs for the phase-1 objective (cost 1 on artificials,
        // 0 elsewhere), recomputed from scratch: r_j = c_j - sum over rows
        // of c_basis(i) * tableau[i][j]. Bland: enter the lowest eligible j.
        let mut entering = None;
        'cols: for j in 0..n_total {
            if dead[j] || basis.contains(&j) {
                continue;
            }
            let mut r = if j >= n_struct { Rational::one() } else { Rational::zero() };
            for (i, &b) in basis.iter().enumerate() {
                if b >= n_struct && !tableau[i][j].is_zero() {
                    r -= &tableau[i][j];
                }
            }
            if r.is_negative() {
                entering = Some(j);
                break 'cols;
            }
        }
        let Some(q) = entering else {
            let objective: Rational = basis
                .iter()
                .enumerate()
                .filter(|(_, &b)| b >= n_struct)
                .map(|(i, _)| tableau[i][n_total].clone())
                .sum();
            if !objective.is_zero() {
                return FeasibilityResult::Infeasible;
            }
            let mut witness = vec![Rational::zero(); system.num_vars];
            for (i, &b) in basis.iter().enumerate() {
                if b < system.num_vars {
                    witness[b] = tableau[i][n_total].clone();
                }
            }
            assert!(
                system.satisfied_by(&witness),
                "simplex witness failed substitution check:\n{}",
                system.dump()
            );
            return FeasibilityResult::Feasible { witness };
        };

        // Ratio test; ties leave by lowest basis index (Bland).
        let mut pivot: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tableau[i][q].is_positive() {
                continue;
            }
            let ratio = &tableau[i][n_total] / &tableau[i][q];
            match &pivot {
                Some((best, best_ratio))
                    if *best_ratio < ratio
                        || (*best_ratio == ratio && basis[*best] < basis[i]) => {}
                _ => pivot = Some((i, ratio)),
            }
        }
        let Some((p, _)) = pivot else {
            // The phase-1 objective is bounded below by zero, so an
            // unbounded ray cannot occur in a correct tableau.
            unreachable!("phase-1 simplex found an unbounded direction");
        };

        let divisor = tableau[p][q].clone();
        for entry in tableau[p].iter_mut() {
            if !entry.is_zero() {
                *entry /= &divisor;
            }
        }
        let pivot_row = tableau[p].clone();
        for (i, row) in tableau.iter_mut().enumerate() {
            if i == p || row[q].is_zero() {
                continue;
            }
            let factor = row[q].clone();
            for (entry, pivot_entry) in row.iter_mut().zip(&pivot_row) {
                if !pivot_entry.is_zero() {
                    *entry -= &factor * pivot_entry;
                }
            }
        }
        let leaving = basis[p];
        if leaving >= n_struct {
            dead[leaving] = true;
        }
        basis[p] = q;
    }
}

/// The data of one justification question: is `action` a best reply for
/// `(player, payoff_type)` to some conjecture that (a) puts mass only on
/// `support`, (b) has exactly the given marginal over
/// state/opponent-type/opponent-signal when one is required, and (c) has a
/// first-order belief admitted by `restriction`?
#[derive(Clone, Debug)]
pub struct JustificationProblem<'a> {
    pub env: &'a EconomicEnvironment,
    pub player: Player,
    pub payoff_type: usize,
    pub action: usize,
    pub support: &'a BTreeSet<OutcomePoint>,
    pub marginal: Option<&'a BTreeMap<crate::game::BeliefPoint, Rational>>,
    pub restriction: &'a TypeRestriction,
}

fn drop_zeros<K: Ord + Clone>(map: &BTreeMap<K, Rational>) -> BTreeMap<K, Rational> {
    map.iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(k, v)| (k.clone(), v.clone()))
        .collect()
}

/// Exact verification that `conjecture` answers `problem` affirmatively:
/// support inclusion, marginal equality, restriction membership, and the
/// best-reply property, all checked through the game-theoretic definitions
/// with no reference to how the conjecture was found.
pub fn check_justification(problem: &JustificationProblem, conjecture: &Conjecture) -> bool {
    if conjecture.player() != problem.player {
        return false;
    }
    if conjecture.is_extended() != problem.marginal.is_some() {
        return false;
    }
    if !conjecture.mass().keys().all(|point| problem.support.contains(point)) {
        return false;
    }
    if let Some(required) = problem.marginal {
        let Ok(marg) = conjecture.marg_belief() else { return false };
        if drop_zeros(&marg) != drop_zeros(required) {
            return false;
        }
    }
    if !problem.restriction.contains(&conjecture.marg_state()) {
        return false;
    }
    match best_replies(
        problem.env,
        problem.player,
        problem.payoff_type,
        &conjecture.marg_basic(),
    ) {
        Ok(replies) => replies.contains(&problem.action),
        Err(_) => false,
    }
}

/// Builds the feasibility system for `problem`, optionally pinning the
/// first-order belief to one explicit candidate (used for finite belief
/// menus). Returns the variable order alongside the system, or `None` when
/// no variable survives the support and marginal pruning, in which case the
/// question is trivially infeasible.
fn build_system(
    problem: &JustificationProblem,
    pinned_belief: Option<&FirstOrderBelief>,
) -> Option<(LinearSystem, Vec<OutcomePoint>)> {
    let env = problem.env;
    let marginal_positive: Option<BTreeMap<_, _>> = problem.marginal.map(drop_zeros);

    // Variables: allowed support points, minus points ruled out by a zero
    // marginal cell or a support-style restriction. Points the restriction
    // excludes by support are omitted rather than constrained.
    let mut points: Vec<OutcomePoint> = Vec::new();
    for point in problem.support {
        if let Some(positive) = &marginal_positive {
            let cell = point.belief_point().expect("marginal given for basic-domain point");
            if !positive.contains_key(&cell) {
                continue;
            }
        }
        if let TypeRestriction::Support { allowed } = problem.restriction {
            if !allowed.contains(&point.state_point()) {
                continue;
            }
        }
        points.push(*point);
    }
    if points.is_empty() {
        return None;
    }
    let n = points.len();

    let mut rows = Vec::new();
    rows.push(LinearRow {
        coeffs: vec![Rational::one(); n],
        relation: Relation::Eq,
        rhs: Rational::one(),
    });

    // Best-reply rows: payoff of each alternative never exceeds the
    // candidate's, i.e. sum of (u(b) - u(action)) masses is at most zero.
    for alt in 0..env.num_actions(problem.player) {
        if alt == problem.action {
            continue;
        }
        let coeffs = points
            .iter()
            .map(|p| {
                let u_alt = env.utility_for(
                    problem.player,
                    alt,
                    p.opp_action,
                    p.state,
                    problem.payoff_type,
                    p.opp_type,
                );
                let u_act = env.utility_for(
                    problem.player,
                    problem.action,
                    p.opp_action,
                    p.state,
                    problem.payoff_type,
                    p.opp_type,
                );
                u_alt - u_act
            })
            .collect();
        rows.push(LinearRow { coeffs, relation: Relation::Le, rhs: Rational::zero() });
    }

    // Marginal rows, one per positive cell. A positive cell with no
    // surviving variables yields an all-zero row with positive right-hand
    // side, which the solver correctly reports infeasible.
    if let Some(positive) = &marginal_positive {
        for (cell, value) in positive {
            let mut coeffs = vec![Rational::zero(); n];
            for (j, p) in points.iter().enumerate() {
                if p.belief_point().as_ref() == Some(cell) {
                    coeffs[j] = Rational::one();
                }
            }
            rows.push(LinearRow { coeffs, relation: Relation::Eq, rhs: value.clone() });
        }
    }

    match (problem.restriction, pinned_belief) {
        (TypeRestriction::Polytope { constraints }, None) => {
            for constraint in constraints {
                let coeffs = points
                    .iter()
                    .map(|p| {
                        constraint
                            .coeffs
                            .get(&p.state_point())
                            .cloned()
                            .unwrap_or_else(Rational::zero)
                    })
                    .collect();
                rows.push(LinearRow {
                    coeffs,
                    relation: Relation::Le,
                    rhs: constraint.bound.clone(),
                });
            }
        }
        (TypeRestriction::FiniteSet { .. }, Some(belief)) => {
            // Pin the state marginal to the candidate belief exactly: one
            // equality per state point carrying variables or carrying
            // candidate mass.
            let belief = drop_zeros(belief);
            let mut state_points: BTreeSet<_> =
                points.iter().map(|p| p.state_point()).collect();
            state_points.extend(belief.keys().copied());
            for sp in state_points {
                let coeffs = points
                    .iter()
                    .map(|p| {
                        if p.state_point() == sp {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                rows.push(LinearRow {
                    coeffs,
                    relation: Relation::Eq,
                    rhs: belief.get(&sp).cloned().unwrap_or_else(Rational::zero),
                });
            }
        }
        _ => {}
    }

    Some((LinearSystem { num_vars: n, rows }, points))
}

fn conjecture_from_witness(
    problem: &JustificationProblem,
    points: &[OutcomePoint],
    witness: &[Rational],
) -> Conjecture {
    let extended = problem.marginal.is_some();
    Conjecture::new(
        problem.player,
        extended,
        points.iter().zip(witness).map(|(p, v)| (*p, v.clone())),
    )
    .expect("feasible witness is a distribution")
}

/// Decides the justification question and returns a witnessing conjecture
/// when the answer is yes. Finite belief menus are solved as a disjunction:
/// candidates are tried in listed order and the first feasible one wins, so
/// the result is deterministic. Every witness passes
/// [`check_justification`] before being returned.
pub fn solve_justification(problem: &JustificationProblem) -> Option<Conjecture> {
    let candidates: Vec<Option<&FirstOrderBelief>> = match problem.restriction {
        TypeRestriction::FiniteSet { beliefs } => beliefs.iter().map(Some).collect(),
        _ => vec![None],
    };
    for pinned in candidates {
        let Some((system, points)) = build_system(problem, pinned) else {
            continue;
        };
        if let FeasibilityResult::Feasible { witness } = solve_feasibility(&system) {
            let conjecture = conjecture_from_witness(problem, &points, &witness);
            assert!(
                check_justification(problem, &conjecture),
                "feasible conjecture failed definition-level re-verification:\n{}",
                system.dump()
            );
            return Some(conjecture);
        }
    }
    None
}
