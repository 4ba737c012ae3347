//! Independent cross-checks and instance generators.
//!
//! Everything here exists to catch bugs in the main solving path by a
//! different route. The dominance checker decides best-reply existence
//! through the dual characterization (an action is justifiable by some
//! conjecture on a point set if and only if no mixture strictly dominates
//! it there) with its own two-phase simplex, sharing no pivoting code with
//! the feasibility solver. The vertex enumerator decides feasibility by
//! basic-solution search instead of pivoting. The grid search looks for
//! justifying conjectures by brute enumeration. The generators produce
//! random well-formed instances from a seed, exactly and reproducibly.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};

use crate::game::{
    validate_restriction_shape, ActionCorrespondence, BeliefRestriction, Conjecture,
    EconomicEnvironment, FirstOrderBelief, InformationStructure, LinearConstraint, OutcomePoint,
    Player, StatePoint, TypeRestriction,
};
use crate::lp::{check_justification, JustificationProblem, LinearSystem, Relation};
use crate::rational::Rational;

// --- dominance oracle ---

/// Bland-rule minimizing simplex step loop over an explicit tableau.
/// `costs` has one entry per column; `alive` masks retired columns. The
/// initial basis must be feasible. Returns the optimal objective value.
/// Panics on an unbounded direction, which the callers' programs exclude.
fn simplex_min(
    tableau: &mut [Vec<Rational>],
    basis: &mut [usize],
    costs: &[Rational],
    alive: &[bool],
) -> Rational {
    let m = tableau.len();
    let cols = costs.len();
    loop {
        let mut entering = None;
        for j in 0..cols {
            if !alive[j] || basis.contains(&j) {
                continue;
            }
            let mut reduced = costs[j].clone();
            for i in 0..m {
                if !costs[basis[i]].is_zero() && !tableau[i][j].is_zero() {
                    reduced -= &costs[basis[i]] * &tableau[i][j];
                }
            }
            if reduced.is_negative() {
                entering = Some(j);
                break;
            }
        }
        let Some(q) = entering else {
            return (0..m)
                .filter(|&i| !costs[basis[i]].is_zero())
                .map(|i| &costs[basis[i]] * &tableau[i][cols])
                .sum();
        };
        let mut leaving: Option<(usize, Rational)> = None;
        for i in 0..m {
            if !tableau[i][q].is_positive() {
                continue;
            }
            let ratio = &tableau[i][cols] / &tableau[i][q];
            match &leaving {
                Some((best, best_ratio))
                    if *best_ratio < ratio
                        || (*best_ratio == ratio && basis[*best] < basis[i]) => {}
                _ => leaving = Some((i, ratio)),
            }
        }
        let Some((p, _)) = leaving else {
            panic!("unbounded direction in a program that is bounded by construction");
        };
        let divisor = tableau[p][q].clone();
        for entry in tableau[p].iter_mut() {
            if !entry.is_zero() {
                *entry /= &divisor;
            }
        }
        let pivot_row = tableau[p].to_vec();
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
        basis[p] = q;
    }
}

/// Optimal value of `max over mixtures σ of min over rows p of Σ_b σ_b gaps[p][b]`.
///
/// With `gaps[p][b]` set to the payoff gain of switching from a fixed
/// action to `b` at point `p`, a strictly positive value certifies strict
/// dominance of the fixed action. With `gaps[p][b]` a plain payoff matrix
/// it is the row player's value of the zero-sum game. `gaps` must be
/// nonempty and rectangular.
pub fn max_min_mixture_value(gaps: &[Vec<Rational>]) -> Rational {
    let m = gaps.len();
    let k = gaps[0].len();
    assert!(m > 0 && k > 0, "empty gap matrix");

    // Columns: k mixture weights, t+ and t-, m surpluses, then m + 1
    // phase-1 artificials. Rows: one per point, then the mixture total.
    let n_struct = k + 2 + m;
    let cols = n_struct + m + 1;
    let mut tableau: Vec<Vec<Rational>> = Vec::with_capacity(m + 1);
    for (p, row_gaps) in gaps.iter().enumerate() {
        assert_eq!(row_gaps.len(), k, "ragged gap matrix");
        let mut row = vec![Rational::zero(); cols + 1];
        row[..k].clone_from_slice(row_gaps);
        row[k] = -Rational::one();
        row[k + 1] = Rational::one();
        row[k + 2 + p] = -Rational::one();
        row[n_struct + p] = Rational::one();
        tableau.push(row);
    }
    let mut total_row = vec![Rational::zero(); cols + 1];
    for entry in total_row.iter_mut().take(k) {
        *entry = Rational::one();
    }
    total_row[n_struct + m] = Rational::one();
    total_row[cols] = Rational::one();
    tableau.push(total_row);

    let mut basis: Vec<usize> = (n_struct..n_struct + m + 1).collect();
    let mut alive = vec![true; cols];

    let mut phase1 = vec![Rational::zero(); cols + 1];
    for cost in phase1.iter_mut().take(cols).skip(n_struct) {
        *cost = Rational::one();
    }
    let infeasibility = simplex_min(&mut tableau, &mut basis, &phase1[..cols], &alive);
    assert!(
        infeasibility.is_zero(),
        "the dominance program is always feasible at the degenerate mixture"
    );

    // Retire artificials; drive any still basic (at value zero) out of the
    // basis, dropping rows that turn out redundant.
    for col in alive.iter_mut().take(cols).skip(n_struct) {
        *col = false;
    }
    let mut i = 0;
    while i < basis.len() {
        if basis[i] < n_struct {
            i += 1;
            continue;
        }
        let q = (0..n_struct).find(|&j| alive[j] && !tableau[i][j].is_zero());
        match q {
            Some(q) => {
                let divisor = tableau[i][q].clone();
                for entry in tableau[i].iter_mut() {
                    if !entry.is_zero() {
                        *entry /= &divisor;
                    }
                }
                let pivot_row = tableau[i].clone();
                for (r, row) in tableau.iter_mut().enumerate() {
                    if r == i || row[q].is_zero() {
                        continue;
                    }
                    let factor = row[q].clone();
                    for (entry, pivot_entry) in row.iter_mut().zip(&pivot_row) {
                        if !pivot_entry.is_zero() {
                            *entry -= &factor * pivot_entry;
                        }
                    }
                }
                basis[i] = q;
                i += 1;
            }
            None => {
                tableau.remove(i);
                basis.remove(i);
            }
        }
    }

    // Phase 2: minimize t- minus t+, whose optimum is the negated target.
    let mut phase2 = vec![Rational::zero(); cols];
    phase2[k] = -Rational::one();
    phase2[k + 1] = Rational::one();
    -simplex_min(&mut tableau, &mut basis, &phase2, &alive)
}

/// Whether some mixture over the player's own actions strictly outperforms
/// `action` at every point of `support` (basic-domain points). An empty
/// support counts as dominated, matching the justification side where no
/// conjecture exists.
pub fn strictly_dominated(
    env: &EconomicEnvironment,
    player: Player,
    payoff_type: usize,
    support: &BTreeSet<OutcomePoint>,
    action: usize,
) -> bool {
    if support.is_empty() {
        return true;
    }
    let gaps: Vec<Vec<Rational>> = support
        .iter()
        .map(|p| {
            let base = env.utility_for(player, action, p.opp_action, p.state, payoff_type, p.opp_type);
            (0..env.num_actions(player))
                .map(|b| {
                    env.utility_for(player, b, p.opp_action, p.state, payoff_type, p.opp_type) - base
                })
                .collect()
        })
        .collect();
    max_min_mixture_value(&gaps).is_positive()
}

/// Iterated simultaneous elimination of ex-post dominated actions, keyed by
/// payoff type, under a restriction whose entries are all `Unrestricted` or
/// `Support` (the two cases where dominance and best-reply existence are
/// dual; other kinds panic). Support points are the opponent's surviving
/// graph intersected with the allowed first-order support.
pub fn rationalizability_by_dominance(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
) -> ActionCorrespondence {
    let mut current = ActionCorrespondence::full_payoff_type(env);
    loop {
        let mut next = current.clone();
        let mut changed = false;
        for player in Player::BOTH {
            let opp = player.other();
            for payoff_type in 0..env.num_types(player) {
                let allowed: Box<dyn Fn(&StatePoint) -> bool> =
                    match &restriction.per_type[player.index()][payoff_type] {
                        TypeRestriction::Unrestricted => Box::new(|_| true),
                        TypeRestriction::Support { allowed } => {
                            Box::new(move |sp| allowed.contains(sp))
                        }
                        _ => panic!("dominance elimination covers unrestricted and support cases only"),
                    };
                let mut support = BTreeSet::new();
                for state in 0..env.num_states() {
                    for opp_type in 0..env.num_types(opp) {
                        if !allowed(&StatePoint { state, opp_type }) {
                            continue;
                        }
                        for &opp_action in current.at_type(opp, opp_type) {
                            support.insert(OutcomePoint::basic(state, opp_type, opp_action));
                        }
                    }
                }
                let survivors: BTreeSet<usize> = current
                    .at_type(player, payoff_type)
                    .iter()
                    .copied()
                    .filter(|&a| !strictly_dominated(env, player, payoff_type, &support, a))
                    .collect();
                if &survivors != current.at_type(player, payoff_type) {
                    changed = true;
                }
                next.set(player, payoff_type, 0, survivors);
            }
        }
        current = next;
        if !changed {
            return current;
        }
    }
}

/// Dominance-based belief-free rationalizability: the no-restriction case.
pub fn bfr_by_expost_dominance(env: &EconomicEnvironment) -> ActionCorrespondence {
    rationalizability_by_dominance(env, &BeliefRestriction::unrestricted(env))
}

/// Rationalizable action sets of the complete-information game obtained by
/// pinning the state of nature and both payoff types: iterated elimination
/// of strictly dominated actions, with domination by mixtures.
pub fn complete_info_rationalizability(
    env: &EconomicEnvironment,
    state: usize,
    types: [usize; 2],
) -> [BTreeSet<usize>; 2] {
    let mut surviving = [
        (0..env.num_actions(Player::One)).collect::<BTreeSet<usize>>(),
        (0..env.num_actions(Player::Two)).collect::<BTreeSet<usize>>(),
    ];
    loop {
        let mut next = surviving.clone();
        let mut changed = false;
        for player in Player::BOTH {
            let opp = player.other();
            let mut keep = BTreeSet::new();
            for &action in &surviving[player.index()] {
                let gaps: Vec<Vec<Rational>> = surviving[opp.index()]
                    .iter()
                    .map(|&opp_action| {
                        let base = env.utility_for(
                            player, action, opp_action, state,
                            types[player.index()], types[opp.index()],
                        );
                        (0..env.num_actions(player))
                            .map(|b| {
                                env.utility_for(
                                    player, b, opp_action, state,
                                    types[player.index()], types[opp.index()],
                                ) - base
                            })
                            .collect()
                    })
                    .collect();
                if !max_min_mixture_value(&gaps).is_positive() {
                    keep.insert(action);
                }
            }
            if keep != surviving[player.index()] {
                changed = true;
            }
            next[player.index()] = keep;
        }
        surviving = next;
        if !changed {
            return surviving;
        }
    }
}

// --- brute-force feasibility and membership ---

/// Exact Gaussian solve of a square system; `None` when singular.
fn solve_square(mut a: Vec<Vec<Rational>>, mut b: Vec<Rational>) -> Option<Vec<Rational>> {
    let n = b.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        b.swap(col, pivot);
        let divisor = a[col][col].clone();
        for entry in a[col].iter_mut() {
            if !entry.is_zero() {
                *entry /= &divisor;
            }
        }
        b[col] /= &divisor;
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in col..n {
                let delta = &factor * &a[col][c];
                if !delta.is_zero() {
                    a[r][c] -= delta;
                }
            }
            let delta = &factor * &b[col];
            if !delta.is_zero() {
                b[r] -= delta;
            }
        }
    }
    Some(b)
}

/// All `k`-subsets of `0..n` in lexicographic order. Panics past `cap`
/// subsets; intended for test-scale inputs.
fn combinations(n: usize, k: usize, cap: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cap: usize, current: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if current.len() == k {
            assert!(out.len() < cap, "combination enumeration exceeded {cap} subsets");
            out.push(current.clone());
            return;
        }
        let needed = k - current.len();
        for j in start..=n.saturating_sub(needed) {
            current.push(j);
            rec(j + 1, n, k, cap, current, out);
            current.pop();
        }
    }
    if k <= n {
        rec(0, n, k, cap, &mut current, &mut out);
    }
    out
}

/// Decides feasibility of a [`LinearSystem`] by enumerating basic
/// solutions: slack-convert, row-reduce, then try every independent column
/// subset. A polyhedron `{A x = b, x ≥ 0}` is nonempty exactly when some
/// basic solution is nonnegative, so this is a complete decision procedure,
/// just an exponential one: use it only on test-scale systems.
pub fn feasible_by_vertex_enumeration(system: &LinearSystem) -> bool {
    let n_slacks = system.rows.iter().filter(|r| r.relation == Relation::Le).count();
    let n = system.num_vars + n_slacks;
    let mut a: Vec<Vec<Rational>> = Vec::new();
    let mut b: Vec<Rational> = Vec::new();
    let mut next_slack = system.num_vars;
    for row in &system.rows {
        let mut full = vec![Rational::zero(); n];
        full[..system.num_vars].clone_from_slice(&row.coeffs);
        if row.relation == Relation::Le {
            full[next_slack] = Rational::one();
            next_slack += 1;
        }
        a.push(full);
        b.push(row.rhs.clone());
    }

    // Forward elimination on the augmented matrix; inconsistent rows decide
    // infeasibility outright, zero rows drop out.
    let m = a.len();
    let mut rank = 0;
    for col in 0..n {
        let Some(pivot) = (rank..m).find(|&r| !a[r][col].is_zero()) else { continue };
        a.swap(rank, pivot);
        b.swap(rank, pivot);
        let divisor = a[rank][col].clone();
        for entry in a[rank].iter_mut() {
            if !entry.is_zero() {
                *entry /= &divisor;
            }
        }
        b[rank] /= &divisor;
        for r in 0..m {
            if r == rank || a[r][col].is_zero() {
                continue;
            }
            let factor = a[r][col].clone();
            for c in 0..n {
                let delta = &factor * &a[rank][c];
                if !delta.is_zero() {
                    a[r][c] -= delta;
                }
            }
            let delta = &factor * &b[rank];
            if !delta.is_zero() {
                b[r] -= delta;
            }
        }
        rank += 1;
        if rank == m {
            break;
        }
    }
    for r in rank..m {
        debug_assert!(a[r].iter().all(Zero::is_zero));
        if !b[r].is_zero() {
            return false;
        }
    }
    if rank == 0 {
        return system.satisfied_by(&vec![Rational::zero(); system.num_vars]);
    }

    for subset in combinations(n, rank, 200_000) {
        let square: Vec<Vec<Rational>> = (0..rank)
            .map(|r| subset.iter().map(|&c| a[r][c].clone()).collect())
            .collect();
        let Some(values) = solve_square(square, b[..rank].to_vec()) else { continue };
        if values.iter().any(Signed::is_negative) {
            continue;
        }
        let mut point = vec![Rational::zero(); system.num_vars];
        let mut ok = true;
        for (&col, value) in subset.iter().zip(&values) {
            if col < system.num_vars {
                point[col] = value.clone();
            } else if value.is_negative() {
                ok = false;
                break;
            }
        }
        if ok && system.satisfied_by(&point) {
            return true;
        }
    }
    false
}

/// Runs `f` on every length-`parts` composition of `total` (nonnegative,
/// order matters) until `f` returns true; reports whether that happened.
fn for_each_composition(
    total: u32,
    parts: usize,
    f: &mut impl FnMut(&[u32]) -> bool,
) -> bool {
    fn rec(remaining: u32, slot: usize, buf: &mut [u32], f: &mut impl FnMut(&[u32]) -> bool) -> bool {
        if slot + 1 == buf.len() {
            buf[slot] = remaining;
            return f(buf);
        }
        for take in 0..=remaining {
            buf[slot] = take;
            if rec(remaining - take, slot + 1, buf, f) {
                return true;
            }
        }
        false
    }
    if parts == 0 {
        return total == 0 && f(&[]);
    }
    let mut buf = vec![0; parts];
    rec(total, 0, &mut buf, f)
}

/// Brute-force search for a justifying conjecture on the grid of
/// distributions with denominator at most `max_denominator`. Sound but not
/// complete: a hit is a real witness (it passes the definition-level
/// check), a miss proves nothing.
pub fn membership_by_grid(
    problem: &JustificationProblem,
    max_denominator: u32,
) -> Option<Conjecture> {
    let points: Vec<OutcomePoint> = problem.support.iter().copied().collect();
    if points.is_empty() {
        return None;
    }
    let extended = problem.marginal.is_some();
    for denominator in 1..=max_denominator {
        let mut found = None;
        for_each_composition(denominator, points.len(), &mut |counts| {
            let masses = points.iter().zip(counts).map(|(p, &c)| {
                (*p, Rational::new(c.into(), denominator.into()))
            });
            let Ok(conjecture) = Conjecture::new(problem.player, extended, masses) else {
                return false;
            };
            if check_justification(problem, &conjecture) {
                found = Some(conjecture);
                true
            } else {
                false
            }
        });
        if found.is_some() {
            return found;
        }
    }
    None
}

// --- polytope vertices ---

/// Vertices of `{ν ∈ Δ(points) : constraints}` by tight-set enumeration:
/// the normalization row plus every choice of `dim - 1` additional tight
/// facets (nonnegativity or constraint rows), solved exactly, filtered for
/// feasibility, and deduplicated. Enumeration is capped at 10^4 subsets,
/// ample for desk-scale belief spaces.
pub fn polytope_vertices(
    points: &[StatePoint],
    constraints: &[LinearConstraint],
) -> Vec<FirstOrderBelief> {
    let dim = points.len();
    assert!(dim > 0, "empty belief domain");
    // Facet list: first the nonnegativity rows, then the constraints.
    let n_facets = dim + constraints.len();
    let facet_row = |f: usize| -> (Vec<Rational>, Rational) {
        if f < dim {
            let mut row = vec![Rational::zero(); dim];
            row[f] = Rational::one();
            (row, Rational::zero())
        } else {
            let constraint = &constraints[f - dim];
            let row = points
                .iter()
                .map(|p| constraint.coeffs.get(p).cloned().unwrap_or_else(Rational::zero))
                .collect();
            (row, constraint.bound.clone())
        }
    };

    let mut vertices: BTreeSet<Vec<Rational>> = BTreeSet::new();
    for subset in combinations(n_facets, dim - 1, 10_000) {
        let mut a = vec![vec![Rational::one(); dim]];
        let mut b = vec![Rational::one()];
        for &f in &subset {
            let (row, rhs) = facet_row(f);
            a.push(row);
            b.push(rhs);
        }
        let Some(solution) = solve_square(a, b) else { continue };
        if solution.iter().any(Signed::is_negative) {
            continue;
        }
        let feasible = constraints.iter().all(|constraint| {
            let lhs: Rational = points
                .iter()
                .zip(&solution)
                .filter_map(|(p, v)| constraint.coeffs.get(p).map(|c| c * v))
                .sum();
            lhs <= constraint.bound
        });
        if feasible {
            vertices.insert(solution);
        }
    }
    vertices
        .into_iter()
        .map(|solution| {
            points
                .iter()
                .zip(solution)
                .filter(|(_, v)| !v.is_zero())
                .map(|(p, v)| (*p, v))
                .collect()
        })
        .collect()
}

// --- generators ---

/// Shape and scale knobs for random instances.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct GeneratorSpec {
    pub num_states: usize,
    pub num_actions: [usize; 2],
    pub num_types: [usize; 2],
    pub num_signals: [usize; 2],
    /// Utility numerators are drawn from `-utility_bound..=utility_bound`.
    pub utility_bound: i64,
    /// Denominator cap for generated utilities and probability masses.
    pub max_denominator: u32,
}

impl Default for GeneratorSpec {
    fn default() -> GeneratorSpec {
        GeneratorSpec {
            num_states: 2,
            num_actions: [2, 2],
            num_types: [2, 2],
            num_signals: [2, 2],
            utility_bound: 4,
            max_denominator: 4,
        }
    }
}

fn random_rational(rng: &mut impl Rng, bound: i64, max_denominator: u32) -> Rational {
    let numerator = rng.gen_range(-bound..=bound);
    let denominator = rng.gen_range(1..=i64::from(max_denominator));
    Rational::new(numerator.into(), denominator.into())
}

/// An exact random distribution over `len` slots: `denominator` balls into
/// `len` bins. Entries can be zero; the total is exactly one.
pub fn random_distribution(rng: &mut impl Rng, len: usize, max_denominator: u32) -> Vec<Rational> {
    assert!(len > 0, "empty distribution domain");
    let denominator = rng.gen_range(1..=max_denominator);
    let mut counts = vec![0u32; len];
    for _ in 0..denominator {
        counts[rng.gen_range(0..len)] += 1;
    }
    counts
        .into_iter()
        .map(|c| Rational::new(c.into(), denominator.into()))
        .collect()
}

fn index_names(prefix: &str, n: usize) -> Vec<String> {
    (1..=n).map(|k| format!("{prefix}{k}")).collect()
}

/// A random environment of the shape given by `spec`, with exact rational
/// utilities.
pub fn random_environment(spec: &GeneratorSpec, rng: &mut impl Rng) -> EconomicEnvironment {
    EconomicEnvironment::from_fn(
        index_names("n", spec.num_states),
        [index_names("a", spec.num_actions[0]), index_names("b", spec.num_actions[1])],
        [index_names("s", spec.num_types[0]), index_names("t", spec.num_types[1])],
        |_, _, _, _, _, _| random_rational(rng, spec.utility_bound, spec.max_denominator),
    )
}

fn state_points(env: &EconomicEnvironment, player: Player) -> Vec<StatePoint> {
    let opp = player.other();
    let mut out = Vec::new();
    for state in 0..env.num_states() {
        for opp_type in 0..env.num_types(opp) {
            out.push(StatePoint { state, opp_type });
        }
    }
    out
}

/// A random information structure with the given signal counts; belief rows
/// are arbitrary exact distributions, unrelated to any restriction.
pub fn random_structure(
    env: &EconomicEnvironment,
    num_signals: [usize; 2],
    max_denominator: u32,
    rng: &mut impl Rng,
) -> InformationStructure {
    let signals = [index_names("y", num_signals[0]), index_names("z", num_signals[1])];
    let mut beliefs = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        let opp = player.other();
        let mut cells = Vec::new();
        for state in 0..env.num_states() {
            for opp_type in 0..env.num_types(opp) {
                for opp_signal in 0..num_signals[opp.index()] {
                    cells.push(crate::game::BeliefPoint { state, opp_type, opp_signal });
                }
            }
        }
        let rows = env.num_types(player) * num_signals[player.index()];
        for _ in 0..rows {
            let weights = random_distribution(rng, cells.len(), max_denominator);
            let row: BTreeMap<_, _> = cells
                .iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(c, w)| (*c, w))
                .collect();
            beliefs[player.index()].push(row);
        }
    }
    InformationStructure { signals, beliefs }
}

/// Draws one first-order belief admitted by `restriction` for the given
/// player and payoff type.
fn random_admitted_belief(
    env: &EconomicEnvironment,
    player: Player,
    restriction: &TypeRestriction,
    max_denominator: u32,
    rng: &mut impl Rng,
) -> FirstOrderBelief {
    let points = state_points(env, player);
    match restriction {
        TypeRestriction::Unrestricted => {
            let weights = random_distribution(rng, points.len(), max_denominator);
            points
                .iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(p, w)| (*p, w))
                .collect()
        }
        TypeRestriction::Support { allowed } => {
            assert!(!allowed.is_empty(), "support restriction admits no beliefs");
            let allowed: Vec<_> = allowed.iter().copied().collect();
            let weights = random_distribution(rng, allowed.len(), max_denominator);
            allowed
                .iter()
                .zip(weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(p, w)| (*p, w))
                .collect()
        }
        TypeRestriction::FiniteSet { beliefs } => {
            assert!(!beliefs.is_empty(), "finite belief menu is empty");
            beliefs[rng.gen_range(0..beliefs.len())].clone()
        }
        TypeRestriction::Polytope { constraints } => {
            let vertices = polytope_vertices(&points, constraints);
            assert!(!vertices.is_empty(), "polytope restriction admits no beliefs");
            let v = &vertices[rng.gen_range(0..vertices.len())];
            let w = &vertices[rng.gen_range(0..vertices.len())];
            let lambda = {
                let split = random_distribution(rng, 2, max_denominator);
                split[0].clone()
            };
            let mut out: FirstOrderBelief = BTreeMap::new();
            for (p, mass) in v {
                let share = &lambda * mass;
                if !share.is_zero() {
                    *out.entry(*p).or_insert_with(Rational::zero) += share;
                }
            }
            let complement = Rational::one() - &lambda;
            for (p, mass) in w {
                let share = &complement * mass;
                if !share.is_zero() {
                    *out.entry(*p).or_insert_with(Rational::zero) += share;
                }
            }
            out.retain(|_, v| !v.is_zero());
            out
        }
    }
}

/// A random information structure that is consistent with `restriction` by
/// construction: each belief row is a restriction-admitted first-order
/// belief lifted by an independent random split across opponent signals,
/// which leaves the state marginal untouched.
pub fn random_consistent_structure(
    env: &EconomicEnvironment,
    restriction: &BeliefRestriction,
    num_signals: [usize; 2],
    max_denominator: u32,
    rng: &mut impl Rng,
) -> InformationStructure {
    debug_assert!(validate_restriction_shape(env, restriction).is_empty());
    let signals = [index_names("y", num_signals[0]), index_names("z", num_signals[1])];
    let mut beliefs = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        let opp = player.other();
        let opp_signals = num_signals[opp.index()];
        for payoff_type in 0..env.num_types(player) {
            let entry = restriction.entry(player, payoff_type);
            for _ in 0..num_signals[player.index()] {
                let nu = random_admitted_belief(env, player, entry, max_denominator, rng);
                let mut row: BTreeMap<crate::game::BeliefPoint, Rational> = BTreeMap::new();
                for (sp, mass) in &nu {
                    let split = random_distribution(rng, opp_signals, max_denominator);
                    for (opp_signal, share) in split.into_iter().enumerate() {
                        let product = mass * &share;
                        if product.is_zero() {
                            continue;
                        }
                        let cell = crate::game::BeliefPoint {
                            state: sp.state,
                            opp_type: sp.opp_type,
                            opp_signal,
                        };
                        *row.entry(cell).or_insert_with(Rational::zero) += product;
                    }
                }
                beliefs[player.index()].push(row);
            }
        }
    }
    InformationStructure { signals, beliefs }
}

/// The four restriction shapes a generator can be asked for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RestrictionVariant {
    Unrestricted,
    Support,
    Polytope,
    FiniteSet,
}

/// One random restriction entry of the requested variant. Every entry is
/// nonempty by construction: supports are the positive support of a random
/// distribution, menus hold 1–3 explicit distributions, and polytopes take
/// 1–2 inequalities anchored at a belief that stays feasible.
fn random_restriction_entry(
    points: &[StatePoint],
    variant: RestrictionVariant,
    max_denominator: u32,
    rng: &mut impl Rng,
) -> TypeRestriction {
    match variant {
        RestrictionVariant::Unrestricted => TypeRestriction::Unrestricted,
        RestrictionVariant::Support => {
            let weights = random_distribution(rng, points.len(), max_denominator);
            let allowed: BTreeSet<StatePoint> = points
                .iter()
                .zip(&weights)
                .filter(|(_, w)| !w.is_zero())
                .map(|(p, _)| *p)
                .collect();
            TypeRestriction::Support { allowed }
        }
        RestrictionVariant::FiniteSet => {
            let count = rng.gen_range(1..=3);
            let beliefs = (0..count)
                .map(|_| {
                    let weights = random_distribution(rng, points.len(), max_denominator);
                    points
                        .iter()
                        .zip(weights)
                        .filter(|(_, w)| !w.is_zero())
                        .map(|(p, w)| (*p, w))
                        .collect()
                })
                .collect();
            TypeRestriction::FiniteSet { beliefs }
        }
        RestrictionVariant::Polytope => {
            let anchor = random_distribution(rng, points.len(), max_denominator);
            let count = rng.gen_range(1..=2);
            let constraints = (0..count)
                .map(|_| {
                    let coeffs: Vec<Rational> = (0..points.len())
                        .map(|_| Rational::from_integer(rng.gen_range(-2i64..=2).into()))
                        .collect();
                    let anchored: Rational =
                        coeffs.iter().zip(&anchor).map(|(c, w)| c * w).sum();
                    let slack = if rng.gen_bool(0.5) {
                        Rational::zero()
                    } else {
                        Rational::new(1.into(), 4.into())
                    };
                    LinearConstraint {
                        coeffs: points
                            .iter()
                            .zip(&coeffs)
                            .filter(|(_, c)| !c.is_zero())
                            .map(|(p, c)| (*p, c.clone()))
                            .collect(),
                        bound: anchored + slack,
                    }
                })
                .collect();
            TypeRestriction::Polytope { constraints }
        }
    }
}

/// A random belief restriction with per-type kinds drawn independently.
pub fn random_restriction(
    env: &EconomicEnvironment,
    max_denominator: u32,
    rng: &mut impl Rng,
) -> BeliefRestriction {
    let per_type = [Player::One, Player::Two].map(|player| {
        let points = state_points(env, player);
        (0..env.num_types(player))
            .map(|_| {
                let variant = match rng.gen_range(0..4) {
                    0 => RestrictionVariant::Unrestricted,
                    1 => RestrictionVariant::Support,
                    2 => RestrictionVariant::FiniteSet,
                    _ => RestrictionVariant::Polytope,
                };
                random_restriction_entry(&points, variant, max_denominator, rng)
            })
            .collect()
    });
    BeliefRestriction { per_type }
}

/// A random belief restriction whose every entry has the given variant.
pub fn random_restriction_of_variant(
    env: &EconomicEnvironment,
    variant: RestrictionVariant,
    max_denominator: u32,
    rng: &mut impl Rng,
) -> BeliefRestriction {
    let per_type = [Player::One, Player::Two].map(|player| {
        let points = state_points(env, player);
        (0..env.num_types(player))
            .map(|_| random_restriction_entry(&points, variant, max_denominator, rng))
            .collect()
    });
    BeliefRestriction { per_type }
}

/// Signal counts used when union checks sample supplied structures.
pub const CHECK_SAMPLE_SIGNALS: [usize; 2] = [2, 2];
/// Denominator cap used when union checks sample supplied structures.
pub const CHECK_SAMPLE_DENOMINATOR: u32 = 4;

/// The seeded structure sample behind union checks: consistent draws when
/// a restriction is given, arbitrary draws otherwise. Both front ends use
/// this so equal seeds compare equal reports.
pub fn sample_structures_for_check(
    env: &EconomicEnvironment,
    restriction: Option<&BeliefRestriction>,
    samples: usize,
    seed: u64,
) -> Vec<InformationStructure> {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    (0..samples)
        .map(|_| match restriction {
            Some(restriction) => random_consistent_structure(
                env,
                restriction,
                CHECK_SAMPLE_SIGNALS,
                CHECK_SAMPLE_DENOMINATOR,
                &mut rng,
            ),
            None => random_structure(env, CHECK_SAMPLE_SIGNALS, CHECK_SAMPLE_DENOMINATOR, &mut rng),
        })
        .collect()
}
