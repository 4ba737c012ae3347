//! Plain-text instance format.
//!
//! An instance file holds up to three sections. `[environment]` names the
//! states, actions, and payoff types and assigns every utility cell;
//! `[restriction]` optionally constrains first-order beliefs per payoff
//! type; `[structure]` optionally appends signal sets and interim belief
//! rows. Generator knobs live in a separate file holding a single
//! `[generator]` section. All numbers are exact rationals written as
//! `p/q` (or a bare integer); floats are never read or written.
//!
//! ```text
//! # comments run to end of line
//! [environment]
//! states = n1 n2
//! actions1 = up down
//! actions2 = left right
//! types1 = s1
//! types2 = t1
//! payoff 1 * * * * * = 0        # wildcard layering, later lines override
//! payoff 1 up left n1 s1 t1 = 3/2
//!
//! [restriction]
//! support 1 s1 = n1:t1 n2:t1    # allowed state points
//! point 2 t1 = n1:s1=1/2 n2:s1=1/2   # one menu entry per line
//! bound 2 t1 = 1*n2:s1 <= 3/4   # one linear inequality per line
//!
//! [structure]
//! signals1 = y1 y2
//! signals2 = z1
//! belief 1 s1 y1 = n1:t1:z1=1/2 n2:t1:z1=1/2
//! ```
//!
//! A payoff-type entry with no `[restriction]` line is unrestricted; the
//! three line kinds may not be mixed for one entry. State points are
//! `state:opponent-type`; belief cells extend them with the opponent
//! signal. Parsing is exact and strict: unknown sections, unknown keys,
//! duplicate assignments, unassigned payoff cells, and malformed numbers
//! are all errors carrying a line and column. The writer emits a canonical
//! form (full payoff grid, sorted cells) that parses back to the exact
//! same value.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::game::{
    validate_environment, validate_restriction_shape, validate_structure, BeliefPoint,
    BeliefRestriction, EconomicEnvironment, FirstOrderBelief, InformationStructure,
    LinearConstraint, Player, StatePoint, TypeRestriction,
};
use crate::oracle::GeneratorSpec;
use crate::rational::{format_rational, parse_rational, Rational};

/// A parsed instance file.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct InputFile {
    pub env: EconomicEnvironment,
    pub restriction: Option<BeliefRestriction>,
    pub structure: Option<InformationStructure>,
}

/// A parse failure at a 1-based line and character column.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}, column {}: {}", self.line, self.col, self.message)
    }
}

impl std::error::Error for ParseError {}

fn err(line: usize, col: usize, message: impl Into<String>) -> ParseError {
    ParseError { line, col, message: message.into() }
}

#[derive(Clone, Copy)]
struct Tok<'a> {
    text: &'a str,
    col: usize,
}

/// Splits one line into whitespace-separated tokens with 1-based character
/// columns, dropping everything from the first `#` on.
fn tokenize(line: &str) -> Vec<Tok<'_>> {
    let mut toks = Vec::new();
    let mut start_byte: Option<usize> = None;
    let mut start_col = 0usize;
    let mut col = 0usize;
    for (i, ch) in line.char_indices() {
        col += 1;
        if ch == '#' {
            if let Some(s) = start_byte.take() {
                toks.push(Tok { text: &line[s..i], col: start_col });
            }
            return toks;
        }
        if ch.is_whitespace() {
            if let Some(s) = start_byte.take() {
                toks.push(Tok { text: &line[s..i], col: start_col });
            }
        } else if start_byte.is_none() {
            start_byte = Some(i);
            start_col = col;
        }
    }
    if let Some(s) = start_byte {
        toks.push(Tok { text: &line[s..], col: start_col });
    }
    toks
}

/// Characters with syntactic meaning; names may not contain them.
const RESERVED: &str = ":*=#[]<>/";

fn token_safe(name: &str) -> bool {
    !name.is_empty()
        && name.chars().all(|c| !c.is_whitespace() && !RESERVED.contains(c))
}

type RawLine<'a> = (usize, Vec<Tok<'a>>);

/// Groups the input into sections, enforcing known headers and single
/// occurrence. Returns `section name -> (header line, content lines)`.
fn split_sections<'a>(
    text: &'a str,
    allowed: &[&'static str],
) -> Result<BTreeMap<&'static str, (usize, Vec<RawLine<'a>>)>, ParseError> {
    let mut sections: BTreeMap<&'static str, (usize, Vec<RawLine>)> = BTreeMap::new();
    let mut current: Option<&'static str> = None;
    for (index, line) in text.lines().enumerate() {
        let line_no = index + 1;
        let toks = tokenize(line);
        if toks.is_empty() {
            continue;
        }
        let first = toks[0];
        if first.text.starts_with('[') {
            if toks.len() > 1 {
                return Err(err(line_no, toks[1].col, "unexpected token after section header"));
            }
            let name = first
                .text
                .strip_prefix('[')
                .and_then(|t| t.strip_suffix(']'))
                .ok_or_else(|| err(line_no, first.col, "malformed section header"))?;
            let Some(&known) = allowed.iter().find(|&&a| a == name) else {
                return Err(err(line_no, first.col, format!("unknown section \"[{name}]\"")));
            };
            if sections.contains_key(known) {
                return Err(err(line_no, first.col, format!("duplicate section \"[{name}]\"")));
            }
            sections.insert(known, (line_no, Vec::new()));
            current = Some(known);
            continue;
        }
        let Some(active) = current else {
            return Err(err(line_no, first.col, "content before any section header"));
        };
        sections.get_mut(active).unwrap().1.push((line_no, toks));
    }
    Ok(sections)
}

/// Splits a content line at its standalone `=` into head and value tokens.
fn split_assignment<'a, 'b>(
    line_no: usize,
    toks: &'b [Tok<'a>],
) -> Result<(&'b [Tok<'a>], &'b [Tok<'a>]), ParseError> {
    match toks.iter().position(|t| t.text == "=") {
        Some(pos) => Ok((&toks[..pos], &toks[pos + 1..])),
        None => {
            let last = toks.last().unwrap();
            Err(err(line_no, last.col + last.text.chars().count(), "expected \"=\""))
        }
    }
}

fn parse_name_list(line_no: usize, values: &[Tok]) -> Result<Vec<String>, ParseError> {
    let mut names = Vec::new();
    for tok in values {
        if !token_safe(tok.text) {
            return Err(err(
                line_no,
                tok.col,
                format!("invalid name {:?}: must avoid whitespace and \"{RESERVED}\"", tok.text),
            ));
        }
        if names.iter().any(|n| n == tok.text) {
            return Err(err(line_no, tok.col, format!("duplicate name {:?}", tok.text)));
        }
        names.push(tok.text.to_string());
    }
    Ok(names)
}

fn lookup(names: &[String], tok: Tok, what: &str, line_no: usize) -> Result<usize, ParseError> {
    names
        .iter()
        .position(|n| n == tok.text)
        .ok_or_else(|| err(line_no, tok.col, format!("unknown {what} {:?}", tok.text)))
}

fn parse_player(line_no: usize, tok: Tok) -> Result<Player, ParseError> {
    match tok.text {
        "1" => Ok(Player::One),
        "2" => Ok(Player::Two),
        other => Err(err(line_no, tok.col, format!("expected player 1 or 2, found {other:?}"))),
    }
}

fn parse_number(line_no: usize, tok: Tok) -> Result<Rational, ParseError> {
    parse_rational(tok.text)
        .ok_or_else(|| err(line_no, tok.col, format!("malformed rational {:?}", tok.text)))
}

/// Parses a full instance file. The `[environment]` section is mandatory;
/// `[restriction]` and `[structure]` are optional.
pub fn parse_input(text: &str) -> Result<InputFile, ParseError> {
    let sections = split_sections(text, &["environment", "restriction", "structure"])?;
    let Some((env_header, env_lines)) = sections.get("environment") else {
        return Err(err(1, 1, "missing [environment] section"));
    };
    let env = assemble_environment(*env_header, env_lines)?;
    let restriction = match sections.get("restriction") {
        Some((header, lines)) => Some(assemble_restriction(&env, *header, lines)?),
        None => None,
    };
    let structure = match sections.get("structure") {
        Some((header, lines)) => Some(assemble_structure(&env, *header, lines)?),
        None => None,
    };
    Ok(InputFile { env, restriction, structure })
}

fn utility_index(env_dims: [usize; 5], cell: [usize; 5]) -> usize {
    let mut idx = 0;
    for slot in 0..5 {
        idx = idx * env_dims[slot] + cell[slot];
    }
    idx
}

fn assemble_environment(
    header_line: usize,
    lines: &[RawLine],
) -> Result<EconomicEnvironment, ParseError> {
    let mut states: Option<Vec<String>> = None;
    let mut actions: [Option<Vec<String>>; 2] = [None, None];
    let mut types: [Option<Vec<String>>; 2] = [None, None];
    let mut payoff_lines: Vec<&RawLine> = Vec::new();

    for raw in lines {
        let (line_no, toks) = raw;
        let key = toks[0];
        let slot = match key.text {
            "states" => Some(&mut states),
            "actions1" => Some(&mut actions[0]),
            "actions2" => Some(&mut actions[1]),
            "types1" => Some(&mut types[0]),
            "types2" => Some(&mut types[1]),
            "payoff" => {
                payoff_lines.push(raw);
                None
            }
            other => {
                return Err(err(*line_no, key.col, format!("unknown key {other:?}")));
            }
        };
        if let Some(slot) = slot {
            let (head, values) = split_assignment(*line_no, toks)?;
            if head.len() != 1 {
                return Err(err(*line_no, head[1].col, "unexpected token before \"=\""));
            }
            if slot.is_some() {
                return Err(err(*line_no, key.col, format!("duplicate key {:?}", key.text)));
            }
            *slot = Some(parse_name_list(*line_no, values)?);
        }
    }

    let require = |name: &str, value: Option<Vec<String>>| {
        value.ok_or_else(|| err(header_line, 1, format!("missing key {name:?}")))
    };
    let states = require("states", states)?;
    let [a1, a2] = actions;
    let actions = [require("actions1", a1)?, require("actions2", a2)?];
    let [t1, t2] = types;
    let types = [require("types1", t1)?, require("types2", t2)?];

    let dims = [actions[0].len(), actions[1].len(), states.len(), types[0].len(), types[1].len()];
    let size: usize = dims.iter().product();
    let mut tensors: [Vec<Option<Rational>>; 2] = [vec![None; size], vec![None; size]];
    let mut explicit: [Vec<bool>; 2] = [vec![false; size], vec![false; size]];

    for (line_no, toks) in payoff_lines {
        let (head, values) = split_assignment(*line_no, toks)?;
        if head.len() != 7 {
            return Err(err(
                *line_no,
                toks[0].col,
                format!("payoff lines take 6 arguments before \"=\", found {}", head.len() - 1),
            ));
        }
        if values.len() != 1 {
            return Err(err(*line_no, toks[0].col, "payoff lines take exactly one value"));
        }
        let player = parse_player(*line_no, head[1])?;
        let value = parse_number(*line_no, values[0])?;

        let lists: [&[String]; 5] = [&actions[0], &actions[1], &states, &types[0], &types[1]];
        let whats = ["action of player 1", "action of player 2", "state", "type of player 1", "type of player 2"];
        let mut matched: [Vec<usize>; 5] = Default::default();
        let mut fully_explicit = true;
        for slot in 0..5 {
            let tok = head[slot + 2];
            if tok.text == "*" {
                matched[slot] = (0..lists[slot].len()).collect();
                fully_explicit = false;
            } else {
                matched[slot] = vec![lookup(lists[slot], tok, whats[slot], *line_no)?];
            }
        }
        for &ca1 in &matched[0] {
            for &ca2 in &matched[1] {
                for &cst in &matched[2] {
                    for &ct1 in &matched[3] {
                        for &ct2 in &matched[4] {
                            let idx = utility_index(dims, [ca1, ca2, cst, ct1, ct2]);
                            let cell = &mut tensors[player.index()][idx];
                            if fully_explicit {
                                if explicit[player.index()][idx] {
                                    return Err(err(
                                        *line_no,
                                        toks[0].col,
                                        "duplicate payoff assignment for this cell",
                                    ));
                                }
                                explicit[player.index()][idx] = true;
                            }
                            *cell = Some(value.clone());
                        }
                    }
                }
            }
        }
    }

    let mut utility = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        let mut tensor = Vec::with_capacity(size);
        for (idx, cell) in tensors[player.index()].iter().enumerate() {
            match cell {
                Some(value) => tensor.push(value.clone()),
                None => {
                    // Reconstruct the cell names for the message.
                    let mut rem = idx;
                    let mut cell = [0usize; 5];
                    for slot in (0..5).rev() {
                        cell[slot] = rem % dims[slot];
                        rem /= dims[slot];
                    }
                    return Err(err(
                        header_line,
                        1,
                        format!(
                            "payoff of player {} at ({} {} {} {} {}) never assigned",
                            player,
                            actions[0][cell[0]],
                            actions[1][cell[1]],
                            states[cell[2]],
                            types[0][cell[3]],
                            types[1][cell[4]],
                        ),
                    ));
                }
            }
        }
        utility[player.index()] = tensor;
    }

    let env = EconomicEnvironment { nature_states: states, actions, payoff_types: types, utility };
    if let Some(violation) = validate_environment(&env).into_iter().next() {
        return Err(err(header_line, 1, violation.to_string()));
    }
    Ok(env)
}

/// Parses `state:opptype` against the point space of `player`.
fn parse_state_point(
    env: &EconomicEnvironment,
    player: Player,
    line_no: usize,
    tok: Tok,
) -> Result<StatePoint, ParseError> {
    let Some((state_name, type_name)) = tok.text.split_once(':') else {
        return Err(err(line_no, tok.col, format!("expected state:type, found {:?}", tok.text)));
    };
    let state = lookup(
        &env.nature_states,
        Tok { text: state_name, col: tok.col },
        "state",
        line_no,
    )?;
    let opp = player.other();
    let opp_type = lookup(
        &env.payoff_types[opp.index()],
        Tok { text: type_name, col: tok.col },
        "opponent type",
        line_no,
    )?;
    Ok(StatePoint { state, opp_type })
}

enum PartialRestriction {
    Support(BTreeSet<StatePoint>),
    Menu(Vec<FirstOrderBelief>),
    Poly(Vec<LinearConstraint>),
}

impl PartialRestriction {
    fn kind(&self) -> &'static str {
        match self {
            PartialRestriction::Support(_) => "support",
            PartialRestriction::Menu(_) => "point",
            PartialRestriction::Poly(_) => "bound",
        }
    }
}

fn assemble_restriction(
    env: &EconomicEnvironment,
    header_line: usize,
    lines: &[RawLine],
) -> Result<BeliefRestriction, ParseError> {
    let mut entries: BTreeMap<(usize, usize), PartialRestriction> = BTreeMap::new();

    for (line_no, toks) in lines {
        let key = toks[0];
        if !matches!(key.text, "support" | "point" | "bound") {
            return Err(err(*line_no, key.col, format!("unknown key {:?}", key.text)));
        }
        let (head, values) = split_assignment(*line_no, toks)?;
        if head.len() != 3 {
            return Err(err(
                *line_no,
                key.col,
                format!("{} lines take a player and a payoff type before \"=\"", key.text),
            ));
        }
        let player = parse_player(*line_no, head[1])?;
        let payoff_type = lookup(&env.payoff_types[player.index()], head[2], "payoff type", *line_no)?;
        let slot = (player.index(), payoff_type);

        match key.text {
            "support" => {
                let mut allowed = BTreeSet::new();
                for tok in values {
                    let point = parse_state_point(env, player, *line_no, *tok)?;
                    if !allowed.insert(point) {
                        return Err(err(*line_no, tok.col, "duplicate state point"));
                    }
                }
                if let Some(existing) = entries.get(&slot) {
                    let kind = existing.kind();
                    return Err(err(
                        *line_no,
                        key.col,
                        format!("restriction entry already declared with {kind:?} lines"),
                    ));
                }
                entries.insert(slot, PartialRestriction::Support(allowed));
            }
            "point" => {
                let mut belief: FirstOrderBelief = BTreeMap::new();
                let mut total = Rational::zero();
                for tok in values {
                    let Some((point_text, mass_text)) = tok.text.split_once('=') else {
                        return Err(err(
                            *line_no,
                            tok.col,
                            format!("expected state:type=mass, found {:?}", tok.text),
                        ));
                    };
                    let point = parse_state_point(
                        env,
                        player,
                        *line_no,
                        Tok { text: point_text, col: tok.col },
                    )?;
                    let mass = parse_number(*line_no, Tok { text: mass_text, col: tok.col })?;
                    if mass.is_negative() {
                        return Err(err(*line_no, tok.col, "negative mass"));
                    }
                    total += &mass;
                    if belief.insert(point, mass).is_some() {
                        return Err(err(*line_no, tok.col, "duplicate state point"));
                    }
                }
                if !total.is_one() {
                    return Err(err(
                        *line_no,
                        key.col,
                        format!("menu belief masses sum to {}, expected 1", format_rational(&total)),
                    ));
                }
                match entries.entry(slot).or_insert_with(|| PartialRestriction::Menu(Vec::new())) {
                    PartialRestriction::Menu(menu) => menu.push(belief),
                    existing => {
                        let kind = existing.kind();
                        return Err(err(
                            *line_no,
                            key.col,
                            format!("restriction entry already declared with {kind:?} lines"),
                        ));
                    }
                }
            }
            "bound" => {
                let Some(sep) = values.iter().position(|t| t.text == "<=") else {
                    let col = values.last().map_or(key.col, |t| t.col);
                    return Err(err(*line_no, col, "expected \"<=\""));
                };
                let (terms, rhs) = values.split_at(sep);
                if rhs.len() != 2 {
                    return Err(err(*line_no, rhs[0].col, "expected one bound after \"<=\""));
                }
                let bound = parse_number(*line_no, rhs[1])?;
                let mut coeffs: BTreeMap<StatePoint, Rational> = BTreeMap::new();
                for tok in terms {
                    let Some((coeff_text, point_text)) = tok.text.split_once('*') else {
                        return Err(err(
                            *line_no,
                            tok.col,
                            format!("expected coeff*state:type, found {:?}", tok.text),
                        ));
                    };
                    let coeff = parse_number(*line_no, Tok { text: coeff_text, col: tok.col })?;
                    let point = parse_state_point(
                        env,
                        player,
                        *line_no,
                        Tok { text: point_text, col: tok.col },
                    )?;
                    if coeffs.insert(point, coeff).is_some() {
                        return Err(err(*line_no, tok.col, "duplicate state point"));
                    }
                }
                let constraint = LinearConstraint { coeffs, bound };
                match entries.entry(slot).or_insert_with(|| PartialRestriction::Poly(Vec::new())) {
                    PartialRestriction::Poly(list) => list.push(constraint),
                    existing => {
                        let kind = existing.kind();
                        return Err(err(
                            *line_no,
                            key.col,
                            format!("restriction entry already declared with {kind:?} lines"),
                        ));
                    }
                }
            }
            _ => unreachable!(),
        }
    }

    let per_type = [Player::One, Player::Two].map(|player| {
        (0..env.num_types(player))
            .map(|payoff_type| match entries.remove(&(player.index(), payoff_type)) {
                None => TypeRestriction::Unrestricted,
                Some(PartialRestriction::Support(allowed)) => TypeRestriction::Support { allowed },
                Some(PartialRestriction::Menu(beliefs)) => TypeRestriction::FiniteSet { beliefs },
                Some(PartialRestriction::Poly(constraints)) => {
                    TypeRestriction::Polytope { constraints }
                }
            })
            .collect()
    });
    let restriction = BeliefRestriction { per_type };
    if let Some(violation) = validate_restriction_shape(env, &restriction).into_iter().next() {
        return Err(err(header_line, 1, violation.to_string()));
    }
    Ok(restriction)
}

fn assemble_structure(
    env: &EconomicEnvironment,
    header_line: usize,
    lines: &[RawLine],
) -> Result<InformationStructure, ParseError> {
    let mut signals: [Option<Vec<String>>; 2] = [None, None];
    let mut belief_lines: Vec<&RawLine> = Vec::new();

    for raw in lines {
        let (line_no, toks) = raw;
        let key = toks[0];
        match key.text {
            "signals1" | "signals2" => {
                let (head, values) = split_assignment(*line_no, toks)?;
                if head.len() != 1 {
                    return Err(err(*line_no, head[1].col, "unexpected token before \"=\""));
                }
                let slot = &mut signals[if key.text == "signals1" { 0 } else { 1 }];
                if slot.is_some() {
                    return Err(err(*line_no, key.col, format!("duplicate key {:?}", key.text)));
                }
                *slot = Some(parse_name_list(*line_no, values)?);
            }
            "belief" => belief_lines.push(raw),
            other => return Err(err(*line_no, key.col, format!("unknown key {other:?}"))),
        }
    }

    let [s1, s2] = signals;
    let signals = [
        s1.ok_or_else(|| err(header_line, 1, "missing key \"signals1\""))?,
        s2.ok_or_else(|| err(header_line, 1, "missing key \"signals2\""))?,
    ];

    let mut rows: BTreeMap<(usize, usize, usize), BTreeMap<BeliefPoint, Rational>> = BTreeMap::new();
    for (line_no, toks) in belief_lines {
        let key = toks[0];
        let (head, values) = split_assignment(*line_no, toks)?;
        if head.len() != 4 {
            return Err(err(
                *line_no,
                key.col,
                "belief lines take a player, payoff type, and signal before \"=\"",
            ));
        }
        let player = parse_player(*line_no, head[1])?;
        let payoff_type = lookup(&env.payoff_types[player.index()], head[2], "payoff type", *line_no)?;
        let signal = lookup(&signals[player.index()], head[3], "signal", *line_no)?;
        let opp = player.other();

        let mut row: BTreeMap<BeliefPoint, Rational> = BTreeMap::new();
        let mut total = Rational::zero();
        for tok in values {
            let Some((cell_text, mass_text)) = tok.text.split_once('=') else {
                return Err(err(
                    *line_no,
                    tok.col,
                    format!("expected state:type:signal=mass, found {:?}", tok.text),
                ));
            };
            let parts: Vec<&str> = cell_text.split(':').collect();
            if parts.len() != 3 {
                return Err(err(
                    *line_no,
                    tok.col,
                    format!("expected state:type:signal=mass, found {:?}", tok.text),
                ));
            }
            let state =
                lookup(&env.nature_states, Tok { text: parts[0], col: tok.col }, "state", *line_no)?;
            let opp_type = lookup(
                &env.payoff_types[opp.index()],
                Tok { text: parts[1], col: tok.col },
                "opponent type",
                *line_no,
            )?;
            let opp_signal = lookup(
                &signals[opp.index()],
                Tok { text: parts[2], col: tok.col },
                "opponent signal",
                *line_no,
            )?;
            let mass = parse_number(*line_no, Tok { text: mass_text, col: tok.col })?;
            if mass.is_negative() {
                return Err(err(*line_no, tok.col, "negative mass"));
            }
            total += &mass;
            if row.insert(BeliefPoint { state, opp_type, opp_signal }, mass).is_some() {
                return Err(err(*line_no, tok.col, "duplicate belief cell"));
            }
        }
        if !total.is_one() {
            return Err(err(
                *line_no,
                key.col,
                format!("belief masses sum to {}, expected 1", format_rational(&total)),
            ));
        }
        if rows.insert((player.index(), payoff_type, signal), row).is_some() {
            return Err(err(*line_no, key.col, "duplicate belief row"));
        }
    }

    let mut beliefs = [Vec::new(), Vec::new()];
    for player in Player::BOTH {
        for payoff_type in 0..env.num_types(player) {
            for signal in 0..signals[player.index()].len() {
                match rows.remove(&(player.index(), payoff_type, signal)) {
                    Some(row) => beliefs[player.index()].push(row),
                    None => {
                        return Err(err(
                            header_line,
                            1,
                            format!(
                                "missing belief row for player {} type {} signal {}",
                                player,
                                env.payoff_types[player.index()][payoff_type],
                                signals[player.index()][signal],
                            ),
                        ));
                    }
                }
            }
        }
    }

    let structure = InformationStructure { signals, beliefs };
    if let Some(violation) = validate_structure(env, &structure).into_iter().next() {
        return Err(err(header_line, 1, violation.to_string()));
    }
    Ok(structure)
}

/// Parses a generator spec file holding a single `[generator]` section.
/// Missing keys fall back to the default spec.
pub fn parse_generator(text: &str) -> Result<GeneratorSpec, ParseError> {
    let sections = split_sections(text, &["generator"])?;
    let Some((_, lines)) = sections.get("generator") else {
        return Err(err(1, 1, "missing [generator] section"));
    };
    let mut spec = GeneratorSpec::default();
    let mut seen: BTreeSet<&str> = BTreeSet::new();

    let parse_count = |line_no: usize, tok: Tok| -> Result<usize, ParseError> {
        let value: usize = tok
            .text
            .parse()
            .map_err(|_| err(line_no, tok.col, format!("malformed count {:?}", tok.text)))?;
        if value == 0 {
            return Err(err(line_no, tok.col, "count must be at least 1"));
        }
        Ok(value)
    };

    for (line_no, toks) in lines {
        let key = toks[0];
        let (head, values) = split_assignment(*line_no, toks)?;
        if head.len() != 1 {
            return Err(err(*line_no, head[1].col, "unexpected token before \"=\""));
        }
        if !seen.insert(key.text) {
            return Err(err(*line_no, key.col, format!("duplicate key {:?}", key.text)));
        }
        let expect_len = |n: usize| -> Result<(), ParseError> {
            if values.len() != n {
                Err(err(
                    *line_no,
                    key.col,
                    format!("key {:?} takes {n} value(s), found {}", key.text, values.len()),
                ))
            } else {
                Ok(())
            }
        };
        match key.text {
            "states" => {
                expect_len(1)?;
                spec.num_states = parse_count(*line_no, values[0])?;
            }
            "actions" | "types" | "signals" => {
                expect_len(2)?;
                let pair = [parse_count(*line_no, values[0])?, parse_count(*line_no, values[1])?];
                match key.text {
                    "actions" => spec.num_actions = pair,
                    "types" => spec.num_types = pair,
                    _ => spec.num_signals = pair,
                }
            }
            "utility_bound" => {
                expect_len(1)?;
                spec.utility_bound = values[0].text.parse().map_err(|_| {
                    err(*line_no, values[0].col, format!("malformed integer {:?}", values[0].text))
                })?;
                if spec.utility_bound < 0 {
                    return Err(err(*line_no, values[0].col, "utility_bound must be nonnegative"));
                }
            }
            "max_denominator" => {
                expect_len(1)?;
                spec.max_denominator = values[0].text.parse().map_err(|_| {
                    err(*line_no, values[0].col, format!("malformed count {:?}", values[0].text))
                })?;
                if spec.max_denominator == 0 {
                    return Err(err(*line_no, values[0].col, "count must be at least 1"));
                }
            }
            other => return Err(err(*line_no, key.col, format!("unknown key {other:?}"))),
        }
    }
    Ok(spec)
}

fn assert_safe(name: &str, what: &str) {
    assert!(token_safe(name), "{what} name {name:?} is not writable: must avoid whitespace and {RESERVED:?}");
}

fn state_point_token(env: &EconomicEnvironment, player: Player, point: &StatePoint) -> String {
    let opp = player.other();
    format!(
        "{}:{}",
        env.nature_states[point.state],
        env.payoff_types[opp.index()][point.opp_type]
    )
}

/// Serializes an instance to the canonical text form: full payoff grid
/// with no wildcards, cells in index order, exact rationals. The result
/// parses back to the exact same value. Panics if any name contains
/// reserved characters.
pub fn write_input(input: &InputFile) -> String {
    let env = &input.env;
    for name in &env.nature_states {
        assert_safe(name, "state");
    }
    for player in Player::BOTH {
        for name in &env.actions[player.index()] {
            assert_safe(name, "action");
        }
        for name in &env.payoff_types[player.index()] {
            assert_safe(name, "type");
        }
    }

    let mut out = String::new();
    out.push_str("[environment]\n");
    out.push_str(&format!("states = {}\n", env.nature_states.join(" ")));
    out.push_str(&format!("actions1 = {}\n", env.actions[0].join(" ")));
    out.push_str(&format!("actions2 = {}\n", env.actions[1].join(" ")));
    out.push_str(&format!("types1 = {}\n", env.payoff_types[0].join(" ")));
    out.push_str(&format!("types2 = {}\n", env.payoff_types[1].join(" ")));
    let dims = [
        env.actions[0].len(),
        env.actions[1].len(),
        env.nature_states.len(),
        env.payoff_types[0].len(),
        env.payoff_types[1].len(),
    ];
    for player in Player::BOTH {
        for a1 in 0..dims[0] {
            for a2 in 0..dims[1] {
                for state in 0..dims[2] {
                    for t1 in 0..dims[3] {
                        for t2 in 0..dims[4] {
                            let idx = utility_index(dims, [a1, a2, state, t1, t2]);
                            out.push_str(&format!(
                                "payoff {} {} {} {} {} {} = {}\n",
                                player,
                                env.actions[0][a1],
                                env.actions[1][a2],
                                env.nature_states[state],
                                env.payoff_types[0][t1],
                                env.payoff_types[1][t2],
                                format_rational(&env.utility[player.index()][idx]),
                            ));
                        }
                    }
                }
            }
        }
    }

    if let Some(restriction) = &input.restriction {
        out.push_str("\n[restriction]\n");
        for player in Player::BOTH {
            for payoff_type in 0..env.num_types(player) {
                let type_name = &env.payoff_types[player.index()][payoff_type];
                match restriction.entry(player, payoff_type) {
                    TypeRestriction::Unrestricted => {}
                    TypeRestriction::Support { allowed } => {
                        let points: Vec<String> = allowed
                            .iter()
                            .map(|p| state_point_token(env, player, p))
                            .collect();
                        out.push_str(&format!(
                            "support {} {} = {}\n",
                            player,
                            type_name,
                            points.join(" ")
                        ));
                    }
                    TypeRestriction::FiniteSet { beliefs } => {
                        assert!(
                            !beliefs.is_empty(),
                            "an empty belief menu has no text form"
                        );
                        for belief in beliefs {
                            let cells: Vec<String> = belief
                                .iter()
                                .map(|(p, mass)| {
                                    format!(
                                        "{}={}",
                                        state_point_token(env, player, p),
                                        format_rational(mass)
                                    )
                                })
                                .collect();
                            out.push_str(&format!(
                                "point {} {} = {}\n",
                                player,
                                type_name,
                                cells.join(" ")
                            ));
                        }
                    }
                    TypeRestriction::Polytope { constraints } => {
                        assert!(
                            !constraints.is_empty(),
                            "an empty constraint list has no text form; use no line instead"
                        );
                        for constraint in constraints {
                            let terms: Vec<String> = constraint
                                .coeffs
                                .iter()
                                .map(|(p, coeff)| {
                                    format!(
                                        "{}*{}",
                                        format_rational(coeff),
                                        state_point_token(env, player, p)
                                    )
                                })
                                .collect();
                            out.push_str(&format!(
                                "bound {} {} = {} <= {}\n",
                                player,
                                type_name,
                                terms.join(" "),
                                format_rational(&constraint.bound)
                            ));
                        }
                    }
                }
            }
        }
    }

    if let Some(structure) = &input.structure {
        for player in Player::BOTH {
            for name in &structure.signals[player.index()] {
                assert_safe(name, "signal");
            }
        }
        out.push_str("\n[structure]\n");
        out.push_str(&format!("signals1 = {}\n", structure.signals[0].join(" ")));
        out.push_str(&format!("signals2 = {}\n", structure.signals[1].join(" ")));
        for player in Player::BOTH {
            let opp = player.other();
            for payoff_type in 0..env.num_types(player) {
                for signal in 0..structure.num_signals(player) {
                    let row = structure.belief(player, payoff_type, signal);
                    let cells: Vec<String> = row
                        .iter()
                        .map(|(cell, mass)| {
                            format!(
                                "{}:{}:{}={}",
                                env.nature_states[cell.state],
                                env.payoff_types[opp.index()][cell.opp_type],
                                structure.signals[opp.index()][cell.opp_signal],
                                format_rational(mass)
                            )
                        })
                        .collect();
                    out.push_str(&format!(
                        "belief {} {} {} = {}\n",
                        player,
                        env.payoff_types[player.index()][payoff_type],
                        structure.signals[player.index()][signal],
                        cells.join(" ")
                    ));
                }
            }
        }
    }

    out
}

/// Serializes a generator spec with every knob explicit.
pub fn write_generator(spec: &GeneratorSpec) -> String {
    format!(
        "[generator]\nstates = {}\nactions = {} {}\ntypes = {} {}\nsignals = {} {}\nutility_bound = {}\nmax_denominator = {}\n",
        spec.num_states,
        spec.num_actions[0],
        spec.num_actions[1],
        spec.num_types[0],
        spec.num_types[1],
        spec.num_signals[0],
        spec.num_signals[1],
        spec.utility_bound,
        spec.max_denominator,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracle::{
        random_consistent_structure, random_environment, random_restriction, random_structure,
    };
    use crate::rational::{int, rat};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const PENNIES: &str = "\
# Matching pennies with a single state and single types.
[environment]
states = n1
actions1 = a1 a2
actions2 = b1 b2
types1 = s1
types2 = t1
payoff 1 * * * * * = -1
payoff 2 * * * * * = 1
payoff 1 a1 b1 n1 s1 t1 = 1
payoff 1 a2 b2 n1 s1 t1 = 1
payoff 2 a1 b1 n1 s1 t1 = -1
payoff 2 a2 b2 n1 s1 t1 = -1
";

    #[test]
    fn wildcard_layering_reproduces_matching_pennies() {
        let parsed = parse_input(PENNIES).unwrap();
        assert_eq!(parsed.env, crate::game::tests::matching_pennies());
        assert_eq!(parsed.restriction, None);
        assert_eq!(parsed.structure, None);
    }

    #[test]
    fn canonical_form_round_trips_exactly() {
        let parsed = parse_input(PENNIES).unwrap();
        let text = write_input(&parsed);
        assert_eq!(parse_input(&text).unwrap(), parsed);
        // Canonical output is a fixed point of write ∘ parse.
        assert_eq!(write_input(&parse_input(&text).unwrap()), text);
    }

    #[test]
    fn random_instances_round_trip_through_text() {
        let mut rng = ChaCha8Rng::seed_from_u64(20001);
        for trial in 0..12 {
            let spec = GeneratorSpec::default();
            let env = random_environment(&spec, &mut rng);
            let restriction = random_restriction(&env, spec.max_denominator, &mut rng);
            let structure = if trial % 2 == 0 {
                random_structure(&env, spec.num_signals, spec.max_denominator, &mut rng)
            } else {
                random_consistent_structure(
                    &env,
                    &restriction,
                    spec.num_signals,
                    spec.max_denominator,
                    &mut rng,
                )
            };
            let input = InputFile {
                env,
                restriction: Some(restriction),
                structure: Some(structure),
            };
            let text = write_input(&input);
            assert_eq!(parse_input(&text).unwrap(), input, "trial {trial}:\n{text}");
        }
    }

    #[test]
    fn restriction_lines_build_every_kind() {
        let text = "\
[environment]
states = n1 n2
actions1 = a1 a2
actions2 = b1 b2
types1 = s1 s2
types2 = t1
payoff 1 * * * * * = 0
payoff 2 * * * * * = 0

[restriction]
support 1 s1 = n1:t1
point 1 s2 = n1:t1=1/3 n2:t1=2/3
point 1 s2 = n1:t1=1
bound 2 t1 = 1*n2:s1 -1*n2:s2 <= 3/4
";
        let parsed = parse_input(text).unwrap();
        let restriction = parsed.restriction.unwrap();
        assert_eq!(
            *restriction.entry(Player::One, 0),
            TypeRestriction::Support {
                allowed: BTreeSet::from([StatePoint { state: 0, opp_type: 0 }])
            }
        );
        assert_eq!(
            *restriction.entry(Player::One, 1),
            TypeRestriction::FiniteSet {
                beliefs: vec![
                    BTreeMap::from([
                        (StatePoint { state: 0, opp_type: 0 }, rat(1, 3)),
                        (StatePoint { state: 1, opp_type: 0 }, rat(2, 3)),
                    ]),
                    BTreeMap::from([(StatePoint { state: 0, opp_type: 0 }, int(1))]),
                ]
            }
        );
        assert_eq!(
            *restriction.entry(Player::Two, 0),
            TypeRestriction::Polytope {
                constraints: vec![LinearConstraint {
                    coeffs: BTreeMap::from([
                        (StatePoint { state: 1, opp_type: 0 }, int(1)),
                        (StatePoint { state: 1, opp_type: 1 }, int(-1)),
                    ]),
                    bound: rat(3, 4),
                }]
            }
        );
    }

    #[test]
    fn errors_carry_line_and_column() {
        let missing_eq = "[environment]\nstates n1\n";
        assert_eq!(parse_input(missing_eq).unwrap_err(), err(2, 10, "expected \"=\""));

        let unknown_section = "[galaxy]\n";
        assert_eq!(
            parse_input(unknown_section).unwrap_err(),
            err(1, 1, "unknown section \"[galaxy]\"")
        );

        let early = "states = n1\n[environment]\n";
        assert_eq!(
            parse_input(early).unwrap_err(),
            err(1, 1, "content before any section header")
        );

        let unknown_key = "[environment]\nstatez = n1\n";
        assert_eq!(
            parse_input(unknown_key).unwrap_err(),
            err(2, 1, "unknown key \"statez\"")
        );

        let bad_rational = "\
[environment]
states = n1
actions1 = a1
actions2 = b1
types1 = s1
types2 = t1
payoff 1 a1 b1 n1 s1 t1 = 0.5
";
        assert_eq!(
            parse_input(bad_rational).unwrap_err(),
            err(7, 27, "malformed rational \"0.5\"")
        );

        let unknown_name = "\
[environment]
states = n1
actions1 = a1
actions2 = b1
types1 = s1
types2 = t1
payoff 1 a1 b2 n1 s1 t1 = 1
";
        assert_eq!(
            parse_input(unknown_name).unwrap_err(),
            err(7, 13, "unknown action of player 2 \"b2\"")
        );

        let incomplete = "\
[environment]
states = n1
actions1 = a1 a2
actions2 = b1
types1 = s1
types2 = t1
payoff 1 * * * * * = 0
payoff 2 a1 b1 n1 s1 t1 = 1
";
        assert_eq!(
            parse_input(incomplete).unwrap_err(),
            err(1, 1, "payoff of player 2 at (a2 b1 n1 s1 t1) never assigned")
        );

        let duplicate_cell = "\
[environment]
states = n1
actions1 = a1
actions2 = b1
types1 = s1
types2 = t1
payoff 1 a1 b1 n1 s1 t1 = 1
payoff 1 a1 b1 n1 s1 t1 = 1
payoff 2 * * * * * = 0
";
        assert_eq!(
            parse_input(duplicate_cell).unwrap_err(),
            err(8, 1, "duplicate payoff assignment for this cell")
        );
    }

    #[test]
    fn restriction_and_structure_errors_are_precise() {
        let base = "\
[environment]
states = n1 n2
actions1 = a1
actions2 = b1
types1 = s1
types2 = t1
payoff 1 * * * * * = 0
payoff 2 * * * * * = 0
";
        let conflict = format!("{base}\n[restriction]\nsupport 1 s1 = n1:t1\npoint 1 s1 = n1:t1=1\n");
        assert_eq!(
            parse_input(&conflict).unwrap_err(),
            err(12, 1, "restriction entry already declared with \"support\" lines")
        );

        let bad_sum = format!("{base}\n[restriction]\npoint 1 s1 = n1:t1=1/3\n");
        assert_eq!(
            parse_input(&bad_sum).unwrap_err(),
            err(11, 1, "menu belief masses sum to 1/3, expected 1")
        );

        let bad_row = format!(
            "{base}\n[structure]\nsignals1 = y1\nsignals2 = z1\nbelief 1 s1 y1 = n1:t1:z1=1/2\nbelief 2 t1 z1 = n1:s1:y1=1\n"
        );
        assert_eq!(
            parse_input(&bad_row).unwrap_err(),
            err(13, 1, "belief masses sum to 1/2, expected 1")
        );

        let missing_row = format!(
            "{base}\n[structure]\nsignals1 = y1 y2\nsignals2 = z1\nbelief 1 s1 y1 = n1:t1:z1=1\nbelief 2 t1 z1 = n1:s1:y1=1\n"
        );
        assert_eq!(
            parse_input(&missing_row).unwrap_err(),
            err(10, 1, "missing belief row for player 1 type s1 signal y2")
        );
    }

    #[test]
    fn generator_specs_parse_with_defaults_and_round_trip() {
        let spec = parse_generator("[generator]\n").unwrap();
        assert_eq!(spec, GeneratorSpec::default());

        let custom = parse_generator(
            "[generator]\nstates = 3\nactions = 3 2\ntypes = 1 2\nsignals = 2 3\nutility_bound = 7\nmax_denominator = 5\n",
        )
        .unwrap();
        assert_eq!(
            custom,
            GeneratorSpec {
                num_states: 3,
                num_actions: [3, 2],
                num_types: [1, 2],
                num_signals: [2, 3],
                utility_bound: 7,
                max_denominator: 5,
            }
        );
        assert_eq!(parse_generator(&write_generator(&custom)).unwrap(), custom);

        assert_eq!(
            parse_generator("[generator]\nstates = 0\n").unwrap_err(),
            err(2, 10, "count must be at least 1")
        );
        assert_eq!(
            parse_generator("[environment]\n").unwrap_err(),
            err(1, 1, "unknown section \"[environment]\"")
        );
        assert_eq!(
            parse_input("[generator]\n").unwrap_err(),
            err(1, 1, "unknown section \"[generator]\"")
        );
    }
}
