//! Outermost-fair evaluation of constructor prefixes.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::position::Position;
use crate::signature::Sort;
use crate::spec::Specification;
use crate::term::Term;

/// Name of the variable that stands for a truncated subterm.
pub const HOLE: &str = "…";

/// Picks one of several rules matching at the same position.
pub trait RuleChooser {
    /// `rules` has at least two entries; returns one of them.
    fn choose(&mut self, position: &Position, rules: &[usize]) -> usize;
}

/// Uniform draws from a seeded ChaCha8 stream.
pub struct SeededChooser {
    rng: ChaCha8Rng,
}

impl SeededChooser {
    pub fn new(seed: u64) -> Self {
        SeededChooser {
            rng: ChaCha8Rng::seed_from_u64(seed),
        }
    }
}

impl RuleChooser for SeededChooser {
    fn choose(&mut self, _: &Position, rules: &[usize]) -> usize {
        rules[self.rng.gen_range(0..rules.len())]
    }
}

/// Always prefers the first listed rule that is among the candidates.
pub struct PreferRules(pub Vec<usize>);

impl RuleChooser for PreferRules {
    fn choose(&mut self, _: &Position, rules: &[usize]) -> usize {
        self.0
            .iter()
            .copied()
            .find(|r| rules.contains(r))
            .unwrap_or(rules[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Choice {
    pub round: usize,
    pub position: Position,
    pub rule: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PrefixResult {
    /// Sort-s subterms at depth `k` are replaced by [`HOLE`] variables.
    pub term: Term,
    pub rounds_used: usize,
    pub choice_log: Vec<Choice>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SimError {
    #[error("round budget of {rounds} exhausted; no constructor at position {position}")]
    BudgetExceeded {
        last: Term,
        position: Position,
        rounds: usize,
    },
    #[error("normal form without a constructor at position {position}")]
    Stuck { last: Term, position: Position },
    #[error("the start term must be ground and of structure sort")]
    InvalidTerm,
}

pub fn default_max_rounds(spec: &Specification, k: usize) -> usize {
    10 * (k + 1) * spec.struct_rules().count()
}

/// Contracts every outermost redex of `t` once. Where several rules match
/// at one position, `chooser` decides.
pub fn parallel_outermost_round(
    spec: &Specification,
    t: &Term,
    chooser: &mut dyn RuleChooser,
) -> (Term, Vec<(Position, usize)>) {
    let redexes = spec.redexes(t, true);
    let mut out = t.clone();
    let mut choices = Vec::new();
    let mut i = 0;
    while i < redexes.len() {
        let p = &redexes[i].position;
        let mut j = i;
        while j < redexes.len() && redexes[j].position == *p {
            j += 1;
        }
        let rules: Vec<usize> = redexes[i..j].iter().map(|r| r.rule).collect();
        let rule = if rules.len() == 1 {
            rules[0]
        } else {
            chooser.choose(p, &rules)
        };
        out = spec
            .rewrite(&out, p, rule)
            .expect("outermost redexes are parallel");
        choices.push((p.clone(), rule));
        i = j;
    }
    (out, choices)
}

/// Shallowest sort-s position above depth `k` that is not constructor-rooted,
/// first in pre-order among equals.
fn open_position(spec: &Specification, t: &Term, k: usize) -> Option<Position> {
    let sig = spec.signature();
    let mut level: Vec<(Position, &Term)> = vec![(Position::root(), t)];
    for _ in 0..k {
        let mut next = Vec::new();
        for (p, s) in level {
            match s.root() {
                Some(f) if spec.is_constructor(f) => {
                    for (i, a) in s.args().iter().enumerate() {
                        if sig.get(f).arg_sorts()[i] == Sort::Structure {
                            next.push((p.child(i + 1), a));
                        }
                    }
                }
                _ => return Some(p),
            }
        }
        level = next;
    }
    None
}

/// Innermost normal form over the data rules, taking the first matching rule.
pub fn normalize_data(spec: &Specification, t: &Term) -> Term {
    let Term::App(f, args) = t else {
        return t.clone();
    };
    let args: Vec<Term> = args.iter().map(|a| normalize_data(spec, a)).collect();
    let t = Term::app(*f, args);
    match spec
        .rules_for(*f)
        .iter()
        .find(|&&r| spec.rule(r).is_data_rule() && spec.match_rule(r, &t).is_some())
    {
        Some(&r) => normalize_data(
            spec,
            &spec
                .rewrite(&t, &Position::root(), r)
                .expect("rule matches"),
        ),
        None => t,
    }
}

fn truncate(spec: &Specification, t: &Term, k: usize) -> Term {
    let sig = spec.signature();
    if k == 0 {
        return Term::var(HOLE, Sort::Structure);
    }
    let Term::App(f, args) = t else {
        return t.clone();
    };
    let sorts = sig.get(*f).arg_sorts();
    let args = args
        .iter()
        .zip(sorts)
        .map(|(a, s)| {
            if *s == Sort::Data {
                normalize_data(spec, a)
            } else {
                truncate(spec, a, k - 1)
            }
        })
        .collect();
    Term::app(*f, args)
}

/// Runs parallel-outermost rounds until every sort-s position above depth
/// `k` is constructor-rooted, then cuts the term at depth `k` and normalizes
/// the data it keeps.
pub fn eval_prefix(
    spec: &Specification,
    t: &Term,
    k: usize,
    chooser: &mut dyn RuleChooser,
    max_rounds: usize,
) -> Result<PrefixResult, SimError> {
    if !t.is_ground() || spec.signature().sort_of(t).ok() != Some(Sort::Structure) {
        return Err(SimError::InvalidTerm);
    }
    let mut current = t.clone();
    let mut log = Vec::new();
    let mut round = 0;
    while let Some(position) = open_position(spec, &current, k) {
        if round == max_rounds {
            return Err(SimError::BudgetExceeded {
                last: current,
                position,
                rounds: round,
            });
        }
        let (next, choices) = parallel_outermost_round(spec, &current, chooser);
        if choices.is_empty() {
            return Err(SimError::Stuck {
                last: current,
                position,
            });
        }
        log.extend(choices.into_iter().map(|(position, rule)| Choice {
            round,
            position,
            rule,
        }));
        current = next;
        round += 1;
    }
    Ok(PrefixResult {
        term: truncate(spec, &current, k),
        rounds_used: round,
        choice_log: log,
    })
}

/// Data elements along the spine of the infix constructor, outermost first.
pub fn stream_values(spec: &Specification, t: &Term) -> Vec<Term> {
    let Some(cons) = spec.signature().infix_constructor() else {
        return Vec::new();
    };
    let mut out = Vec::new();
    let mut cur = t;
    while cur.root() == Some(cons) {
        out.push(cur.args()[0].clone());
        cur = &cur.args()[1];
    }
    out
}
