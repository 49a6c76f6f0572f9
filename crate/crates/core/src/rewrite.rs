//! Matching, substitution and plain rewriting.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::position::Position;
use crate::signature::Sort;
use crate::term::{Term, Var};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Substitution(BTreeMap<Var, Term>);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("variable `{var}` of sort {expected} cannot be bound to a term of sort {found}")]
pub struct SortClash {
    pub var: String,
    pub expected: Sort,
    pub found: Sort,
}

impl Substitution {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `var` to `term`; `term_sort` is the sort of `term`.
    pub fn bind(&mut self, var: Var, term: Term, term_sort: Sort) -> Result<(), SortClash> {
        if var.sort() != term_sort {
            return Err(SortClash {
                var: var.name().to_string(),
                expected: var.sort(),
                found: term_sort,
            });
        }
        self.0.insert(var, term);
        Ok(())
    }

    pub fn get(&self, var: &Var) -> Option<&Term> {
        self.0.get(var)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &Term)> {
        self.0.iter()
    }

    /// Homomorphic extension; variables outside the domain stay put.
    pub fn apply(&self, t: &Term) -> Term {
        match t {
            Term::Var(v) => self.0.get(v).cloned().unwrap_or_else(|| t.clone()),
            Term::App(f, args) => {
                if args.is_empty() {
                    return t.clone();
                }
                Term::app(*f, args.iter().map(|a| self.apply(a)).collect())
            }
        }
    }
}

/// `apply_subst(t, σ)`. Fails on a binding whose term has a known sort
/// different from its variable; bindings to applications are trusted to be
/// well-sorted (check them with [`crate::Signature::sort_of`]).
pub fn apply_subst(t: &Term, sigma: &Substitution) -> Result<Term, SortClash> {
    for (v, u) in sigma.iter() {
        if let Term::Var(w) = u {
            if w.sort() != v.sort() {
                return Err(SortClash {
                    var: v.name().to_string(),
                    expected: v.sort(),
                    found: w.sort(),
                });
            }
        }
    }
    Ok(sigma.apply(t))
}

/// Syntactic one-way matching: `σ` with `pattern σ = subject`.
///
/// Only pattern variables are bound, so subject variables never clash with
/// rule variables. Repeated pattern variables must bind equal subterms.
pub fn match_term(pattern: &Term, subject: &Term) -> Option<Substitution> {
    let mut sigma = BTreeMap::new();
    if match_into(pattern, subject, &mut sigma) {
        Some(Substitution(sigma))
    } else {
        None
    }
}

/// True when `pattern` matches `subject`.
pub fn matches(pattern: &Term, subject: &Term) -> bool {
    let mut sigma = BTreeMap::new();
    match_into(pattern, subject, &mut sigma)
}

fn match_into(pattern: &Term, subject: &Term, sigma: &mut BTreeMap<Var, Term>) -> bool {
    match (pattern, subject) {
        (Term::Var(v), _) => {
            // applications carry no sort without a signature; subjects are well-sorted
            if matches!(subject, Term::Var(w) if w.sort() != v.sort()) {
                return false;
            }
            match sigma.get(v) {
                Some(bound) => bound == subject,
                None => {
                    sigma.insert(v.clone(), subject.clone());
                    true
                }
            }
        }
        (Term::App(f, ps), Term::App(g, ss)) => {
            f == g
                && ps.len() == ss.len()
                && ps
                    .iter()
                    .zip(ss.iter())
                    .all(|(p, s)| match_into(p, s, sigma))
        }
        (Term::App(..), Term::Var(_)) => false,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    lhs: Term,
    rhs: Term,
    origin: Sort,
    source_index: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RuleError {
    #[error("left-hand side is a variable")]
    VariableLhs,
    #[error("right-hand side variable `{0}` does not occur in the left-hand side")]
    UnboundVariable(String),
}

impl Rule {
    pub fn new(lhs: Term, rhs: Term, origin: Sort, source_index: usize) -> Result<Rule, RuleError> {
        if lhs.is_var() {
            return Err(RuleError::VariableLhs);
        }
        let lvars = lhs.vars();
        if let Some(v) = rhs.vars().into_iter().find(|v| !lvars.contains(v)) {
            return Err(RuleError::UnboundVariable(v.name().to_string()));
        }
        Ok(Rule {
            lhs,
            rhs,
            origin,
            source_index,
        })
    }

    pub fn lhs(&self) -> &Term {
        &self.lhs
    }

    pub fn rhs(&self) -> &Term {
        &self.rhs
    }

    /// Which rule set the rule belongs to: `Data` for R_d, `Structure` for R_s.
    pub fn origin(&self) -> Sort {
        self.origin
    }

    pub fn source_index(&self) -> usize {
        self.source_index
    }

    pub fn is_data_rule(&self) -> bool {
        self.origin == Sort::Data
    }

    pub fn is_left_linear(&self) -> bool {
        self.lhs.is_linear()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RewriteError {
    #[error("position {0} does not exist in the term")]
    InvalidPosition(Position),
    #[error("rule does not match at position {0}")]
    NoMatch(Position),
}

/// `t[rσ]_p` where `t|_p = ℓσ`.
pub fn rewrite_at(t: &Term, p: &Position, rule: &Rule) -> Result<Term, RewriteError> {
    let sub = t
        .subterm(p)
        .ok_or_else(|| RewriteError::InvalidPosition(p.clone()))?;
    let sigma = match_term(rule.lhs(), sub).ok_or_else(|| RewriteError::NoMatch(p.clone()))?;
    Ok(t.replace(p, sigma.apply(rule.rhs()))
        .expect("position checked above"))
}

/// A redex: position plus the index of the matching rule.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Redex {
    pub position: Position,
    pub rule: usize,
}

/// All redexes of `t` in position order, ties broken by rule order.
/// With `outermost_only`, positions strictly below another redex are dropped.
pub fn find_redexes(rules: &[Rule], t: &Term, outermost_only: bool) -> Vec<Redex> {
    collect_redexes(t, outermost_only, &mut |sub, out: &mut Vec<usize>| {
        out.extend(
            rules
                .iter()
                .enumerate()
                .filter(|(_, r)| matches(r.lhs(), sub))
                .map(|(i, _)| i),
        )
    })
}

/// Redex enumeration parameterised by a per-subterm rule lookup.
pub(crate) fn collect_redexes(
    t: &Term,
    outermost_only: bool,
    rules_at: &mut dyn FnMut(&Term, &mut Vec<usize>),
) -> Vec<Redex> {
    fn go(
        t: &Term,
        path: &mut Vec<usize>,
        outermost_only: bool,
        rules_at: &mut dyn FnMut(&Term, &mut Vec<usize>),
        buf: &mut Vec<usize>,
        out: &mut Vec<Redex>,
    ) {
        buf.clear();
        if !t.is_var() {
            rules_at(t, buf);
        }
        let is_redex = !buf.is_empty();
        if is_redex {
            let position = Position::from_indices(path.clone());
            out.extend(buf.iter().map(|&rule| Redex {
                position: position.clone(),
                rule,
            }));
            if outermost_only {
                return;
            }
        }
        for (i, a) in t.args().iter().enumerate() {
            path.push(i + 1);
            go(a, path, outermost_only, rules_at, buf, out);
            path.pop();
        }
    }
    let mut out = Vec::new();
    go(
        t,
        &mut Vec::new(),
        outermost_only,
        rules_at,
        &mut Vec::new(),
        &mut out,
    );
    out
}
