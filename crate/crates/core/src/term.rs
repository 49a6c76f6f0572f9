//! First-order terms over a two-sorted signature.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::position::Position;
use crate::signature::{Signature, Sort, SymbolId};

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Var {
    name: Arc<str>,
    sort: Sort,
}

impl Var {
    pub fn new(name: impl AsRef<str>, sort: Sort) -> Self {
        Var {
            name: Arc::from(name.as_ref()),
            sort,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn sort(&self) -> Sort {
        self.sort
    }
}

/// An immutable term. Argument lists are shared, so cloning is cheap and
/// rewriting below a position only rebuilds the path to it.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Var),
    App(SymbolId, Arc<[Term]>),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TermError {
    #[error(
        "symbol `{symbol}` expects {expected} arguments, found {found} at position {position}"
    )]
    Arity {
        symbol: String,
        expected: usize,
        found: usize,
        position: Position,
    },
    #[error("expected a {expected} term at position {position}, found a {found} term")]
    Sort {
        expected: Sort,
        found: Sort,
        position: Position,
    },
    #[error("unknown symbol id {id} at position {position}")]
    UnknownSymbol { id: u32, position: Position },
}

impl TermError {
    pub fn position(&self) -> &Position {
        match self {
            TermError::Arity { position, .. }
            | TermError::Sort { position, .. }
            | TermError::UnknownSymbol { position, .. } => position,
        }
    }
}

impl Term {
    pub fn var(name: impl AsRef<str>, sort: Sort) -> Term {
        Term::Var(Var::new(name, sort))
    }

    pub fn app(symbol: SymbolId, args: Vec<Term>) -> Term {
        Term::App(symbol, Arc::from(args))
    }

    pub fn constant(symbol: SymbolId) -> Term {
        Term::App(symbol, Arc::from(Vec::new()))
    }

    pub fn root(&self) -> Option<SymbolId> {
        match self {
            Term::Var(_) => None,
            Term::App(f, _) => Some(*f),
        }
    }

    pub fn args(&self) -> &[Term] {
        match self {
            Term::Var(_) => &[],
            Term::App(_, args) => args,
        }
    }

    pub fn as_var(&self) -> Option<&Var> {
        match self {
            Term::Var(v) => Some(v),
            Term::App(..) => None,
        }
    }

    pub fn is_var(&self) -> bool {
        matches!(self, Term::Var(_))
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(_, args) => args.iter().all(Term::is_ground),
        }
    }

    /// Height of the term; constants and variables have depth 1.
    pub fn depth(&self) -> usize {
        1 + self.args().iter().map(Term::depth).max().unwrap_or(0)
    }

    pub fn size(&self) -> usize {
        1 + self.args().iter().map(Term::size).sum::<usize>()
    }

    pub fn subterm(&self, p: &Position) -> Option<&Term> {
        let mut t = self;
        for &i in p.indices() {
            t = t.args().get(i.checked_sub(1)?)?;
        }
        Some(t)
    }

    /// `self[replacement]_p`, or `None` if `p` is not a position of `self`.
    pub fn replace(&self, p: &Position, replacement: Term) -> Option<Term> {
        fn go(t: &Term, path: &[usize], replacement: Term) -> Option<Term> {
            let Some((&i, rest)) = path.split_first() else {
                return Some(replacement);
            };
            let Term::App(f, args) = t else { return None };
            let child = args.get(i.checked_sub(1)?)?;
            let new_child = go(child, rest, replacement)?;
            let mut new_args = args.to_vec();
            new_args[i - 1] = new_child;
            Some(Term::app(*f, new_args))
        }
        go(self, p.indices(), replacement)
    }

    /// All positions in pre-order (lexicographic order).
    pub fn positions(&self) -> Vec<Position> {
        let mut out = Vec::new();
        self.visit(&mut |p, _| out.push(p.clone()));
        out
    }

    /// Visits every subterm together with its position, in pre-order.
    pub fn visit<'a>(&'a self, f: &mut dyn FnMut(&Position, &'a Term)) {
        fn go<'a>(t: &'a Term, p: &mut Vec<usize>, f: &mut dyn FnMut(&Position, &'a Term)) {
            f(&Position::from_indices(p.clone()), t);
            for (i, a) in t.args().iter().enumerate() {
                p.push(i + 1);
                go(a, p, f);
                p.pop();
            }
        }
        go(self, &mut Vec::new(), f);
    }

    /// Variables in first-occurrence (pre-order) order, without repeats.
    pub fn vars(&self) -> Vec<Var> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        self.visit(&mut |_, t| {
            if let Term::Var(v) = t {
                if seen.insert(v.clone()) {
                    out.push(v.clone());
                }
            }
        });
        out
    }

    /// Positions of every variable occurrence, in pre-order.
    pub fn var_positions(&self) -> Vec<(Position, Var)> {
        let mut out = Vec::new();
        self.visit(&mut |p, t| {
            if let Term::Var(v) = t {
                out.push((p.clone(), v.clone()));
            }
        });
        out
    }

    /// No variable occurs twice.
    pub fn is_linear(&self) -> bool {
        self.first_repeated_var().is_none()
    }

    /// Position of the second occurrence of the first repeated variable.
    pub fn first_repeated_var(&self) -> Option<(Position, Var)> {
        let mut seen = BTreeSet::new();
        self.var_positions()
            .into_iter()
            .find(|(_, v)| !seen.insert(v.clone()))
    }

    pub fn contains_symbol(&self, f: SymbolId) -> bool {
        match self {
            Term::Var(_) => false,
            Term::App(g, args) => *g == f || args.iter().any(|a| a.contains_symbol(f)),
        }
    }

    pub fn display<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            infix: sig.infix_constructor(),
            compact: false,
        }
    }

    /// Prefix notation with no spaces, e.g. `f(cons(x,xs))`.
    pub fn display_compact<'a>(&'a self, sig: &'a Signature) -> TermDisplay<'a> {
        TermDisplay {
            term: self,
            sig,
            infix: None,
            compact: true,
        }
    }
}

impl Signature {
    /// Sort of a term, checking arity and argument sorts everywhere.
    pub fn sort_of(&self, t: &Term) -> Result<Sort, TermError> {
        fn go(sig: &Signature, t: &Term, p: &mut Vec<usize>) -> Result<Sort, TermError> {
            match t {
                Term::Var(v) => Ok(v.sort()),
                Term::App(f, args) => {
                    let here = || Position::from_indices(p.clone());
                    if f.index() >= sig.len() {
                        return Err(TermError::UnknownSymbol {
                            id: f.0,
                            position: here(),
                        });
                    }
                    let sym = sig.get(*f);
                    if sym.arity() != args.len() {
                        return Err(TermError::Arity {
                            symbol: sym.name().to_string(),
                            expected: sym.arity(),
                            found: args.len(),
                            position: here(),
                        });
                    }
                    for (i, (a, expected)) in args.iter().zip(sym.arg_sorts()).enumerate() {
                        p.push(i + 1);
                        let found = go(sig, a, p)?;
                        if found != *expected {
                            return Err(TermError::Sort {
                                expected: *expected,
                                found,
                                position: Position::from_indices(p.clone()),
                            });
                        }
                        p.pop();
                    }
                    Ok(sym.result_sort())
                }
            }
        }
        go(self, t, &mut Vec::new())
    }

    /// Sort of every position of a well-sorted term.
    pub fn sort_at(&self, t: &Term, p: &Position) -> Option<Sort> {
        match t.subterm(p)? {
            Term::Var(v) => Some(v.sort()),
            Term::App(f, _) => Some(self.get(*f).result_sort()),
        }
    }
}

pub struct TermDisplay<'a> {
    term: &'a Term,
    sig: &'a Signature,
    infix: Option<SymbolId>,
    compact: bool,
}

impl TermDisplay<'_> {
    fn with<'b>(&'b self, term: &'b Term) -> TermDisplay<'b> {
        TermDisplay {
            term,
            sig: self.sig,
            infix: self.infix,
            compact: self.compact,
        }
    }
}

impl fmt::Display for TermDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.term {
            Term::Var(v) => f.write_str(v.name()),
            Term::App(g, args) => {
                if Some(*g) == self.infix && args.len() == 2 {
                    // data heads never contain the infix constructor, so no parentheses
                    return write!(f, "{} : {}", self.with(&args[0]), self.with(&args[1]));
                }
                f.write_str(self.sig.name(*g))?;
                if args.is_empty() {
                    return Ok(());
                }
                f.write_str("(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(if self.compact { "," } else { ", " })?;
                    }
                    write!(f, "{}", self.with(a))?;
                }
                f.write_str(")")
            }
        }
    }
}
