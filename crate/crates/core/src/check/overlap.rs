use std::collections::HashMap;

use serde::Serialize;

use crate::position::Position;
use crate::rewrite::Rule;
use crate::term::{Term, Var};

/// Rule `inner`'s left-hand side unifies with the subterm of rule `outer`'s
/// left-hand side at the non-variable position `position`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Overlap {
    pub outer: usize,
    pub inner: usize,
    pub position: Position,
}

type Bindings = HashMap<Var, Term>;

fn walk<'a>(t: &'a Term, s: &'a Bindings) -> &'a Term {
    let mut t = t;
    while let Term::Var(v) = t {
        match s.get(v) {
            Some(b) => t = b,
            None => break,
        }
    }
    t
}

fn occurs(v: &Var, t: &Term, s: &Bindings) -> bool {
    match walk(t, s) {
        Term::Var(w) => w == v,
        Term::App(_, args) => args.iter().any(|a| occurs(v, a, s)),
    }
}

fn unify_into(a: &Term, b: &Term, s: &mut Bindings) -> bool {
    let (a, b) = (walk(a, s).clone(), walk(b, s).clone());
    match (&a, &b) {
        (Term::Var(v), Term::Var(w)) if v == w => true,
        (Term::Var(v), t) | (t, Term::Var(v)) => {
            if occurs(v, t, s) {
                return false;
            }
            s.insert(v.clone(), t.clone());
            true
        }
        (Term::App(f, xs), Term::App(g, ys)) => {
            f == g
                && xs.len() == ys.len()
                && xs.iter().zip(ys.iter()).all(|(x, y)| unify_into(x, y, s))
        }
    }
}

/// Syntactic unifiability with occurs check.
pub fn unifiable(a: &Term, b: &Term) -> bool {
    unify_into(a, b, &mut HashMap::new())
}

fn rename(t: &Term, suffix: &str) -> Term {
    match t {
        Term::Var(v) => Term::var(format!("{}{suffix}", v.name()), v.sort()),
        Term::App(f, args) => Term::app(*f, args.iter().map(|a| rename(a, suffix)).collect()),
    }
}

/// All overlaps between left-hand sides, with rules renamed apart.
///
/// Root overlaps are symmetric and reported once, with `outer < inner`; a
/// rule's root overlap with itself is trivial and omitted.
pub fn detect_overlaps(rules: &[Rule]) -> Vec<Overlap> {
    let mut out = Vec::new();
    for (i, outer) in rules.iter().enumerate() {
        let mut sites = Vec::new();
        outer.lhs().visit(&mut |p, t| {
            if !t.is_var() {
                sites.push((p.clone(), t.clone()));
            }
        });
        for (j, inner) in rules.iter().enumerate() {
            let renamed = rename(inner.lhs(), "#2");
            for (p, sub) in &sites {
                if p.is_root() && j <= i {
                    continue;
                }
                if unifiable(sub, &renamed) {
                    out.push(Overlap {
                        outer: i,
                        inner: j,
                        position: p.clone(),
                    });
                }
            }
        }
    }
    out.sort_by(|a, b| (a.outer, &a.position, a.inner).cmp(&(b.outer, &b.position, b.inner)));
    out
}
