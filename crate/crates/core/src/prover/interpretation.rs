//! Linear μ-monotone interpretations over the naturals.

use std::collections::BTreeMap;
use std::fmt;

use serde::Serialize;

use crate::mu::ReplacementMap;
use crate::signature::{Signature, SymbolId};
use crate::spec::Specification;
use crate::term::Term;

pub const DEFAULT_MAX_COEFF: u32 = 2;
pub const DEFAULT_MAX_CONST: u32 = 3;

/// `constant + Σ coeffs[i]·x_{i+1}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LinearFn {
    pub constant: u32,
    pub coeffs: Vec<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Interpretation {
    /// One entry per symbol, in declaration order.
    pub functions: Vec<LinearFn>,
    pub max_coeff: u32,
    pub max_const: u32,
}

/// A linear polynomial over rule variables with integer coefficients.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Poly {
    pub constant: i64,
    pub vars: BTreeMap<String, i64>,
}

impl Poly {
    fn scaled_add(&mut self, other: &Poly, k: i64) {
        self.constant += k * other.constant;
        for (v, c) in &other.vars {
            *self.vars.entry(v.clone()).or_insert(0) += k * c;
        }
    }

    pub fn minus(&self, other: &Poly) -> Poly {
        let mut out = self.clone();
        out.scaled_add(other, -1);
        out.vars.retain(|_, c| *c != 0);
        out
    }

    /// `p > 0` for all natural assignments, judged by absolute positiveness.
    pub fn is_strictly_positive(&self) -> bool {
        self.constant >= 1 && self.vars.values().all(|c| *c >= 0)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        for (v, c) in &self.vars {
            parts.push(if *c == 1 {
                v.clone()
            } else {
                format!("{c}·{v}")
            });
        }
        if self.constant != 0 || parts.is_empty() {
            parts.push(self.constant.to_string());
        }
        write!(f, "{}", parts.join(" + ").replace("+ -", "- "))
    }
}

impl Interpretation {
    pub fn get(&self, f: SymbolId) -> &LinearFn {
        &self.functions[f.index()]
    }

    pub fn eval(&self, t: &Term) -> Poly {
        eval_with(t, &|f| Some(&self.functions[f.index()])).expect("every symbol is interpreted")
    }

    /// `[f](x1, …) = …` lines in declaration order.
    pub fn render(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for (f, sym) in sig.iter() {
            let lf = self.get(f);
            let params: Vec<String> = (1..=sym.arity()).map(|i| format!("x{i}")).collect();
            let mut p = Poly {
                constant: lf.constant as i64,
                vars: BTreeMap::new(),
            };
            for (i, c) in lf.coeffs.iter().enumerate() {
                if *c != 0 {
                    p.vars.insert(params[i].clone(), *c as i64);
                }
            }
            let head = if params.is_empty() {
                format!("[{}]", sym.name())
            } else {
                format!("[{}]({})", sym.name(), params.join(", "))
            };
            out.push_str(&format!("{head} = {p}\n"));
        }
        out
    }
}

fn eval_with<'a>(t: &Term, interp: &dyn Fn(SymbolId) -> Option<&'a LinearFn>) -> Option<Poly> {
    match t {
        Term::Var(v) => Some(Poly {
            constant: 0,
            vars: BTreeMap::from([(v.name().to_string(), 1)]),
        }),
        Term::App(f, args) => {
            let lf = interp(*f)?;
            let mut p = Poly {
                constant: lf.constant as i64,
                vars: BTreeMap::new(),
            };
            for (a, c) in args.iter().zip(&lf.coeffs) {
                if *c != 0 {
                    p.scaled_add(&eval_with(a, interp)?, *c as i64);
                }
            }
            Some(p)
        }
    }
}

/// `[ℓ] − [r]` for one rule.
pub fn rule_difference(spec: &Specification, interp: &Interpretation, rule: usize) -> Poly {
    let r = spec.rule(rule);
    interp.eval(r.lhs()).minus(&interp.eval(r.rhs()))
}

/// Candidate functions for one symbol, ordered by constant then by
/// coefficients lexicographically.
fn domain(arity: usize, allowed: &[usize], max_coeff: u32, max_const: u32) -> Vec<LinearFn> {
    let mut coeff_vectors: Vec<Vec<u32>> = vec![Vec::new()];
    for i in 1..=arity {
        let lo = if allowed.contains(&i) { 1 } else { 0 };
        coeff_vectors = coeff_vectors
            .into_iter()
            .flat_map(|prefix| {
                (lo..=max_coeff).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    (0..=max_const)
        .flat_map(|constant| {
            coeff_vectors.iter().map(move |coeffs| LinearFn {
                constant,
                coeffs: coeffs.clone(),
            })
        })
        .collect()
}

struct Constraint {
    rule: usize,
    /// Symbols of the rule other than the one it is checked at.
    others: Vec<usize>,
}

/// Least interpretation in search order that makes every rule strictly
/// decreasing, or `None` when the ranges contain none.
///
/// Symbols are assigned in declaration order and each rule is checked once
/// all its symbols are assigned. Dead ends jump back to the latest symbol
/// that took part in a failed check, which skips only assignments that
/// cannot lead to a solution, so the result equals that of plain
/// backtracking.
pub fn search_interpretation(
    spec: &Specification,
    mu: &ReplacementMap,
    max_coeff: u32,
    max_const: u32,
) -> Option<Interpretation> {
    let sig = spec.signature();
    let n = sig.len();
    let domains: Vec<Vec<LinearFn>> = sig
        .iter()
        .map(|(f, s)| domain(s.arity(), mu.get(f), max_coeff, max_const))
        .collect();

    let mut checks: Vec<Vec<Constraint>> = (0..n).map(|_| Vec::new()).collect();
    for (i, rule) in spec.rules().iter().enumerate() {
        let mut syms: Vec<usize> = Vec::new();
        for t in [rule.lhs(), rule.rhs()] {
            t.visit(&mut |_, s| {
                if let Some(f) = s.root() {
                    syms.push(f.index());
                }
            });
        }
        syms.sort_unstable();
        syms.dedup();
        let last = *syms.last().expect("a lhs is never a variable");
        syms.pop();
        checks[last].push(Constraint {
            rule: i,
            others: syms,
        });
    }

    if n == 0 {
        return Some(Interpretation {
            functions: Vec::new(),
            max_coeff,
            max_const,
        });
    }

    let mut value: Vec<usize> = vec![0; n];
    let mut conflicts: Vec<Vec<bool>> = vec![vec![false; n]; n];
    let mut assigned: Vec<Option<&LinearFn>> = vec![None; n];
    let mut var = 0usize;
    loop {
        // find a consistent value for `var`, starting at value[var]
        let mut found = false;
        while value[var] < domains[var].len() {
            assigned[var] = Some(&domains[var][value[var]]);
            let failing = checks[var]
                .iter()
                .filter(|c| !rule_holds(spec, c.rule, &assigned))
                .min_by_key(|c| (c.others.iter().max().copied(), c.rule));
            match failing {
                None => {
                    found = true;
                    break;
                }
                Some(c) => {
                    for &o in &c.others {
                        conflicts[var][o] = true;
                    }
                    value[var] += 1;
                }
            }
        }
        if found {
            if var + 1 == n {
                let functions = assigned
                    .iter()
                    .map(|f| f.expect("all assigned").clone())
                    .collect();
                return Some(Interpretation {
                    functions,
                    max_coeff,
                    max_const,
                });
            }
            var += 1;
            value[var] = 0;
            conflicts[var].iter_mut().for_each(|c| *c = false);
            continue;
        }
        assigned[var] = None;
        let h = (0..var).rev().find(|&h| conflicts[var][h])?;
        let carried: Vec<usize> = (0..h).filter(|&o| conflicts[var][o]).collect();
        for o in carried {
            conflicts[h][o] = true;
        }
        assigned[h + 1..=var].iter_mut().for_each(|a| *a = None);
        var = h;
        value[var] += 1;
    }
}

fn rule_holds(spec: &Specification, rule: usize, assigned: &[Option<&LinearFn>]) -> bool {
    let r = spec.rule(rule);
    let get = |f: SymbolId| assigned[f.index()];
    let l = eval_with(r.lhs(), &get).expect("constraint symbols are assigned");
    let rr = eval_with(r.rhs(), &get).expect("constraint symbols are assigned");
    l.minus(&rr).is_strictly_positive()
}
