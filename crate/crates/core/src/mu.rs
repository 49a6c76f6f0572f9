//! The canonical replacement map of a specification and the positions it
//! allows.

use thiserror::Error;

use crate::position::Position;
use crate::signature::{Signature, Sort, SymbolId, SymbolRole};
use crate::spec::Specification;
use crate::term::Term;

/// Allowed argument indices (1-based, ascending) for every symbol.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ReplacementMap {
    allowed: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct MuOptions {
    /// Also block variable-only arguments of data symbols. Requires
    /// left-linear data rules.
    pub block_data_args: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MuError {
    #[error("blocking data arguments needs left-linear data rules; rule {0} is not left-linear")]
    DataRulesNotLeftLinear(usize),
}

/// Indices `i` such that every lhs subterm rooted by `f` has a variable as
/// its `i`-th argument.
fn variable_only_args(f: SymbolId, arity: usize, lhss: &[&Term]) -> Vec<bool> {
    let mut var_only = vec![true; arity];
    for l in lhss {
        l.visit(&mut |_, t| {
            if t.root() == Some(f) {
                for (i, a) in t.args().iter().enumerate() {
                    if !a.is_var() {
                        var_only[i] = false;
                    }
                }
            }
        });
    }
    var_only
}

pub fn compute_mu(spec: &Specification) -> ReplacementMap {
    compute_mu_with(spec, MuOptions::default()).expect("default options cannot fail")
}

pub fn compute_mu_with(spec: &Specification, opts: MuOptions) -> Result<ReplacementMap, MuError> {
    if opts.block_data_args {
        if let Some((i, _)) = spec.data_rules().find(|(_, r)| !r.is_left_linear()) {
            return Err(MuError::DataRulesNotLeftLinear(i));
        }
    }
    let sig = spec.signature();
    let struct_lhss: Vec<&Term> = spec.struct_rules().map(|(_, r)| r.lhs()).collect();
    let all_lhss: Vec<&Term> = spec.rules().iter().map(|r| r.lhs()).collect();
    let allowed = sig
        .iter()
        .map(|(f, sym)| {
            let data_indices = || {
                sym.arg_sorts()
                    .iter()
                    .enumerate()
                    .filter(|(_, s)| **s == Sort::Data)
                    .map(|(i, _)| i + 1)
                    .collect()
            };
            match sym.role() {
                SymbolRole::Constructor => data_indices(),
                SymbolRole::Data if !opts.block_data_args => data_indices(),
                SymbolRole::Data => keep_non_variable(f, sym.arity(), &all_lhss),
                SymbolRole::Defined => keep_non_variable(f, sym.arity(), &struct_lhss),
            }
        })
        .collect();
    Ok(ReplacementMap { allowed })
}

fn keep_non_variable(f: SymbolId, arity: usize, lhss: &[&Term]) -> Vec<usize> {
    variable_only_args(f, arity, lhss)
        .into_iter()
        .enumerate()
        .filter(|(_, var_only)| !var_only)
        .map(|(i, _)| i + 1)
        .collect()
}

impl ReplacementMap {
    /// Every argument of every symbol allowed.
    pub fn full(sig: &Signature) -> Self {
        ReplacementMap {
            allowed: sig.iter().map(|(_, s)| (1..=s.arity()).collect()).collect(),
        }
    }

    pub fn get(&self, f: SymbolId) -> &[usize] {
        &self.allowed[f.index()]
    }

    pub fn allows(&self, f: SymbolId, i: usize) -> bool {
        self.allowed[f.index()].binary_search(&i).is_ok()
    }

    /// Replaces `μ(f)`; used to compare against other maps.
    pub fn set(&mut self, f: SymbolId, mut indices: Vec<usize>) {
        indices.sort_unstable();
        indices.dedup();
        self.allowed[f.index()] = indices;
    }

    /// Entries in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &[usize])> + '_ {
        self.allowed
            .iter()
            .enumerate()
            .map(|(i, v)| (SymbolId(i as u32), v.as_slice()))
    }

    /// `Pos_μ(t)` in pre-order. A variable has only `ε`.
    pub fn allowed_positions(&self, t: &Term) -> Vec<Position> {
        let mut out = Vec::new();
        self.walk_allowed(t, &mut Vec::new(), &mut |p, _| out.push(p));
        out
    }

    /// Visits every allowed position with its subterm, in pre-order.
    pub fn walk_allowed<'t>(
        &self,
        t: &'t Term,
        path: &mut Vec<usize>,
        f: &mut dyn FnMut(Position, &'t Term),
    ) {
        f(Position::from_indices(path.clone()), t);
        if let Term::App(g, args) = t {
            for &i in self.get(*g) {
                path.push(i);
                self.walk_allowed(&args[i - 1], path, f);
                path.pop();
            }
        }
    }

    pub fn is_allowed(&self, t: &Term, p: &Position) -> bool {
        let mut cur = t;
        for &i in p.indices() {
            let Term::App(g, args) = cur else {
                return false;
            };
            if !self.allows(*g, i) {
                return false;
            }
            match args.get(i - 1) {
                Some(a) => cur = a,
                None => return false,
            }
        }
        true
    }

    /// `Pos(t) \ Pos_μ(t)` in pre-order.
    pub fn blocked_positions(&self, t: &Term) -> Vec<Position> {
        t.positions()
            .into_iter()
            .filter(|p| !self.is_allowed(t, p))
            .collect()
    }

    /// `f: {i, j}` lines in declaration order.
    pub fn render(&self, sig: &Signature) -> String {
        let mut out = String::new();
        for (f, idx) in self.iter() {
            let set: Vec<String> = idx.iter().map(|i| i.to_string()).collect();
            let body = if set.is_empty() {
                "∅".to_string()
            } else {
                format!("{{{}}}", set.join(", "))
            };
            out.push_str(&format!("mu({}) = {body}\n", sig.name(f)));
        }
        out
    }
}
