//! Context-sensitive rewriting and search for infinite μ-derivations.

use std::collections::VecDeque;

use serde::Serialize;
use thiserror::Error;

use crate::mu::ReplacementMap;
use crate::position::Position;
use crate::rewrite::{matches, Redex, RewriteError};
use crate::signature::{Sort, SymbolId};
use crate::spec::{Specification, Step};
use crate::term::Term;

pub const DEFAULT_STEP_BOUND: usize = 2000;
pub const DEFAULT_DEPTH_BOUND: usize = 12;
const MAX_STARTS_PER_SYMBOL: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CsError {
    #[error("position {0} is blocked by the replacement map")]
    BlockedPosition(Position),
    #[error(transparent)]
    Rewrite(#[from] RewriteError),
}

/// Redexes at μ-allowed positions, in position order then rule order.
pub fn mu_redexes(spec: &Specification, mu: &ReplacementMap, t: &Term) -> Vec<Redex> {
    let mut out = Vec::new();
    mu.walk_allowed(t, &mut Vec::new(), &mut |p, sub| {
        if let Some(f) = sub.root() {
            for &rule in spec.rules_for(f) {
                if matches(spec.rule(rule).lhs(), sub) {
                    out.push(Redex {
                        position: p.clone(),
                        rule,
                    });
                }
            }
        }
    });
    out
}

pub fn mu_rewrite_step(
    spec: &Specification,
    mu: &ReplacementMap,
    t: &Term,
    p: &Position,
    rule: usize,
) -> Result<Step, CsError> {
    if t.subterm(p).is_some() && !mu.is_allowed(t, p) {
        return Err(CsError::BlockedPosition(p.clone()));
    }
    Ok(spec.step(t, p, rule)?)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum LoopKind {
    /// The cycle returns to its entry term.
    ExactCycle,
    /// The cycle's last term contains its entry term at `position`.
    SelfEmbedding { position: Position },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsLoopWitness {
    pub start: Term,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    pub kind: LoopKind,
}

impl CsLoopWitness {
    pub fn entry(&self) -> &Term {
        &self.cycle[0].from
    }

    /// `times` further traversals of the loop after the recorded cycle. For
    /// a self-embedding at `p`, the k-th traversal runs below `p^k`.
    pub fn pump(&self, spec: &Specification, times: usize) -> Result<Vec<Step>, RewriteError> {
        let mut steps = Vec::new();
        let mut current = self.cycle.last().expect("cycle is non-empty").to.clone();
        let mut offset = Position::root();
        for _ in 0..times {
            if let LoopKind::SelfEmbedding { position } = &self.kind {
                offset = offset.concat(position);
            }
            for s in &self.cycle {
                let p = offset.concat(&s.position);
                let step = spec.step(&current, &p, s.rule)?;
                current = step.to.clone();
                steps.push(step);
            }
        }
        Ok(steps)
    }
}

/// Ground structure arguments used to instantiate start terms: the nullary
/// structure symbols, then each constructor applied to those and to the
/// nullary data constructors.
fn structure_candidates(spec: &Specification, data_constants: &[Term]) -> Vec<Term> {
    let sig = spec.signature();
    let nullary: Vec<Term> = sig
        .iter()
        .filter(|(_, s)| s.result_sort() == Sort::Structure && s.arity() == 0)
        .map(|(id, _)| Term::constant(id))
        .collect();
    let mut out = nullary.clone();
    for c in sig.constructors() {
        let sym = sig.get(c);
        if sym.arity() == 0 {
            continue;
        }
        let pools: Vec<&[Term]> = sym
            .arg_sorts()
            .iter()
            .map(|s| {
                if *s == Sort::Data {
                    data_constants
                } else {
                    nullary.as_slice()
                }
            })
            .collect();
        out.extend(
            tuples(&pools, MAX_STARTS_PER_SYMBOL)
                .into_iter()
                .map(|args| Term::app(c, args)),
        );
    }
    out
}

fn tuples(pools: &[&[Term]], cap: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for pool in pools {
        let mut next = Vec::new();
        'outer: for prefix in &out {
            for t in pool.iter() {
                let mut v = prefix.clone();
                v.push(t.clone());
                next.push(v);
                if next.len() >= cap {
                    break 'outer;
                }
            }
        }
        out = next;
    }
    out
}

/// Ground instances of every defined structure symbol, in declaration order.
pub fn start_terms(spec: &Specification, data_constructors: &[SymbolId]) -> Vec<Term> {
    let sig = spec.signature();
    let data_constants: Vec<Term> = data_constructors
        .iter()
        .filter(|c| sig.get(**c).arity() == 0)
        .map(|c| Term::constant(*c))
        .collect();
    let structs = structure_candidates(spec, &data_constants);
    let mut out = Vec::new();
    for f in sig.defined() {
        let sym = sig.get(f);
        let pools: Vec<&[Term]> = sym
            .arg_sorts()
            .iter()
            .map(|s| {
                if *s == Sort::Data {
                    data_constants.as_slice()
                } else {
                    structs.as_slice()
                }
            })
            .collect();
        out.extend(
            tuples(&pools, MAX_STARTS_PER_SYMBOL)
                .into_iter()
                .map(|args| Term::app(f, args)),
        );
    }
    out
}

struct Node {
    term: Term,
    parent: Option<usize>,
    step: Option<Step>,
}

fn path_steps(nodes: &[Node], mut i: usize) -> Vec<Step> {
    let mut steps = Vec::new();
    while let Some(s) = &nodes[i].step {
        steps.push(s.clone());
        i = nodes[i].parent.expect("non-root node has a parent");
    }
    steps.reverse();
    steps
}

/// Breadth-first search for a looping μ-derivation from each start term in
/// turn. Each search expands at most `step_bound` terms and does not expand
/// terms higher than `depth_bound`.
pub fn find_cs_loop(
    spec: &Specification,
    mu: &ReplacementMap,
    starts: &[Term],
    step_bound: usize,
    depth_bound: usize,
) -> Option<CsLoopWitness> {
    for start in starts {
        if let Some(w) = search_from(spec, mu, start, step_bound, depth_bound) {
            return Some(w);
        }
    }
    None
}

fn search_from(
    spec: &Specification,
    mu: &ReplacementMap,
    start: &Term,
    step_bound: usize,
    depth_bound: usize,
) -> Option<CsLoopWitness> {
    let mut nodes = vec![Node {
        term: start.clone(),
        parent: None,
        step: None,
    }];
    let mut queue = VecDeque::from([0usize]);
    let mut expanded = 0;
    while let Some(n) = queue.pop_front() {
        if expanded >= step_bound {
            break;
        }
        expanded += 1;
        let term = nodes[n].term.clone();
        if term.depth() > depth_bound {
            continue;
        }
        for r in mu_redexes(spec, mu, &term) {
            let step = spec
                .step(&term, &r.position, r.rule)
                .expect("redex matches");
            let succ = step.to.clone();
            let witness = |anc: usize, kind: LoopKind, nodes: &[Node]| {
                let mut cycle = path_steps(nodes, n);
                let prefix = path_steps(nodes, anc);
                cycle.drain(..prefix.len());
                cycle.push(step.clone());
                CsLoopWitness {
                    start: start.clone(),
                    prefix,
                    cycle,
                    kind,
                }
            };
            // ancestors from the nearest outwards
            let mut anc = Some(n);
            while let Some(a) = anc {
                if nodes[a].term == succ {
                    return Some(witness(a, LoopKind::ExactCycle, &nodes));
                }
                anc = nodes[a].parent;
            }
            let mut anc = Some(n);
            while let Some(a) = anc {
                let target = &nodes[a].term;
                let mut found = None;
                mu.walk_allowed(&succ, &mut Vec::new(), &mut |p, sub| {
                    if found.is_none() && !p.is_root() && matches(target, sub) {
                        found = Some(p);
                    }
                });
                if let Some(position) = found {
                    return Some(witness(a, LoopKind::SelfEmbedding { position }, &nodes));
                }
                anc = nodes[a].parent;
            }
            nodes.push(Node {
                term: succ,
                parent: Some(n),
                step: Some(step),
            });
            queue.push_back(nodes.len() - 1);
        }
    }
    None
}
