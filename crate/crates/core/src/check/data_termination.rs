use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use crate::signature::{Signature, SymbolId};
use crate::spec::{Specification, Step};
use crate::term::Term;

pub const DEFAULT_DEPTH_BOUND: usize = 4;
pub const DEFAULT_STEP_BOUND: usize = 500;
const MAX_START_TERMS: usize = 5000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataTermination {
    Assumed,
    BoundedOk,
    LoopFound { prefix: Vec<Step>, cycle: Vec<Step> },
}

/// Ground terms over the data symbols with height at most `max_depth`,
/// ordered by height and then by symbol and argument order.
pub fn ground_data_terms(sig: &Signature, max_depth: usize, cap: usize) -> Vec<Term> {
    let symbols: Vec<SymbolId> = sig.data_symbols();
    let mut all: Vec<Term> = Vec::new();
    let mut seen: HashSet<Term> = HashSet::default();
    for _ in 0..max_depth {
        let prev = all.clone();
        for &g in &symbols {
            let arity = sig.get(g).arity();
            for args in product(&prev, arity, cap) {
                let t = Term::app(g, args);
                if seen.insert(t.clone()) {
                    all.push(t);
                    if all.len() >= cap {
                        return all;
                    }
                }
            }
        }
    }
    all
}

/// Tuples of length `k` over `items` in lexicographic order, at most `cap`.
pub(crate) fn product(items: &[Term], k: usize, cap: usize) -> Vec<Vec<Term>> {
    let mut out: Vec<Vec<Term>> = vec![Vec::new()];
    for _ in 0..k {
        let mut next = Vec::new();
        'outer: for prefix in &out {
            for it in items {
                let mut v = prefix.clone();
                v.push(it.clone());
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

struct Probe<'a> {
    spec: &'a Specification,
    budget: usize,
    path: Vec<Step>,
    on_path: HashMap<Term, usize>,
    done: HashSet<Term>,
}

impl Probe<'_> {
    fn dfs(&mut self, t: &Term) -> Option<(Vec<Step>, Vec<Step>)> {
        if self.done.contains(t) || self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        self.on_path.insert(t.clone(), self.path.len());
        for r in self.spec.redexes(t, false) {
            let step = self
                .spec
                .step(t, &r.position, r.rule)
                .expect("redex matches");
            let to = step.to.clone();
            self.path.push(step);
            if let Some(&at) = self.on_path.get(&to) {
                let cycle = self.path[at..].to_vec();
                let prefix = self.path[..at].to_vec();
                return Some((prefix, cycle));
            }
            if let Some(found) = self.dfs(&to) {
                return Some(found);
            }
            self.path.pop();
        }
        self.on_path.remove(t);
        if self.budget > 0 {
            self.done.insert(t.clone());
        }
        None
    }
}

/// Rewrites every ground data term up to `depth_bound` along all derivations,
/// spending at most `step_bound` expansions per start term, and reports the
/// first derivation that revisits a term.
pub fn bounded_data_termination_check(
    spec: &Specification,
    depth_bound: usize,
    step_bound: usize,
    assume: bool,
) -> DataTermination {
    if assume {
        return DataTermination::Assumed;
    }
    if spec.data_rules().next().is_none() {
        return DataTermination::BoundedOk;
    }
    let mut done = HashSet::default();
    for start in ground_data_terms(spec.signature(), depth_bound, MAX_START_TERMS) {
        let mut probe = Probe {
            spec,
            budget: step_bound,
            path: Vec::new(),
            on_path: HashMap::default(),
            done: std::mem::take(&mut done),
        };
        if let Some((prefix, cycle)) = probe.dfs(&start) {
            return DataTermination::LoopFound { prefix, cycle };
        }
        done = probe.done;
    }
    DataTermination::BoundedOk
}
