//! Cyclic outermost-fair reductions that never produce a constructor.

use rustc_hash::{FxHashMap as HashMap, FxHashSet as HashSet};

use serde::Serialize;

use crate::position::Position;
use crate::spec::{Specification, Step};
use crate::term::Term;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StepPolicy {
    /// Only outermost redexes are contracted.
    #[default]
    OutermostOnly,
    /// Any redex may be contracted; fairness is still required of the cycle.
    AnyRedex,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Kill {
    /// A cycle step contracts a redex at the same position.
    Contracted,
    /// A cycle step contracts a redex strictly above it.
    Erased,
    /// A step below it leaves the rule no longer matching.
    NoLongerMatches,
}

/// How one outermost redex of a cycle term stops surviving.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairnessEntry {
    /// Index of the cycle term (`cycle[term].from`).
    pub term: usize,
    pub position: Position,
    pub rule: usize,
    /// Index of the cycle step that kills the redex.
    pub killed_by: usize,
    pub kill: Kill,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnproductiveLoopWitness {
    pub start: Term,
    pub prefix: Vec<Step>,
    pub cycle: Vec<Step>,
    pub policy: StepPolicy,
    pub fairness: Vec<FairnessEntry>,
}

impl UnproductiveLoopWitness {
    pub fn entry(&self) -> &Term {
        &self.cycle[0].from
    }
}

/// For every outermost redex of every term of `cycle`, the first step within
/// one traversal that kills it. `None` if some redex survives a whole
/// traversal.
pub fn fairness_evidence(spec: &Specification, cycle: &[Step]) -> Option<Vec<FairnessEntry>> {
    let n = cycle.len();
    let mut out = Vec::new();
    for (j, s) in cycle.iter().enumerate() {
        for r in spec.redexes(&s.from, true) {
            let killed = (0..n).find_map(|d| {
                let k = (j + d) % n;
                let step = &cycle[k];
                if step.position == r.position {
                    Some((k, Kill::Contracted))
                } else if step.position.is_strict_prefix_of(&r.position) {
                    Some((k, Kill::Erased))
                } else if r.position.is_strict_prefix_of(&step.position)
                    && !step
                        .to
                        .subterm(&r.position)
                        .is_some_and(|sub| spec.match_rule(r.rule, sub).is_some())
                {
                    Some((k, Kill::NoLongerMatches))
                } else {
                    None
                }
            });
            let (killed_by, kill) = killed?;
            out.push(FairnessEntry {
                term: j,
                position: r.position,
                rule: r.rule,
                killed_by,
                kill,
            });
        }
    }
    Some(out)
}

/// Checks every invariant of a witness against `spec`.
pub fn verify_witness(spec: &Specification, w: &UnproductiveLoopWitness) -> Result<(), String> {
    if w.cycle.is_empty() {
        return Err("empty cycle".into());
    }
    let mut current = &w.start;
    for (i, s) in w.prefix.iter().chain(&w.cycle).enumerate() {
        if &s.from != current {
            return Err(format!("step {i} does not continue from the previous term"));
        }
        if !s.replays(spec) {
            return Err(format!("step {i} does not replay"));
        }
        if spec.is_constructor_rooted(&s.from) || spec.is_constructor_rooted(&s.to) {
            return Err(format!("step {i} touches a constructor-rooted term"));
        }
        if w.policy == StepPolicy::OutermostOnly
            && !spec
                .redexes(&s.from, true)
                .iter()
                .any(|r| r.position == s.position)
        {
            return Err(format!("step {i} is not outermost"));
        }
        current = &s.to;
    }
    if current != w.entry() {
        return Err("cycle does not return to its entry".into());
    }
    match fairness_evidence(spec, &w.cycle) {
        Some(f) if f == w.fairness => Ok(()),
        Some(_) => Err("recorded fairness evidence differs".into()),
        None => Err("an outermost redex survives the cycle".into()),
    }
}

struct Search<'a> {
    spec: &'a Specification,
    policy: StepPolicy,
    depth_bound: usize,
    budget: usize,
    path: Vec<Step>,
    on_path: HashMap<Term, usize>,
    done: HashSet<Term>,
}

impl Search<'_> {
    fn dfs(&mut self, t: &Term) -> Option<(Vec<Step>, Vec<Step>, Vec<FairnessEntry>)> {
        if self.done.contains(t) || self.budget == 0 {
            return None;
        }
        self.budget -= 1;
        self.on_path.insert(t.clone(), self.path.len());
        if t.depth() <= self.depth_bound {
            for r in self
                .spec
                .redexes(t, self.policy == StepPolicy::OutermostOnly)
            {
                let step = self
                    .spec
                    .step(t, &r.position, r.rule)
                    .expect("redex matches");
                if self.spec.is_constructor_rooted(&step.to) {
                    continue;
                }
                let to = step.to.clone();
                self.path.push(step);
                if let Some(&at) = self.on_path.get(&to) {
                    let cycle = self.path[at..].to_vec();
                    if let Some(fairness) = fairness_evidence(self.spec, &cycle) {
                        return Some((self.path[..at].to_vec(), cycle, fairness));
                    }
                } else if let Some(found) = self.dfs(&to) {
                    return Some(found);
                }
                self.path.pop();
            }
        }
        self.on_path.remove(t);
        if self.budget > 0 {
            self.done.insert(t.clone());
        }
        None
    }
}

/// Depth-first search from each start term in turn for a cycle that avoids
/// constructor-rooted terms and carries fairness evidence. Each search
/// expands at most `step_bound` terms and no term higher than
/// `depth_bound`.
pub fn find_unproductive_loop(
    spec: &Specification,
    starts: &[Term],
    step_bound: usize,
    depth_bound: usize,
    policy: StepPolicy,
) -> Option<UnproductiveLoopWitness> {
    let mut done = HashSet::default();
    for start in starts {
        if spec.is_constructor_rooted(start) {
            continue;
        }
        let mut search = Search {
            spec,
            policy,
            depth_bound,
            budget: step_bound,
            path: Vec::new(),
            on_path: HashMap::default(),
            done: std::mem::take(&mut done),
        };
        if let Some((prefix, cycle, fairness)) = search.dfs(start) {
            return Some(UnproductiveLoopWitness {
                start: start.clone(),
                prefix,
                cycle,
                policy,
                fairness,
            });
        }
        done = search.done;
    }
    None
}
