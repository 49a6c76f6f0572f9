use crate::position::Position;
use crate::rewrite::{
    collect_redexes, match_term, matches, Redex, RewriteError, Rule, Substitution,
};
use crate::signature::{Signature, Sort, SymbolId};
use crate::term::Term;

/// A two-sorted rewrite system: signature plus data and structure rules.
///
/// Rules are kept in source order; a rule's index in [`Specification::rules`]
/// is the ordinal used by every redex, step and witness.
#[derive(Debug, Clone)]
pub struct Specification {
    signature: Signature,
    rules: Vec<Rule>,
    by_root: Vec<Vec<usize>>,
}

impl Specification {
    pub fn new(signature: Signature, rules: Vec<Rule>) -> Self {
        let mut by_root = vec![Vec::new(); signature.len()];
        for (i, r) in rules.iter().enumerate() {
            if let Some(f) = r.lhs().root() {
                if let Some(slot) = by_root.get_mut(f.index()) {
                    slot.push(i);
                }
            }
        }
        Specification {
            signature,
            rules,
            by_root,
        }
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn rules(&self) -> &[Rule] {
        &self.rules
    }

    pub fn rule(&self, i: usize) -> &Rule {
        &self.rules[i]
    }

    pub fn data_rules(&self) -> impl Iterator<Item = (usize, &Rule)> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.origin() == Sort::Data)
    }

    pub fn struct_rules(&self) -> impl Iterator<Item = (usize, &Rule)> {
        self.rules
            .iter()
            .enumerate()
            .filter(|(_, r)| r.origin() == Sort::Structure)
    }

    /// Indices of rules whose left-hand side is rooted by `f`.
    pub fn rules_for(&self, f: SymbolId) -> &[usize] {
        self.by_root
            .get(f.index())
            .map(Vec::as_slice)
            .unwrap_or(&[])
    }

    pub fn is_constructor(&self, f: SymbolId) -> bool {
        self.signature.get(f).is_constructor()
    }

    pub fn is_constructor_rooted(&self, t: &Term) -> bool {
        t.root().is_some_and(|f| self.is_constructor(f))
    }

    /// Indices of the rules matching `t` at the root, in rule order.
    pub fn matching_rules(&self, t: &Term) -> Vec<usize> {
        match t.root() {
            None => Vec::new(),
            Some(f) => self
                .rules_for(f)
                .iter()
                .copied()
                .filter(|&i| matches(self.rules[i].lhs(), t))
                .collect(),
        }
    }

    pub fn is_redex(&self, t: &Term) -> bool {
        t.root().is_some_and(|f| {
            self.rules_for(f)
                .iter()
                .any(|&i| matches(self.rules[i].lhs(), t))
        })
    }

    /// [`crate::find_redexes`] over all rules, using the root index.
    pub fn redexes(&self, t: &Term, outermost_only: bool) -> Vec<Redex> {
        collect_redexes(t, outermost_only, &mut |sub, out| {
            if let Some(f) = sub.root() {
                out.extend(
                    self.rules_for(f)
                        .iter()
                        .copied()
                        .filter(|&i| matches(self.rules[i].lhs(), sub)),
                );
            }
        })
    }

    pub fn rewrite(&self, t: &Term, p: &Position, rule: usize) -> Result<Term, RewriteError> {
        crate::rewrite::rewrite_at(t, p, &self.rules[rule])
    }

    /// Matching substitution for rule `rule` at the root of `t`.
    pub fn match_rule(&self, rule: usize, t: &Term) -> Option<Substitution> {
        match_term(self.rules[rule].lhs(), t)
    }

    /// True when the data rules are left-linear.
    pub fn data_left_linear(&self) -> bool {
        self.data_rules().all(|(_, r)| r.is_left_linear())
    }

    pub fn render(&self, t: &Term) -> String {
        t.display(&self.signature).to_string()
    }

    pub fn render_rule(&self, i: usize) -> String {
        let r = &self.rules[i];
        format!("{} -> {}", self.render(r.lhs()), self.render(r.rhs()))
    }
}

/// One recorded rewrite step `from →_{rule, position} to`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Step {
    pub from: Term,
    pub to: Term,
    pub position: Position,
    pub rule: usize,
}

impl Specification {
    pub fn step(&self, t: &Term, p: &Position, rule: usize) -> Result<Step, RewriteError> {
        let to = self.rewrite(t, p, rule)?;
        Ok(Step {
            from: t.clone(),
            to,
            position: p.clone(),
            rule,
        })
    }
}

impl Step {
    /// Re-applies the step with [`crate::rewrite_at`] and compares the result.
    pub fn replays(&self, spec: &Specification) -> bool {
        spec.rewrite(&self.from, &self.position, self.rule)
            .is_ok_and(|t| t == self.to)
    }
}
