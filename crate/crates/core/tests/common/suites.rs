//! Property bodies shared by the proptest suites and the acceptance run.
//! Each takes its inputs and fails with a [`TestCaseError`].

use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use rand::seq::SliceRandom;
use rand::Rng;

use prodcheck::sim::{default_max_rounds, Choice, HOLE};
use prodcheck::{
    compute_mu, eval_prefix, mu_redexes, parallel_outermost_round, validate_proper, Position,
    ReplacementMap, RuleChooser, SeededChooser, SimError, Sort, Specification, Term,
    ValidateOptions, Validity,
};

use super::{alternate, clocked_circuit, defined_rooted, fixture, ground, rng, PRODUCTIVE, PROPER};

pub fn proper() -> impl Strategy<Value = Specification> {
    prop_oneof![
        9 => proptest::sample::select(PROPER.to_vec()).prop_map(fixture),
        1 => Just(()).prop_map(|_| alternate()),
    ]
}

pub fn productive() -> impl Strategy<Value = Specification> {
    prop_oneof![
        5 => proptest::sample::select(PRODUCTIVE.to_vec()).prop_map(fixture),
        1 => Just(()).prop_map(|_| alternate()),
        1 => Just(()).prop_map(|_| clocked_circuit()),
    ]
}

pub fn orthogonal() -> impl Strategy<Value = Specification> {
    prop_oneof![
        Just(()).prop_map(|_| alternate()),
        Just(()).prop_map(|_| clocked_circuit()),
        Just(()).prop_map(|_| fixture("snc_inf")),
    ]
}

/// Fixtures passing the syntactic criterion.
pub fn syntactic_fixtures() -> Vec<Specification> {
    super::FIXTURES
        .iter()
        .map(|n| fixture(n))
        .filter(|s| prodcheck::check_syntactic(s).is_some())
        .collect()
}

/// Every ground stream term of a proper specification whose root is not a
/// constructor has a redex at an allowed position.
pub fn allowed_redex_exists(spec: &Specification, seed: u64) -> Result<(), TestCaseError> {
    let report = validate_proper(spec, &ValidateOptions::default());
    prop_assert_eq!(report.verdict, Validity::Proper);
    let mu = compute_mu(spec);
    let mut r = rng(seed);
    let t = defined_rooted(spec, r.gen_range(2..6), &mut r);
    let redexes = mu_redexes(spec, &mu, &t);
    prop_assert!(
        !redexes.is_empty(),
        "no allowed redex in {}",
        spec.render(&t)
    );
    for red in &redexes {
        prop_assert!(mu.is_allowed(&t, &red.position));
    }
    Ok(())
}

/// Applies the steps in order; they must be at pairwise parallel positions.
pub fn parallel_step(
    spec: &Specification,
    t: &Term,
    steps: &[(Position, usize)],
) -> Result<Term, TestCaseError> {
    for (i, (p, _)) in steps.iter().enumerate() {
        for (q, _) in &steps[i + 1..] {
            prop_assert!(p.is_parallel(q), "{} and {} are not parallel", p, q);
        }
    }
    let mut out = t.clone();
    for (p, rule) in steps {
        out = spec
            .rewrite(&out, p, *rule)
            .map_err(|e| TestCaseError::fail(e.to_string()))?;
    }
    Ok(out)
}

/// Redexes at blocked positions, thinned to a random pairwise parallel set.
pub fn blocked_parallel_redexes(
    spec: &Specification,
    mu: &ReplacementMap,
    t: &Term,
    rng: &mut rand_chacha::ChaCha8Rng,
) -> Vec<(Position, usize)> {
    let mut blocked: Vec<(Position, usize)> = spec
        .redexes(t, false)
        .into_iter()
        .filter(|r| !mu.is_allowed(t, &r.position))
        .map(|r| (r.position, r.rule))
        .collect();
    blocked.shuffle(rng);
    let mut chosen: Vec<(Position, usize)> = Vec::new();
    for (p, rule) in blocked {
        if rng.gen_bool(0.7) && chosen.iter().all(|(q, _)| q.is_parallel(&p)) {
            chosen.push((p, rule));
        }
    }
    chosen
}

/// A parallel step at blocked positions followed by an allowed step can be
/// reordered: the allowed step first, then a parallel step at the
/// descendants of the blocked positions.
pub fn blocked_steps_commute(spec: &Specification, seed: u64) -> Result<(), TestCaseError> {
    let mu = compute_mu(spec);
    let mut r = rng(seed);
    let t = ground(spec, Sort::Structure, r.gen_range(3..7), &mut r);
    let parallel = blocked_parallel_redexes(spec, &mu, &t, &mut r);
    let t1 = parallel_step(spec, &t, &parallel)?;
    let allowed = mu_redexes(spec, &mu, &t1);
    let Some(step) = allowed.choose(&mut r) else {
        return Ok(());
    };
    let (p, rule) = (step.position.clone(), step.rule);
    let t2 = spec.rewrite(&t1, &p, rule).unwrap();

    let lhs = spec.rule(rule).lhs();
    let rhs = spec.rule(rule).rhs();
    let t_hat = spec.rewrite(&t, &p, rule);
    prop_assert!(
        t_hat.is_ok(),
        "rule {} does not apply at {} before the blocked steps",
        rule,
        p
    );
    let t_hat = t_hat.unwrap();

    let mut descendants = Vec::new();
    for (q, qrule) in &parallel {
        prop_assert!(
            !q.is_prefix_of(&p),
            "blocked step {} is above the allowed step {}",
            q,
            p
        );
        if q.is_parallel(&p) {
            descendants.push((q.clone(), *qrule));
            continue;
        }
        let inside = q.strip_prefix(&p).unwrap();
        let var = lhs
            .var_positions()
            .into_iter()
            .find(|(v, _)| v.is_prefix_of(&inside));
        prop_assert!(
            var.is_some(),
            "blocked step {} lies in the pattern of rule {}",
            q,
            rule
        );
        let (v, x) = var.unwrap();
        let rest = inside.strip_prefix(&v).unwrap();
        for (w, y) in rhs.var_positions() {
            if y == x {
                descendants.push((p.concat(&w).concat(&rest), *qrule));
            }
        }
    }
    prop_assert_eq!(parallel_step(spec, &t_hat, &descendants)?, t2);
    Ok(())
}

/// The number of allowed stream redexes drops at every stream step and
/// never grows at a data step, along a random μ-reduction.
pub fn redex_count_decreases(spec: &Specification, seed: u64) -> Result<(), TestCaseError> {
    use prodcheck::prover::allowed_struct_redex_count;
    prop_assert!(prodcheck::check_syntactic(spec).is_some());
    let mu = compute_mu(spec);
    let mut r = rng(seed);
    let mut t = ground(spec, Sort::Structure, r.gen_range(2..6), &mut r);
    for _ in 0..15 {
        let redexes = mu_redexes(spec, &mu, &t);
        let Some(red) = redexes.choose(&mut r) else {
            break;
        };
        let next = spec.rewrite(&t, &red.position, red.rule).unwrap();
        let before = allowed_struct_redex_count(spec, &mu, &t);
        let after = allowed_struct_redex_count(spec, &mu, &next);
        if spec.rule(red.rule).is_data_rule() {
            prop_assert!(
                after <= before,
                "{} -> {}",
                spec.render(&t),
                spec.render(&next)
            );
        } else {
            prop_assert!(
                after < before,
                "{} -> {}",
                spec.render(&t),
                spec.render(&next)
            );
        }
        t = next;
    }
    Ok(())
}

/// Replays recorded rule choices.
struct Scripted<'a> {
    choices: &'a [Choice],
    round: usize,
}

impl RuleChooser for Scripted<'_> {
    fn choose(&mut self, position: &Position, rules: &[usize]) -> usize {
        let c = self
            .choices
            .iter()
            .find(|c| c.round == self.round && &c.position == position)
            .expect("position recorded in the log");
        assert!(rules.contains(&c.rule));
        c.rule
    }
}

/// Every structure position above depth `k` holds a constructor, holes
/// appear only at depth `k`, and kept data is in normal form.
pub fn check_prefix(
    spec: &Specification,
    t: &Term,
    k: usize,
    depth: usize,
) -> Result<(), TestCaseError> {
    let sig = spec.signature();
    match t {
        Term::Var(v) => {
            prop_assert_eq!(v.name(), HOLE);
            prop_assert_eq!(depth, k);
        }
        Term::App(f, args) => {
            prop_assert!(depth < k);
            prop_assert!(
                spec.is_constructor(*f),
                "{} at depth {}",
                sig.name(*f),
                depth
            );
            for (a, s) in args.iter().zip(sig.get(*f).arg_sorts()) {
                match s {
                    Sort::Structure => check_prefix(spec, a, k, depth + 1)?,
                    Sort::Data => {
                        prop_assert!(a.is_ground());
                        prop_assert!(
                            spec.redexes(a, false).is_empty(),
                            "data {} is not normal",
                            spec.render(a)
                        );
                    }
                }
            }
        }
    }
    Ok(())
}

/// Prefix soundness, replay determinism, and a per-round check of the
/// choice log: each round contracts exactly the outermost redexes of the
/// term it starts from, so no outermost redex survives a round.
pub fn prefix_sound_and_replayable(
    spec: &Specification,
    seed: u64,
    k: usize,
) -> Result<(), TestCaseError> {
    let mut r = rng(seed);
    let t = ground(spec, Sort::Structure, r.gen_range(1..5), &mut r);
    let budget = default_max_rounds(spec, k);
    let first = eval_prefix(spec, &t, k, &mut SeededChooser::new(seed), budget);
    let result = match &first {
        Ok(res) => res,
        Err(e) => return Err(TestCaseError::fail(format!("{}: {e}", spec.render(&t)))),
    };
    check_prefix(spec, &result.term, k, 0)?;
    let again = eval_prefix(spec, &t, k, &mut SeededChooser::new(seed), budget);
    prop_assert_eq!(&first, &again);

    let mut current = t.clone();
    for round in 0..result.rounds_used {
        let logged: Vec<(Position, usize)> = result
            .choice_log
            .iter()
            .filter(|c| c.round == round)
            .map(|c| (c.position.clone(), c.rule))
            .collect();
        let mut outermost: Vec<Position> = spec
            .redexes(&current, true)
            .into_iter()
            .map(|r| r.position)
            .collect();
        outermost.dedup();
        let contracted: Vec<Position> = logged.iter().map(|(p, _)| p.clone()).collect();
        prop_assert_eq!(&contracted, &outermost, "round {}", round);
        let mut script = Scripted {
            choices: &result.choice_log,
            round,
        };
        let (next, choices) = parallel_outermost_round(spec, &current, &mut script);
        prop_assert_eq!(choices, logged);
        current = next;
    }
    Ok(())
}

/// On an orthogonal system two seeds give the same prefix, or run out of
/// budget on the same term.
pub fn seed_independent(
    spec: &Specification,
    seed: u64,
    other: u64,
    k: usize,
) -> Result<(), TestCaseError> {
    prop_assert!(validate_proper(spec, &ValidateOptions::default()).orthogonal);
    let mut r = rng(seed);
    let t = ground(spec, Sort::Structure, r.gen_range(1..5), &mut r);
    let budget = default_max_rounds(spec, k);
    let a = eval_prefix(spec, &t, k, &mut SeededChooser::new(seed), budget);
    let b = eval_prefix(spec, &t, k, &mut SeededChooser::new(other), budget);
    match (a, b) {
        (Ok(a), Ok(b)) => prop_assert_eq!(a.term, b.term),
        (
            Err(SimError::BudgetExceeded { last: a, .. }),
            Err(SimError::BudgetExceeded { last: b, .. }),
        ) => {
            prop_assert_eq!(a, b)
        }
        (a, b) => prop_assert!(false, "{:?} vs {:?}", a, b),
    }
    Ok(())
}

/// Runs one property for `cases` generated inputs.
pub fn run<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    let mut runner = TestRunner::new(Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    });
    runner.run(&strategy, test).map_err(|e| e.to_string())
}
