mod common;

use common::{alternate, clocked_circuit, fixture, ground, rng, FIXTURES};
use prodcheck::prover::{allowed_struct_redex_count, fairness_evidence, verify_witness};
use prodcheck::{
    check_syntactic, compute_mu, decide_productivity, find_cs_loop, find_unproductive_loop,
    mu_redexes, parse_spec, parse_term, report_json, search_interpretation, start_terms,
    validate_proper, verify_certificate, ProverOptions, Sort, Specification, Step, StepPolicy,
    Substitution, ValidateOptions, Verdict,
};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;

/// Passes the syntactic criterion; every left-hand side argument is a
/// variable.
const FLAT: &str = "
data 0 : 0 ; data 1 : 0 ; data not : 1 ;
cons cons : 1 1 ;
func zeros : 0 0 ; func alt : 1 0 ; func blink : 0 1 ;
DATA-RULES { not(0) -> 1 ; not(1) -> 0 ; }
RULES {
  zeros -> 0 : zeros ;
  alt(x) -> x : alt(not(x)) ;
  blink(xs) -> 1 : blink(blink(xs)) ;
}
";

/// Passes the syntactic criterion; `f` inspects the data in its argument.
const INSPECT: &str = "
data 0 : 0 ; data 1 : 0 ; data not : 1 ;
cons cons : 1 1 ;
func ones : 0 0 ; func f : 0 1 ;
DATA-RULES { not(0) -> 1 ; not(1) -> 0 ; }
RULES {
  ones -> 1 : ones ;
  f(0 : xs) -> 0 : f(xs) ;
  f(1 : xs) -> 1 : f(xs) ;
}
";

/// Drops elements forever on any input.
const DROP: &str = "
data 1 : 0 ;
cons cons : 1 1 ;
func ones : 0 0 ; func f : 0 1 ;
RULES { ones -> 1 : ones ; f(x : xs) -> f(xs) ; }
";

fn spec(text: &str) -> Specification {
    parse_spec(text).unwrap().spec
}

fn random_mu_reduction(spec: &Specification, seed: u64, steps: usize) -> Vec<Step> {
    let mu = compute_mu(spec);
    let mut r = rng(seed);
    let mut t = ground(spec, Sort::Structure, r.gen_range(2..6), &mut r);
    let mut out = Vec::new();
    for _ in 0..steps {
        let redexes = mu_redexes(spec, &mu, &t);
        let Some(red) = redexes.choose(&mut r) else {
            break;
        };
        let step = spec.step(&t, &red.position, red.rule).unwrap();
        t = step.to.clone();
        out.push(step);
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// When no left-hand side has a non-variable argument, the number of
    /// allowed stream redexes drops at every stream step and never grows
    /// at a data step.
    #[test]
    fn allowed_redex_count_decreases(flat in any::<bool>(), seed in any::<u64>()) {
        let spec = if flat { spec(FLAT) } else { fixture("random") };
        common::suites::redex_count_decreases(&spec, seed)?;
    }

    /// Specifications passing the syntactic criterion are μ-terminating:
    /// random μ-reductions reach a μ-normal form.
    #[test]
    fn syntactic_specs_are_mu_terminating(which in 0..4usize, seed in any::<u64>()) {
        let spec = match which {
            0 => fixture("random"),
            1 => spec(FLAT),
            2 => spec(INSPECT),
            _ => alternate(),
        };
        prop_assert!(check_syntactic(&spec).is_some());
        let steps = random_mu_reduction(&spec, seed, 2000);
        prop_assert!(steps.len() < 2000);
        if let Some(last) = steps.last() {
            prop_assert!(mu_redexes(&spec, &compute_mu(&spec), &last.to).is_empty());
        }
    }

    /// Interpretations found under any coefficient range verify, and orient
    /// every ground instance of every rule.
    #[test]
    fn found_interpretations_orient_ground_instances(
        name in proptest::sample::select(vec!["random_id", "assoc_f", "random", "finzeroes"]),
        max_coeff in 1..4u32,
        max_const in 0..5u32,
        seed in any::<u64>(),
    ) {
        let spec = fixture(name);
        let mu = compute_mu(&spec);
        let Some(interp) = search_interpretation(&spec, &mu, max_coeff, max_const) else { return Ok(()) };
        let cert = prodcheck::prover::interpretation_certificate(&spec, interp.clone());
        prop_assert!(verify_certificate(&spec, &mu, &cert).passed);
        let mut r = rng(seed);
        for rule in spec.rules() {
            let mut sigma = Substitution::new();
            for v in rule.lhs().vars() {
                let t = ground(&spec, v.sort(), 4, &mut r);
                sigma.bind(v.clone(), t, v.sort()).unwrap();
            }
            let l = interp.eval(&sigma.apply(rule.lhs()));
            let rhs = interp.eval(&sigma.apply(rule.rhs()));
            prop_assert!(l.vars.is_empty() && rhs.vars.is_empty());
            prop_assert!(l.constant > rhs.constant, "{} vs {}", l, rhs);
        }
    }
}

/// Every specification used by the suites, with a label.
fn corpus() -> Vec<(String, Specification)> {
    let mut out: Vec<(String, Specification)> = FIXTURES
        .iter()
        .map(|n| (n.to_string(), fixture(n)))
        .collect();
    out.push(("alternate".into(), alternate()));
    out.push(("clocked".into(), clocked_circuit()));
    out.push(("flat".into(), spec(FLAT)));
    out.push(("inspect".into(), spec(INSPECT)));
    out.push(("drop".into(), spec(DROP)));
    out
}

#[test]
fn emitted_certificates_verify() {
    let mut certified = Vec::new();
    for (name, spec) in corpus() {
        let a = decide_productivity(&spec, &ProverOptions::default()).unwrap();
        if let Verdict::StronglyProductive(cert) = &a.verdict {
            let check = verify_certificate(&spec, a.mu.as_ref().unwrap(), cert);
            assert!(check.passed, "{name}: {:?}", check.failure);
            certified.push(name);
        }
    }
    assert_eq!(
        certified,
        [
            "random",
            "random_id",
            "assoc_f",
            "alternate",
            "flat",
            "inspect"
        ]
    );
}

#[test]
fn analysis_is_deterministic() {
    for (name, spec) in corpus() {
        let first = decide_productivity(&spec, &ProverOptions::default()).unwrap();
        let second = decide_productivity(&spec, &ProverOptions::default()).unwrap();
        assert_eq!(first.verdict, second.verdict, "{name}");
        assert_eq!(
            report_json(&spec, &first, false),
            report_json(&spec, &second, false),
            "{name}"
        );
    }
}

/// Checks a witness and that unrolling its cycle three times keeps every
/// redex's killing step, shifted to the matching copy.
fn check_witness(spec: &Specification, w: &prodcheck::UnproductiveLoopWitness) {
    verify_witness(spec, w).unwrap();
    for s in w.prefix.iter().chain(&w.cycle) {
        assert!(!spec.is_constructor_rooted(&s.from));
        assert!(!spec.is_constructor_rooted(&s.to));
    }
    let n = w.cycle.len();
    let unrolled: Vec<Step> = w.cycle.iter().cycle().take(3 * n).cloned().collect();
    let evidence = fairness_evidence(spec, &unrolled).expect("unrolled cycle stays fair");
    assert_eq!(evidence.len(), 3 * w.fairness.len());
    for copy in 0..3 {
        for e in &w.fairness {
            let distance = (e.killed_by + n - e.term) % n;
            let term = copy * n + e.term;
            let shifted = evidence
                .iter()
                .find(|u| u.term == term && u.position == e.position && u.rule == e.rule)
                .expect("redex present in every copy");
            assert_eq!(shifted.killed_by, (term + distance) % (3 * n));
            assert_eq!(shifted.kill, e.kill);
        }
    }
}

#[test]
fn fixture_witnesses_are_sound() {
    for (text, policy) in [
        (common::fixture_text("maybe"), StepPolicy::OutermostOnly),
        (DROP.to_string(), StepPolicy::OutermostOnly),
        (common::fixture_text("nonleftlin"), StepPolicy::AnyRedex),
    ] {
        let spec = spec(&text);
        let data = prodcheck::check::data_constructor_analysis(&spec);
        let starts = start_terms(&spec, &data.constructors);
        let w = find_unproductive_loop(&spec, &starts, 2000, 12, policy).expect("a witness");
        check_witness(&spec, &w);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn witnesses_from_random_starts_are_sound(which in 0..5usize, seed in any::<u64>()) {
        let spec = match which {
            0 => fixture("maybe"),
            1 => spec(DROP),
            2 => fixture("finzeroes"),
            3 => fixture("unfolded"),
            _ => fixture("snc_inf"),
        };
        let mut r = rng(seed);
        let start = common::defined_rooted(&spec, 4, &mut r);
        if let Some(w) = find_unproductive_loop(&spec, &[start], 300, 8, StepPolicy::OutermostOnly) {
            check_witness(&spec, &w);
        }
    }
}

#[test]
fn measure_can_grow_at_data_steps() {
    let spec = spec(INSPECT);
    let mu = compute_mu(&spec);
    let t = parse_term(spec.signature(), "f(not(0) : ones)").unwrap();
    let s = spec
        .step(&t, &prodcheck::Position::from_indices(vec![1, 1]), 0)
        .unwrap();
    assert!(spec.rule(s.rule).is_data_rule());
    assert_eq!(allowed_struct_redex_count(&spec, &mu, &t), 0);
    assert_eq!(allowed_struct_redex_count(&spec, &mu, &s.to), 1);
}

#[test]
fn measure_can_stay_constant_at_stream_steps() {
    let spec = alternate();
    let mu = compute_mu(&spec);
    let t = parse_term(spec.signature(), "zip(inv(zeros), zeros)").unwrap();
    let s = spec
        .step(&t, &prodcheck::Position::from_indices(vec![1, 1]), 2)
        .unwrap();
    assert_eq!(spec.render(&s.to), "zip(inv(0 : zeros), zeros)");
    assert_eq!(allowed_struct_redex_count(&spec, &mu, &t), 1);
    assert_eq!(allowed_struct_redex_count(&spec, &mu, &s.to), 1);
}

#[test]
fn syntactic_specs_have_no_mu_loop() {
    for s in [fixture("random"), spec(FLAT), spec(INSPECT), alternate()] {
        let report = validate_proper(&s, &ValidateOptions::default());
        let starts = start_terms(&s, &report.data.constructors);
        assert!(find_cs_loop(&s, &compute_mu(&s), &starts, 2000, 12).is_none());
    }
}
