mod common;

use common::{
    alternate, build, clocked_circuit, data_value, fixture, ground, inhabited, normalize_data_args,
    rng, FIXTURES, PROPER,
};
use prodcheck::check::{Exhaustiveness, Overlap};
use prodcheck::{compute_mu, validate_proper, Sort, Specification, ValidateOptions, Validity};
use proptest::prelude::*;
use rand::seq::SliceRandom;

fn proper_spec() -> impl Strategy<Value = &'static str> {
    proptest::sample::select(PROPER.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn exhaustive_specs_cover_constructor_arguments(name in proper_spec(), seed in any::<u64>()) {
        let spec = fixture(name);
        let report = validate_proper(&spec, &ValidateOptions::default());
        prop_assert_eq!(&report.exhaustiveness, &Some(Exhaustiveness::Exhaustive));
        let sig = spec.signature();
        let mut r = rng(seed);
        let constructors = sig.constructors();
        for f in sig.defined() {
            let args = sig
                .get(f)
                .arg_sorts()
                .iter()
                .map(|&s| match s {
                    Sort::Data => data_value(&spec, &report.data.constructors, 3, &mut r),
                    Sort::Structure => {
                        normalize_data_args(&spec, &build(&spec, *constructors.choose(&mut r).unwrap(), 3, &mut r))
                    }
                })
                .collect();
            let t = prodcheck::Term::app(f, args);
            prop_assert!(!spec.matching_rules(&t).is_empty(), "no rule matches {}", t.display(sig));
        }
    }
}

/// The specification with one rule removed.
fn without_rule(spec: &Specification, drop: usize) -> Specification {
    let rules = spec
        .rules()
        .iter()
        .enumerate()
        .filter(|(i, _)| *i != drop)
        .map(|(_, r)| r.clone())
        .collect();
    Specification::new(spec.signature().clone(), rules)
}

#[test]
fn missing_witnesses_are_unmatched() {
    let mut checked = 0;
    for name in FIXTURES {
        let spec = fixture(name);
        for drop in 0..spec.rules().len() {
            let reduced = without_rule(&spec, drop);
            let report = validate_proper(&reduced, &ValidateOptions::default());
            if let Some(Exhaustiveness::Missing { symbol, witness }) = &report.exhaustiveness {
                assert_eq!(witness.root(), Some(*symbol));
                assert!(
                    reduced.matching_rules(witness).is_empty(),
                    "{name} without rule {drop}: witness {} is matched",
                    reduced.render(witness)
                );
                assert_eq!(report.verdict, Validity::Improper);
                checked += 1;
            }
        }
    }
    assert!(checked >= 10, "only {checked} witnesses produced");
}

#[test]
fn orthogonality_flag() {
    for name in FIXTURES {
        let spec = fixture(name);
        let report = validate_proper(&spec, &ValidateOptions::default());
        if report.orthogonal {
            assert_eq!(report.overlaps, Vec::<Overlap>::new(), "{name}");
            assert!(spec.rules().iter().all(|r| r.is_left_linear()), "{name}");
        }
    }
    let flag = |name| validate_proper(&fixture(name), &ValidateOptions::default()).orthogonal;
    // assoc_f and incomplete have a nested left-hand side `f(f(..))` that
    // overlaps with `f(x : xs ..)`.
    for name in [
        "random",
        "random_id",
        "maybe",
        "finzeroes",
        "unfolded",
        "sdff",
        "assoc_f",
        "incomplete",
    ] {
        assert!(!flag(name), "{name}");
    }
    assert!(flag("snc_inf"));
    assert!(validate_proper(&alternate(), &ValidateOptions::default()).orthogonal);
    assert!(validate_proper(&clocked_circuit(), &ValidateOptions::default()).orthogonal);
}

fn mu_spec() -> impl Strategy<Value = Specification> {
    prop_oneof![
        proptest::sample::select(FIXTURES.to_vec()).prop_map(fixture),
        Just(()).prop_map(|_| alternate())
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn allowed_positions_are_positions(spec in mu_spec(), seed in any::<u64>(), data in any::<bool>()) {
        let mu = compute_mu(&spec);
        let mut r = rng(seed);
        let sort = inhabited(&spec, if data { Sort::Data } else { Sort::Structure });
        let t = ground(&spec, sort, 6, &mut r);
        let all = t.positions();
        let allowed = mu.allowed_positions(&t);
        prop_assert!(allowed.iter().any(|p| p.is_root()));
        for p in &allowed {
            prop_assert!(all.contains(p));
            prop_assert!(mu.is_allowed(&t, p));
        }
        prop_assert_eq!(allowed.len() + mu.blocked_positions(&t).len(), all.len());
    }

    #[test]
    fn constructors_block_their_structure_arguments(spec in mu_spec(), seed in any::<u64>()) {
        let mu = compute_mu(&spec);
        let sig = spec.signature();
        let mut r = rng(seed);
        for c in sig.constructors() {
            let t = build(&spec, c, 5, &mut r);
            for p in mu.allowed_positions(&t) {
                if let Some(&i) = p.indices().first() {
                    prop_assert_eq!(sig.get(c).arg_sorts()[i - 1], Sort::Data);
                }
            }
        }
    }
}

#[test]
fn left_hand_sides_are_allowed() {
    let specs: Vec<Specification> = PROPER
        .iter()
        .map(|n| fixture(n))
        .chain([alternate()])
        .collect();
    for spec in &specs {
        let mu = compute_mu(spec);
        for (i, rule) in spec.struct_rules() {
            let lhs = rule.lhs();
            for p in lhs.positions() {
                if !lhs.subterm(&p).unwrap().is_var() {
                    assert!(
                        mu.is_allowed(lhs, &p),
                        "rule {} position {p}",
                        spec.render_rule(i)
                    );
                }
            }
        }
    }
}
