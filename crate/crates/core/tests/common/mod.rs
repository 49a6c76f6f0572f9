//! Shared helpers for the integration tests: fixture loading and seeded
//! generation of ground terms.

#![allow(dead_code)]

pub mod suites;

use prodcheck::{parse_spec, Sort, Specification, SymbolId, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const FIXTURES: [&str; 11] = [
    "maybe",
    "random",
    "random_id",
    "finzeroes",
    "snc_inf",
    "assoc_f",
    "incomplete",
    "nonleftlin",
    "nested_cons",
    "unfolded",
    "sdff",
];

/// Fixtures that validate as proper and exhaustive.
pub const PROPER: [&str; 9] = [
    "maybe",
    "random",
    "random_id",
    "finzeroes",
    "snc_inf",
    "assoc_f",
    "incomplete",
    "unfolded",
    "sdff",
];

/// Fixtures whose every ground stream term is productive.
pub const PRODUCTIVE: [&str; 5] = ["random", "random_id", "assoc_f", "incomplete", "sdff"];

/// Passes the syntactic criterion and exercises data rules, nested defined
/// symbols and a blocked argument.
pub const ALTERNATE: &str = "
data 0 : 0 ;
data 1 : 0 ;
data not : 1 ;
cons cons : 1 1 ;
func zeros : 0 0 ;
func alt : 1 0 ;
func inv : 0 1 ;
func zip : 0 2 ;
DATA-RULES { not(0) -> 1 ; not(1) -> 0 ; }
RULES {
  zeros -> 0 : zeros ;
  alt(x) -> x : alt(not(x)) ;
  inv(x : xs) -> not(x) : inv(xs) ;
  zip(x : xs, ys) -> x : zip(ys, xs) ;
}
";

/// The circuit with its random input replaced by an alternating one, which
/// makes the system orthogonal.
pub fn clocked_circuit() -> Specification {
    let text = fixture_text("sdff").replace(
        "rand -> 0 : rand ;\n  rand -> 1 : rand ;",
        "rand -> 0 : 1 : rand ;",
    );
    assert!(!text.contains("rand -> 1"));
    parse_spec(&text).unwrap().spec
}

/// Replaces every data argument by its normal form.
pub fn normalize_data_args(spec: &Specification, t: &Term) -> Term {
    let Term::App(f, args) = t else {
        return t.clone();
    };
    let sorts = spec.signature().get(*f).arg_sorts();
    let args = args
        .iter()
        .zip(sorts)
        .map(|(a, s)| match s {
            Sort::Data => prodcheck::sim::normalize_data(spec, a),
            Sort::Structure => normalize_data_args(spec, a),
        })
        .collect();
    Term::app(*f, args)
}

pub fn fixture_text(name: &str) -> String {
    let path = format!(
        "{}/../../fixtures/{name}.prodspec",
        env!("CARGO_MANIFEST_DIR")
    );
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn fixture(name: &str) -> Specification {
    parse_spec(&fixture_text(name)).unwrap().spec
}

pub fn alternate() -> Specification {
    parse_spec(ALTERNATE).unwrap().spec
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn symbols_of(spec: &Specification, sort: Sort, nullary: bool) -> Vec<SymbolId> {
    spec.signature()
        .iter()
        .filter(|(_, s)| s.result_sort() == sort && (!nullary || s.arity() == 0))
        .map(|(id, _)| id)
        .collect()
}

/// `sort` if the signature has ground terms of it, else the structure sort.
pub fn inhabited(spec: &Specification, sort: Sort) -> Sort {
    if symbols_of(spec, sort, true).is_empty() {
        Sort::Structure
    } else {
        sort
    }
}

/// A random well-sorted ground term of `sort` with height at most `height`
/// (counting a constant as height 1).
pub fn ground(spec: &Specification, sort: Sort, height: usize, rng: &mut ChaCha8Rng) -> Term {
    let pool = symbols_of(spec, sort, height <= 1);
    let f = *pool.choose(rng).expect("a nullary symbol of each sort");
    build(spec, f, height, rng)
}

/// A random ground term rooted by `f`.
pub fn build(spec: &Specification, f: SymbolId, height: usize, rng: &mut ChaCha8Rng) -> Term {
    let sorts = spec.signature().get(f).arg_sorts().to_vec();
    let args = sorts
        .into_iter()
        .map(|s| {
            let h = rng.gen_range(1..height.max(2));
            ground(spec, s, h, rng)
        })
        .collect();
    Term::app(f, args)
}

/// A random ground structure term whose root is a defined symbol.
pub fn defined_rooted(spec: &Specification, height: usize, rng: &mut ChaCha8Rng) -> Term {
    let defined = spec.signature().defined();
    let f = *defined.choose(rng).expect("a defined symbol");
    build(spec, f, height.max(2), rng)
}

/// Ground data-constructor terms, i.e. data normal forms when the data
/// rules are complete.
pub fn data_value(
    spec: &Specification,
    constructors: &[SymbolId],
    height: usize,
    rng: &mut ChaCha8Rng,
) -> Term {
    let sig = spec.signature();
    let pool: Vec<SymbolId> = constructors
        .iter()
        .copied()
        .filter(|&c| height > 1 || sig.get(c).arity() == 0)
        .collect();
    let c = *pool.choose(rng).expect("a data constant");
    let arity = sig.get(c).arity();
    Term::app(
        c,
        (0..arity)
            .map(|_| data_value(spec, constructors, height - 1, rng))
            .collect(),
    )
}
