//! Pattern completeness by usefulness of the wildcard row.
//!
//! A column ranges over one of three value spaces:
//! data columns over ground data-constructor terms, structure columns at
//! argument level over constructor-rooted terms, and opaque columns (the
//! structure arguments of constructors) over arbitrary terms, which only a
//! variable can cover.

use crate::signature::{Signature, Sort, SymbolId, SymbolRole};
use crate::spec::Specification;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Col {
    Data,
    Struct,
    Opaque,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DataCompleteness {
    Complete,
    Incomplete { symbol: SymbolId, witness: Term },
    Unknown { reason: String },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DataAnalysis {
    /// Data symbols that never root a data rule's left-hand side.
    pub constructors: Vec<SymbolId>,
    pub defined: Vec<SymbolId>,
    pub completeness: DataCompleteness,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Exhaustiveness {
    Exhaustive,
    Missing { symbol: SymbolId, witness: Term },
    Unknown { reason: String },
}

struct Matrix<'a> {
    sig: &'a Signature,
    data_cons: &'a [SymbolId],
    struct_cons: Vec<SymbolId>,
}

type Row = Vec<Term>;

impl Matrix<'_> {
    fn sub_cols(&self, c: SymbolId) -> Vec<Col> {
        let to_col = |s: &Sort| {
            if *s == Sort::Data {
                Col::Data
            } else {
                Col::Opaque
            }
        };
        self.sig.get(c).arg_sorts().iter().map(to_col).collect()
    }

    fn wildcard(&self, col: Col) -> Term {
        Term::var(
            "_",
            if col == Col::Data {
                Sort::Data
            } else {
                Sort::Structure
            },
        )
    }

    /// A value vector of sorts `cols` matched by no row, if one exists.
    fn uncovered(&self, rows: &[Row], cols: &[Col]) -> Result<Option<Vec<Term>>, String> {
        let Some((&col, rest_cols)) = cols.split_first() else {
            return Ok(if rows.is_empty() {
                Some(Vec::new())
            } else {
                None
            });
        };
        let signature: Vec<SymbolId> = match col {
            Col::Data => self.data_cons.to_vec(),
            Col::Struct => self.struct_cons.clone(),
            Col::Opaque => {
                if rows.iter().any(|r| !r[0].is_var()) {
                    return Err("non-variable pattern below a constructor".into());
                }
                Vec::new()
            }
        };
        let heads: Vec<SymbolId> = signature
            .iter()
            .copied()
            .filter(|c| rows.iter().any(|r| r[0].root() == Some(*c)))
            .collect();
        if col != Col::Opaque && heads.len() == signature.len() {
            // every constructor occurs: split over all of them
            for &c in &signature {
                let mut sub_cols = self.sub_cols(c);
                let k = sub_cols.len();
                sub_cols.extend_from_slice(rest_cols);
                let spec_rows = self.specialize(rows, c, &sub_cols[..k]);
                if let Some(w) = self.uncovered(&spec_rows, &sub_cols)? {
                    let (args, rest) = w.split_at(k);
                    let mut out = vec![Term::app(c, args.to_vec())];
                    out.extend_from_slice(rest);
                    return Ok(Some(out));
                }
            }
            return Ok(None);
        }
        let default: Vec<Row> = rows
            .iter()
            .filter(|r| r[0].is_var())
            .map(|r| r[1..].to_vec())
            .collect();
        let Some(rest) = self.uncovered(&default, rest_cols)? else {
            return Ok(None);
        };
        let head = match signature.iter().find(|c| !heads.contains(c)) {
            // structure values are constructor-rooted, so name one
            Some(&c) if !heads.is_empty() || col == Col::Struct => {
                let args = self
                    .sub_cols(c)
                    .into_iter()
                    .map(|k| self.wildcard(k))
                    .collect();
                Term::app(c, args)
            }
            _ => self.wildcard(col),
        };
        let mut out = vec![head];
        out.extend(rest);
        Ok(Some(out))
    }

    fn specialize(&self, rows: &[Row], c: SymbolId, sub_cols: &[Col]) -> Vec<Row> {
        let mut out = Vec::new();
        for r in rows {
            match &r[0] {
                Term::Var(_) => {
                    let mut row: Row = sub_cols.iter().map(|k| self.wildcard(*k)).collect();
                    row.extend_from_slice(&r[1..]);
                    out.push(row);
                }
                Term::App(g, args) if *g == c => {
                    let mut row: Row = args.to_vec();
                    row.extend_from_slice(&r[1..]);
                    out.push(row);
                }
                Term::App(..) => {}
            }
        }
        out
    }
}

/// Names wildcards `_1`, `_2`, ... in pre-order.
fn number_wildcards(t: &Term, next: &mut usize) -> Term {
    match t {
        Term::Var(v) => {
            *next += 1;
            Term::var(format!("_{next}"), v.sort())
        }
        Term::App(f, args) => {
            Term::app(*f, args.iter().map(|a| number_wildcards(a, next)).collect())
        }
    }
}

fn contains_any(t: &Term, syms: &[SymbolId]) -> bool {
    syms.iter().any(|s| t.contains_symbol(*s))
}

/// Splits the data symbols into constructors and defined symbols and checks
/// that every defined data symbol is completely defined over constructors.
pub fn data_constructor_analysis(spec: &Specification) -> DataAnalysis {
    let sig = spec.signature();
    let defined: Vec<SymbolId> = sig
        .data_symbols()
        .into_iter()
        .filter(|f| spec.data_rules().any(|(_, r)| r.lhs().root() == Some(*f)))
        .collect();
    let constructors: Vec<SymbolId> = sig
        .data_symbols()
        .into_iter()
        .filter(|f| !defined.contains(f))
        .collect();

    let nested_defined = spec
        .data_rules()
        .any(|(_, r)| r.lhs().args().iter().any(|a| contains_any(a, &defined)));
    let completeness = if nested_defined {
        DataCompleteness::Unknown {
            reason: "defined data symbol below the root of a data rule".into(),
        }
    } else {
        let m = Matrix {
            sig,
            data_cons: &constructors,
            struct_cons: Vec::new(),
        };
        let mut result = DataCompleteness::Complete;
        for &g in &defined {
            let mut dropped = false;
            let rows: Vec<Row> = spec
                .data_rules()
                .filter(|(_, r)| r.lhs().root() == Some(g))
                .filter(|(_, r)| {
                    // non-linear rows are dropped; the check then under-approximates
                    let linear = r.is_left_linear();
                    dropped |= !linear;
                    linear
                })
                .map(|(_, r)| r.lhs().args().to_vec())
                .collect();
            let cols = vec![Col::Data; sig.get(g).arity()];
            match m.uncovered(&rows, &cols) {
                Ok(None) => {}
                Ok(Some(_)) if dropped => {
                    result = DataCompleteness::Unknown {
                        reason: format!(
                            "non-linear rules for `{}` leave completeness open",
                            sig.name(g)
                        ),
                    };
                    break;
                }
                Ok(Some(w)) => {
                    result = DataCompleteness::Incomplete {
                        symbol: g,
                        witness: number_wildcards(&Term::app(g, w), &mut 0),
                    };
                    break;
                }
                Err(reason) => {
                    result = DataCompleteness::Unknown { reason };
                    break;
                }
            }
        }
        result
    };
    DataAnalysis {
        constructors,
        defined,
        completeness,
    }
}

/// Checks that every defined structure symbol applied to data normal forms
/// and constructor-rooted structure arguments is matched by some rule.
pub fn check_exhaustive(spec: &Specification, data: &DataAnalysis) -> Exhaustiveness {
    match &data.completeness {
        DataCompleteness::Complete => {}
        DataCompleteness::Incomplete { symbol, .. } => {
            return Exhaustiveness::Unknown {
                reason: format!(
                    "data symbol `{}` is not completely defined",
                    spec.signature().name(*symbol)
                ),
            }
        }
        DataCompleteness::Unknown { reason } => {
            return Exhaustiveness::Unknown {
                reason: reason.clone(),
            }
        }
    }
    let sig = spec.signature();
    let m = Matrix {
        sig,
        data_cons: &data.constructors,
        struct_cons: sig.constructors(),
    };
    for f in sig.ids_with_role(SymbolRole::Defined) {
        let lhss: Vec<&Term> = spec
            .struct_rules()
            .map(|(_, r)| r.lhs())
            .filter(|l| l.root() == Some(f))
            .collect();
        if lhss.iter().any(|l| contains_any(l, &data.defined)) {
            return Exhaustiveness::Unknown {
                reason: format!(
                    "a left-hand side for `{}` contains a defined data symbol",
                    sig.name(f)
                ),
            };
        }
        if lhss.iter().any(|l| !l.is_linear()) {
            return Exhaustiveness::Unknown {
                reason: format!("non-linear left-hand side for `{}`", sig.name(f)),
            };
        }
        let rows: Vec<Row> = lhss.iter().map(|l| l.args().to_vec()).collect();
        let cols: Vec<Col> = sig
            .get(f)
            .arg_sorts()
            .iter()
            .map(|s| {
                if *s == Sort::Data {
                    Col::Data
                } else {
                    Col::Struct
                }
            })
            .collect();
        match m.uncovered(&rows, &cols) {
            Ok(None) => {}
            Ok(Some(w)) => {
                return Exhaustiveness::Missing {
                    symbol: f,
                    witness: number_wildcards(&Term::app(f, w), &mut 0),
                }
            }
            Err(reason) => return Exhaustiveness::Unknown { reason },
        }
    }
    Exhaustiveness::Exhaustive
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_spec;

    fn spec(src: &str) -> Specification {
        parse_spec(src).unwrap().spec
    }

    const FINZEROES: &str =
        "data 0 : 0 ; data 1 : 0 ; cons cons : 1 1 ; func ones : 0 0 ; func f : 0 1 ;
        RULES { ones -> 1 : ones ; f(0 : xs) -> f(xs) ; f(1 : xs) -> 1 : f(xs) ; }";

    #[test]
    fn filter_rules_are_exhaustive() {
        let s = spec(FINZEROES);
        let d = data_constructor_analysis(&s);
        assert_eq!(check_exhaustive(&s, &d), Exhaustiveness::Exhaustive);
    }

    #[test]
    fn missing_case_has_witness() {
        let s = spec(
            "data 0 : 0 ; data 1 : 0 ; cons cons : 1 1 ; func ones : 0 0 ; func f : 0 1 ;
             RULES { ones -> 1 : ones ; f(0 : xs) -> f(xs) ; }",
        );
        let d = data_constructor_analysis(&s);
        let Exhaustiveness::Missing { symbol, witness } = check_exhaustive(&s, &d) else {
            panic!()
        };
        assert_eq!(s.signature().name(symbol), "f");
        assert_eq!(s.render(&witness), "f(1 : _1)");
    }

    #[test]
    fn data_analysis_examples() {
        let s = spec(
            "data 0 : 0 ; data 1 : 0 ; data not : 1 ; DATA-RULES { not(0) -> 1 ; not(1) -> 0 ; }",
        );
        let d = data_constructor_analysis(&s);
        let names: Vec<&str> = d
            .constructors
            .iter()
            .map(|c| s.signature().name(*c))
            .collect();
        assert_eq!(names, ["0", "1"]);
        assert_eq!(d.completeness, DataCompleteness::Complete);

        let s = spec("data 0 : 0 ; data 1 : 0 ;");
        assert_eq!(
            data_constructor_analysis(&s).completeness,
            DataCompleteness::Complete
        );

        let s = spec("data 0 : 0 ; data 1 : 0 ; data g : 1 ; DATA-RULES { g(0) -> 0 ; }");
        let d = data_constructor_analysis(&s);
        let DataCompleteness::Incomplete { witness, .. } = d.completeness else {
            panic!()
        };
        assert_eq!(s.render(&witness), "g(1)");
    }

    #[test]
    fn nonlinear_data_rules() {
        let s = spec(
            "data 0 : 0 ; data 1 : 0 ; data d : 2 ;
             DATA-RULES { d(x, x) -> 1 ; d(0, x) -> 0 ; d(1, x) -> 0 ; }",
        );
        assert_eq!(
            data_constructor_analysis(&s).completeness,
            DataCompleteness::Complete
        );
        let s = spec("data 0 : 0 ; data 1 : 0 ; data d : 2 ; DATA-RULES { d(x, x) -> 1 ; }");
        assert!(matches!(
            data_constructor_analysis(&s).completeness,
            DataCompleteness::Unknown { .. }
        ));
    }

    #[test]
    fn defined_root_rows_are_dead() {
        let s = spec(
            "data 1 : 0 ; cons cons : 1 1 ; func a : 0 0 ; func f : 0 1 ;
             RULES { a -> f(a) ; f(f(xs)) -> 1 : xs ; }",
        );
        let d = data_constructor_analysis(&s);
        let Exhaustiveness::Missing { witness, .. } = check_exhaustive(&s, &d) else {
            panic!()
        };
        assert_eq!(s.render(&witness), "f(_1 : _2)");
    }

    #[test]
    fn interleaved_profiles() {
        let s = spec(
            "data 0 : 0 ; data 1 : 0 ; cons cons : 1 1 ; func h : s d d ;
             RULES { h(xs, 0, 0) -> xs ; h(xs, 1, 1) -> xs ; h(x : xs, 0, 1) -> xs ; }",
        );
        let d = data_constructor_analysis(&s);
        let Exhaustiveness::Missing { witness, .. } = check_exhaustive(&s, &d) else {
            panic!()
        };
        assert_eq!(s.render(&witness), "h(_1 : _2, 1, 0)");
    }
}
