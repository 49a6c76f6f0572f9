//! Proper-specification validation.

mod data_termination;
mod overlap;
mod patterns;

use std::ops::Deref;

use serde::Serialize;

pub use data_termination::{
    bounded_data_termination_check, ground_data_terms, DataTermination, DEFAULT_DEPTH_BOUND,
    DEFAULT_STEP_BOUND,
};
pub use overlap::{detect_overlaps, unifiable, Overlap};
pub use patterns::{
    check_exhaustive, data_constructor_analysis, DataAnalysis, DataCompleteness, Exhaustiveness,
};

use crate::position::Position;
use crate::signature::{Sort, SymbolId};
use crate::spec::Specification;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum DiagnosticCode {
    NonlinearLhs,
    StructUnderConstructor,
    BadRoot,
    SortError,
    NotExhaustive,
    DataNontermination,
}

impl DiagnosticCode {
    pub fn as_str(self) -> &'static str {
        match self {
            DiagnosticCode::NonlinearLhs => "NONLINEAR_LHS",
            DiagnosticCode::StructUnderConstructor => "STRUCT_UNDER_CONSTRUCTOR",
            DiagnosticCode::BadRoot => "BAD_ROOT",
            DiagnosticCode::SortError => "SORT_ERROR",
            DiagnosticCode::NotExhaustive => "NOT_EXHAUSTIVE",
            DiagnosticCode::DataNontermination => "DATA_NONTERMINATION",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Lhs,
    Rhs,
}

/// Where a diagnostic points: a rule, a side and a position within it.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
pub struct Location {
    pub rule: Option<usize>,
    pub side: Option<Side>,
    pub position: Option<Position>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Diagnostic {
    pub code: DiagnosticCode,
    pub message: String,
    pub location: Location,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Validity {
    Proper,
    Improper,
    Unknown,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ValidateOptions {
    pub assume_data_terminating: bool,
    pub data_depth_bound: usize,
    pub data_step_bound: usize,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            assume_data_terminating: false,
            data_depth_bound: DEFAULT_DEPTH_BOUND,
            data_step_bound: DEFAULT_STEP_BOUND,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub verdict: Validity,
    pub diagnostics: Vec<Diagnostic>,
    pub orthogonal: bool,
    pub overlaps: Vec<Overlap>,
    pub data: DataAnalysis,
    /// `None` when structural errors prevented the check.
    pub exhaustiveness: Option<Exhaustiveness>,
    pub data_termination: Option<DataTermination>,
}

impl ValidationReport {
    pub fn has(&self, code: DiagnosticCode) -> bool {
        self.diagnostics.iter().any(|d| d.code == code)
    }
}

fn diag(
    code: DiagnosticCode,
    message: String,
    rule: usize,
    side: Side,
    position: Position,
) -> Diagnostic {
    Diagnostic {
        code,
        message,
        location: Location {
            rule: Some(rule),
            side: Some(side),
            position: Some(position),
        },
    }
}

fn structural_diagnostics(spec: &Specification) -> Vec<Diagnostic> {
    let sig = spec.signature();
    let mut out = Vec::new();
    for (i, rule) in spec.rules().iter().enumerate() {
        let mut sorts = [None, None];
        for (k, (side, t)) in [(Side::Lhs, rule.lhs()), (Side::Rhs, rule.rhs())]
            .into_iter()
            .enumerate()
        {
            match sig.sort_of(t) {
                Ok(s) => sorts[k] = Some(s),
                Err(e) => out.push(diag(
                    DiagnosticCode::SortError,
                    e.to_string(),
                    i,
                    side,
                    e.position().clone(),
                )),
            }
        }
        let (Some(ls), Some(rs)) = (sorts[0], sorts[1]) else {
            continue;
        };
        let lhs = rule.lhs();
        if rule.is_data_rule() {
            if ls != Sort::Data || rs != Sort::Data {
                let side = if ls != Sort::Data {
                    Side::Lhs
                } else {
                    Side::Rhs
                };
                out.push(diag(
                    DiagnosticCode::SortError,
                    "data rules must be data-sorted on both sides".into(),
                    i,
                    side,
                    Position::root(),
                ));
            }
            continue;
        }
        let root = lhs.root().expect("rule lhs is not a variable");
        if !sig.get(root).is_defined() {
            out.push(diag(
                DiagnosticCode::BadRoot,
                format!(
                    "left-hand side root `{}` is not a defined structure symbol",
                    sig.name(root)
                ),
                i,
                Side::Lhs,
                Position::root(),
            ));
        }
        if rs != ls {
            out.push(diag(
                DiagnosticCode::SortError,
                format!("right-hand side has sort {rs}, left-hand side has sort {ls}"),
                i,
                Side::Rhs,
                Position::root(),
            ));
        }
        if let Some((p, v)) = lhs.first_repeated_var() {
            out.push(diag(
                DiagnosticCode::NonlinearLhs,
                format!("variable `{}` occurs more than once", v.name()),
                i,
                Side::Lhs,
                p,
            ));
        }
        lhs.visit(&mut |p, t| {
            let Term::App(c, args) = t else { return };
            if p.is_root() || !sig.get(*c).is_constructor() {
                return;
            }
            for (k, (a, s)) in args.iter().zip(sig.get(*c).arg_sorts()).enumerate() {
                if *s == Sort::Structure && !a.is_var() {
                    out.push(diag(
                        DiagnosticCode::StructUnderConstructor,
                        format!(
                            "structure argument {} of constructor `{}` is not a variable",
                            k + 1,
                            sig.name(*c)
                        ),
                        i,
                        Side::Lhs,
                        p.child(k + 1),
                    ));
                }
            }
        });
    }
    out
}

/// Checks every condition of a proper specification and collects one
/// diagnostic per violation.
pub fn validate_proper(spec: &Specification, opts: &ValidateOptions) -> ValidationReport {
    let mut diagnostics = structural_diagnostics(spec);
    let overlaps = detect_overlaps(spec.rules());
    let orthogonal = overlaps.is_empty() && spec.rules().iter().all(|r| r.is_left_linear());
    let data = data_constructor_analysis(spec);
    let mut report = ValidationReport {
        verdict: Validity::Proper,
        diagnostics: Vec::new(),
        orthogonal,
        overlaps,
        data,
        exhaustiveness: None,
        data_termination: None,
    };
    if !diagnostics.is_empty() {
        report.verdict = Validity::Improper;
        report.diagnostics = diagnostics;
        return report;
    }

    let mut unknown = false;
    let exhaustiveness = check_exhaustive(spec, &report.data);
    match &exhaustiveness {
        Exhaustiveness::Exhaustive => {}
        Exhaustiveness::Missing { symbol, witness } => diagnostics.push(Diagnostic {
            code: DiagnosticCode::NotExhaustive,
            message: format!(
                "no rule for `{}` matches {}",
                spec.signature().name(*symbol),
                spec.render(witness)
            ),
            location: Location::default(),
        }),
        Exhaustiveness::Unknown { .. } => unknown = true,
    }
    let termination = bounded_data_termination_check(
        spec,
        opts.data_depth_bound,
        opts.data_step_bound,
        opts.assume_data_terminating,
    );
    if let DataTermination::LoopFound { cycle, .. } = &termination {
        let first = &cycle[0];
        diagnostics.push(Diagnostic {
            code: DiagnosticCode::DataNontermination,
            message: format!(
                "data term {} rewrites back to itself",
                spec.render(&first.from)
            ),
            location: Location {
                rule: Some(first.rule),
                side: None,
                position: None,
            },
        });
    }
    report.exhaustiveness = Some(exhaustiveness);
    report.data_termination = Some(termination);
    report.verdict = if !diagnostics.is_empty() {
        Validity::Improper
    } else if unknown {
        Validity::Unknown
    } else {
        Validity::Proper
    };
    report.diagnostics = diagnostics;
    report
}

/// A specification together with its validation metadata. Obtained from
/// [`ProperSpec::validate`], or from [`ProperSpec::unchecked`] for raw systems
/// that analyses should run on regardless.
#[derive(Debug, Clone)]
pub struct ProperSpec {
    spec: Specification,
    report: ValidationReport,
}

impl ProperSpec {
    pub fn validate(
        spec: Specification,
        opts: &ValidateOptions,
    ) -> Result<ProperSpec, Box<ValidationReport>> {
        let report = validate_proper(&spec, opts);
        if report.verdict == Validity::Proper {
            Ok(ProperSpec { spec, report })
        } else {
            Err(Box::new(report))
        }
    }

    /// Skips the checks; metadata is still computed.
    pub fn unchecked(spec: Specification) -> ProperSpec {
        let overlaps = detect_overlaps(spec.rules());
        let orthogonal = overlaps.is_empty() && spec.rules().iter().all(|r| r.is_left_linear());
        let data = data_constructor_analysis(&spec);
        let report = ValidationReport {
            verdict: Validity::Unknown,
            diagnostics: structural_diagnostics(&spec),
            orthogonal,
            overlaps,
            data,
            exhaustiveness: None,
            data_termination: None,
        };
        ProperSpec { spec, report }
    }

    pub fn spec(&self) -> &Specification {
        &self.spec
    }

    pub fn report(&self) -> &ValidationReport {
        &self.report
    }

    pub fn orthogonal(&self) -> bool {
        self.report.orthogonal
    }

    pub fn data_constructors(&self) -> &[SymbolId] {
        &self.report.data.constructors
    }

    pub fn into_inner(self) -> Specification {
        self.spec
    }
}

impl Deref for ProperSpec {
    type Target = Specification;

    fn deref(&self) -> &Specification {
        &self.spec
    }
}
