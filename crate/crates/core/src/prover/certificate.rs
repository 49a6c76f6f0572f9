use serde::Serialize;

use super::interpretation::{rule_difference, Interpretation};
use crate::mu::ReplacementMap;
use crate::signature::Sort;
use crate::spec::Specification;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Method {
    /// Every structure rule has a constructor-rooted right-hand side.
    Syntactic,
    /// All rules decrease strictly under a μ-monotone interpretation.
    Interpretation(Interpretation),
}

impl Method {
    pub fn name(&self) -> &'static str {
        match self {
            Method::Syntactic => "syntactic",
            Method::Interpretation(_) => "interpretation",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleEvidence {
    pub rule: usize,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProductivityCertificate {
    pub method: Method,
    pub evidence: Vec<RuleEvidence>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RuleCheck {
    pub rule: usize,
    pub ok: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CertificateCheck {
    pub passed: bool,
    pub rules: Vec<RuleCheck>,
    /// The first violated rule or constraint.
    pub failure: Option<String>,
}

pub fn check_syntactic(spec: &Specification) -> Option<ProductivityCertificate> {
    let mut evidence = Vec::new();
    for (i, rule) in spec.struct_rules() {
        let root = rule.rhs().root().filter(|f| spec.is_constructor(*f))?;
        evidence.push(RuleEvidence {
            rule: i,
            detail: format!("rhs root {}", spec.signature().name(root)),
        });
    }
    Some(ProductivityCertificate {
        method: Method::Syntactic,
        evidence,
    })
}

pub fn interpretation_certificate(
    spec: &Specification,
    interp: Interpretation,
) -> ProductivityCertificate {
    let evidence = (0..spec.rules().len())
        .map(|i| RuleEvidence {
            rule: i,
            detail: format!("[l] - [r] = {}", rule_difference(spec, &interp, i)),
        })
        .collect();
    ProductivityCertificate {
        method: Method::Interpretation(interp),
        evidence,
    }
}

/// Recomputes the certificate's claims from scratch.
pub fn verify_certificate(
    spec: &Specification,
    mu: &ReplacementMap,
    cert: &ProductivityCertificate,
) -> CertificateCheck {
    let mut rules = Vec::new();
    let mut failure = None;
    match &cert.method {
        Method::Syntactic => {
            for (i, rule) in spec.struct_rules() {
                let ok = rule.rhs().root().is_some_and(|f| spec.is_constructor(f));
                let detail = match rule.rhs().root() {
                    Some(f) => format!("rhs root {}", spec.signature().name(f)),
                    None => "rhs is a variable".to_string(),
                };
                if !ok && failure.is_none() {
                    failure = Some(format!(
                        "rule {i} ({}): rhs root is not a constructor",
                        spec.render_rule(i)
                    ));
                }
                rules.push(RuleCheck {
                    rule: i,
                    ok,
                    detail,
                });
            }
        }
        Method::Interpretation(interp) => {
            let sig = spec.signature();
            if interp.functions.len() != sig.len() {
                failure = Some(format!(
                    "{} functions for {} symbols",
                    interp.functions.len(),
                    sig.len()
                ));
            } else {
                for (f, sym) in sig.iter() {
                    let lf = interp.get(f);
                    let problem = if lf.coeffs.len() != sym.arity() {
                        Some(format!(
                            "[{}] has {} coefficients, arity is {}",
                            sym.name(),
                            lf.coeffs.len(),
                            sym.arity()
                        ))
                    } else if let Some(&i) = mu.get(f).iter().find(|&&i| lf.coeffs[i - 1] == 0) {
                        Some(format!(
                            "[{}] is not monotone in allowed argument {i}",
                            sym.name()
                        ))
                    } else if lf.constant > interp.max_const
                        || lf.coeffs.iter().any(|c| *c > interp.max_coeff)
                    {
                        Some(format!("[{}] is outside the recorded ranges", sym.name()))
                    } else {
                        None
                    };
                    if problem.is_some() {
                        failure = problem;
                        break;
                    }
                }
            }
            if failure.is_none() {
                for i in 0..spec.rules().len() {
                    let diff = rule_difference(spec, interp, i);
                    let ok = diff.is_strictly_positive();
                    if !ok && failure.is_none() {
                        failure = Some(format!(
                            "rule {i} ({}): [l] - [r] = {diff} is not strictly positive",
                            spec.render_rule(i)
                        ));
                    }
                    rules.push(RuleCheck {
                        rule: i,
                        ok,
                        detail: format!("[l] - [r] = {diff}"),
                    });
                }
            }
        }
    }
    CertificateCheck {
        passed: failure.is_none(),
        rules,
        failure,
    }
}

/// Number of positions that are allowed by `mu` and hold a structure-sort
/// redex.
pub fn allowed_struct_redex_count(
    spec: &Specification,
    mu: &ReplacementMap,
    t: &crate::term::Term,
) -> usize {
    let sig = spec.signature();
    let mut n = 0;
    mu.walk_allowed(t, &mut Vec::new(), &mut |_, sub| {
        if let Some(f) = sub.root() {
            if sig.get(f).result_sort() == Sort::Structure && spec.is_redex(sub) {
                n += 1;
            }
        }
    });
    n
}
