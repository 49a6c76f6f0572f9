//! JSON rendering of analysis results.

use serde_json::{json, Map, Value};

use crate::check::{DataCompleteness, DataTermination, Exhaustiveness, ValidationReport};
use crate::cs::{CsLoopWitness, LoopKind};
use crate::mu::ReplacementMap;
use crate::prover::{Analysis, Method, ProductivityCertificate, UnproductiveLoopWitness, Verdict};
use crate::spec::{Specification, Step};

pub const SCHEMA_VERSION: u64 = 1;

fn steps(spec: &Specification, steps: &[Step]) -> Value {
    steps
        .iter()
        .map(|s| {
            json!({
                "from": spec.render(&s.from),
                "to": spec.render(&s.to),
                "position": s.position.to_string(),
                "rule": s.rule,
            })
        })
        .collect()
}

pub fn mu_json(spec: &Specification, mu: &ReplacementMap) -> Value {
    let sig = spec.signature();
    let map: Map<String, Value> = mu
        .iter()
        .map(|(f, idx)| (sig.name(f).to_string(), json!(idx)))
        .collect();
    Value::Object(map)
}

pub fn validation_json(spec: &Specification, report: &ValidationReport) -> Value {
    let diagnostics: Vec<Value> = report
        .diagnostics
        .iter()
        .map(|d| {
            json!({
                "code": d.code.as_str(),
                "message": d.message,
                "rule": d.location.rule,
                "side": d.location.side,
                "position": d.location.position.as_ref().map(|p| p.to_string()),
            })
        })
        .collect();
    let overlaps: Vec<Value> = report
        .overlaps
        .iter()
        .map(|o| json!({ "outer": o.outer, "inner": o.inner, "position": o.position.to_string() }))
        .collect();
    let exhaustive = report.exhaustiveness.as_ref().map(|e| match e {
        Exhaustiveness::Exhaustive => json!({ "status": "exhaustive" }),
        Exhaustiveness::Missing { symbol, witness } => json!({
            "status": "missing",
            "symbol": spec.signature().name(*symbol),
            "witness": spec.render(witness),
        }),
        Exhaustiveness::Unknown { reason } => json!({ "status": "unknown", "reason": reason }),
    });
    let data_termination = report.data_termination.as_ref().map(|d| match d {
        DataTermination::Assumed => json!({ "status": "assumed" }),
        DataTermination::BoundedOk => json!({ "status": "bounded_ok" }),
        DataTermination::LoopFound { prefix, cycle } => json!({
            "status": "loop_found",
            "prefix": steps(spec, prefix),
            "cycle": steps(spec, cycle),
        }),
    });
    let data_completeness = match &report.data.completeness {
        DataCompleteness::Complete => json!({ "status": "complete" }),
        DataCompleteness::Incomplete { symbol, witness } => json!({
            "status": "incomplete",
            "symbol": spec.signature().name(*symbol),
            "witness": spec.render(witness),
        }),
        DataCompleteness::Unknown { reason } => json!({ "status": "unknown", "reason": reason }),
    };
    let sig = spec.signature();
    json!({
        "validity": report.verdict,
        "diagnostics": diagnostics,
        "orthogonal": report.orthogonal,
        "overlaps": overlaps,
        "data_constructors": report.data.constructors.iter().map(|c| sig.name(*c)).collect::<Vec<_>>(),
        "data_completeness": data_completeness,
        "exhaustiveness": exhaustive,
        "data_termination": data_termination,
    })
}

fn certificate_json(spec: &Specification, cert: &ProductivityCertificate) -> Value {
    let evidence: Vec<Value> = cert
        .evidence
        .iter()
        .map(|e| json!({ "rule": e.rule, "detail": e.detail }))
        .collect();
    let mut out = json!({ "method": cert.method.name(), "evidence": evidence });
    if let Method::Interpretation(interp) = &cert.method {
        let sig = spec.signature();
        let functions: Map<String, Value> = sig
            .iter()
            .map(|(f, sym)| {
                let lf = interp.get(f);
                (
                    sym.name().to_string(),
                    json!({ "constant": lf.constant, "coeffs": lf.coeffs }),
                )
            })
            .collect();
        out["interpretation"] = json!({
            "max_coeff": interp.max_coeff,
            "max_const": interp.max_const,
            "functions": functions,
        });
    }
    out
}

fn witness_json(spec: &Specification, w: &UnproductiveLoopWitness) -> Value {
    let fairness: Vec<Value> = w
        .fairness
        .iter()
        .map(|f| {
            json!({
                "term": f.term,
                "position": f.position.to_string(),
                "rule": f.rule,
                "killed_by": f.killed_by,
                "kill": f.kill,
            })
        })
        .collect();
    json!({
        "start": spec.render(&w.start),
        "prefix": steps(spec, &w.prefix),
        "cycle": steps(spec, &w.cycle),
        "policy": w.policy,
        "fairness": fairness,
    })
}

pub fn cs_loop_json(spec: &Specification, w: &CsLoopWitness) -> Value {
    let (kind, position) = match &w.kind {
        LoopKind::ExactCycle => ("exact_cycle", None),
        LoopKind::SelfEmbedding { position } => ("self_embedding", Some(position.to_string())),
    };
    json!({
        "start": spec.render(&w.start),
        "prefix": steps(spec, &w.prefix),
        "cycle": steps(spec, &w.cycle),
        "kind": kind,
        "position": position,
    })
}

/// The full analysis as a JSON value. Keys are sorted.
pub fn analysis_json(spec: &Specification, analysis: &Analysis, include_timings: bool) -> Value {
    let mut out = json!({
        "schema_version": SCHEMA_VERSION,
        "verdict": analysis.verdict.name(),
        "validation": validation_json(spec, &analysis.report),
        "mu": analysis.mu.as_ref().map(|m| mu_json(spec, m)),
    });
    match &analysis.verdict {
        Verdict::StronglyProductive(cert) => {
            out["method"] = json!(cert.method.name());
            out["certificate"] = certificate_json(spec, cert);
        }
        Verdict::NotStronglyProductive(w) => {
            out["method"] = json!("unproductive_loop");
            out["witness"] = witness_json(spec, w);
        }
        Verdict::Unknown {
            reason,
            cs_loop,
            export_offered,
        } => {
            out["reason"] = json!(reason.as_str());
            out["export_offered"] = json!(export_offered);
            if let Some(w) = cs_loop {
                out["mu_loop"] = cs_loop_json(spec, w);
            }
        }
        Verdict::Improper => {
            let codes: Vec<&str> = analysis
                .report
                .diagnostics
                .iter()
                .map(|d| d.code.as_str())
                .collect();
            out["diagnostic_codes"] = json!(codes);
        }
    }
    if include_timings {
        let timings: Map<String, Value> = analysis
            .timings
            .iter()
            .map(|(name, d)| (name.to_string(), json!(d.as_secs_f64() * 1000.0)))
            .collect();
        out["timings_ms"] = Value::Object(timings);
    }
    out
}

pub fn report_json(spec: &Specification, analysis: &Analysis, include_timings: bool) -> String {
    let mut text = serde_json::to_string_pretty(&analysis_json(spec, analysis, include_timings))
        .expect("values always serialize");
    text.push('\n');
    text
}
