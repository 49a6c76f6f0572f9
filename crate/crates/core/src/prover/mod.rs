//! Deciding strong productivity: proofs, disproofs and their combination.

mod certificate;
mod interpretation;
mod unproductive;

use std::time::{Duration, Instant};

use serde::Serialize;

pub use certificate::{
    allowed_struct_redex_count, check_syntactic, interpretation_certificate, verify_certificate,
    CertificateCheck, Method, ProductivityCertificate, RuleCheck, RuleEvidence,
};
pub use interpretation::{
    rule_difference, search_interpretation, Interpretation, LinearFn, Poly, DEFAULT_MAX_COEFF,
    DEFAULT_MAX_CONST,
};
pub use unproductive::{
    fairness_evidence, find_unproductive_loop, verify_witness, FairnessEntry, Kill, StepPolicy,
    UnproductiveLoopWitness,
};

use crate::check::{validate_proper, ValidateOptions, ValidationReport, Validity};
use crate::cs::{find_cs_loop, start_terms, CsLoopWitness};
use crate::mu::{compute_mu_with, MuError, MuOptions, ReplacementMap};
use crate::spec::Specification;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProverOptions {
    pub validate: ValidateOptions,
    pub max_coeff: u32,
    pub max_const: u32,
    pub loop_steps: usize,
    pub loop_depth: usize,
    pub block_data_args: bool,
    pub step_policy: StepPolicy,
}

impl Default for ProverOptions {
    fn default() -> Self {
        ProverOptions {
            validate: ValidateOptions::default(),
            max_coeff: DEFAULT_MAX_COEFF,
            max_const: DEFAULT_MAX_CONST,
            loop_steps: crate::cs::DEFAULT_STEP_BOUND,
            loop_depth: crate::cs::DEFAULT_DEPTH_BOUND,
            block_data_args: false,
            step_policy: StepPolicy::OutermostOnly,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UnknownReason {
    /// Exhaustiveness could not be decided.
    ExhaustivenessUnknown,
    /// The μ-system does not terminate, so a termination proof is impossible.
    MuLoopFound,
    /// Every tier ran out of range or budget.
    BoundsExhausted,
}

impl UnknownReason {
    pub fn as_str(self) -> &'static str {
        match self {
            UnknownReason::ExhaustivenessUnknown => "exhaustiveness_unknown",
            UnknownReason::MuLoopFound => "mu_loop_found",
            UnknownReason::BoundsExhausted => "bounds_exhausted",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    StronglyProductive(ProductivityCertificate),
    NotStronglyProductive(UnproductiveLoopWitness),
    Unknown {
        reason: UnknownReason,
        cs_loop: Option<CsLoopWitness>,
        /// An external termination prover may still succeed on the export.
        export_offered: bool,
    },
    Improper,
}

impl Verdict {
    pub fn name(&self) -> &'static str {
        match self {
            Verdict::StronglyProductive(_) => "strongly_productive",
            Verdict::NotStronglyProductive(_) => "not_strongly_productive",
            Verdict::Unknown { .. } => "unknown",
            Verdict::Improper => "improper",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Analysis {
    pub verdict: Verdict,
    pub report: ValidationReport,
    /// Absent when validation failed.
    pub mu: Option<ReplacementMap>,
    pub timings: Vec<(&'static str, Duration)>,
}

/// Validation, then the syntactic criterion, interpretation search,
/// unproductive loop search and μ-loop search, stopping at the first
/// conclusive tier.
pub fn decide_productivity(
    spec: &Specification,
    opts: &ProverOptions,
) -> Result<Analysis, MuError> {
    let mut timings = Vec::new();
    let mut clock = Instant::now();
    let mut lap = |name: &'static str, timings: &mut Vec<(&'static str, Duration)>| {
        timings.push((name, clock.elapsed()));
        clock = Instant::now();
    };

    let mu = compute_mu_with(
        spec,
        MuOptions {
            block_data_args: opts.block_data_args,
        },
    )?;
    let report = validate_proper(spec, &opts.validate);
    lap("validate", &mut timings);
    match report.verdict {
        Validity::Improper => {
            return Ok(Analysis {
                verdict: Verdict::Improper,
                report,
                mu: None,
                timings,
            })
        }
        Validity::Unknown => {
            let verdict = Verdict::Unknown {
                reason: UnknownReason::ExhaustivenessUnknown,
                cs_loop: None,
                export_offered: false,
            };
            return Ok(Analysis {
                verdict,
                report,
                mu: None,
                timings,
            });
        }
        Validity::Proper => {}
    }
    let done = |verdict, report, mu, timings| {
        Ok(Analysis {
            verdict,
            report,
            mu: Some(mu),
            timings,
        })
    };

    if let Some(cert) = check_syntactic(spec) {
        lap("syntactic", &mut timings);
        return done(Verdict::StronglyProductive(cert), report, mu, timings);
    }
    lap("syntactic", &mut timings);

    if let Some(interp) = search_interpretation(spec, &mu, opts.max_coeff, opts.max_const) {
        lap("interpretation", &mut timings);
        let cert = interpretation_certificate(spec, interp);
        return done(Verdict::StronglyProductive(cert), report, mu, timings);
    }
    lap("interpretation", &mut timings);

    let starts = start_terms(spec, &report.data.constructors);
    if let Some(w) = find_unproductive_loop(
        spec,
        &starts,
        opts.loop_steps,
        opts.loop_depth,
        opts.step_policy,
    ) {
        lap("unproductive_loop", &mut timings);
        return done(Verdict::NotStronglyProductive(w), report, mu, timings);
    }
    lap("unproductive_loop", &mut timings);

    let cs_loop = find_cs_loop(spec, &mu, &starts, opts.loop_steps, opts.loop_depth);
    lap("mu_loop", &mut timings);
    let verdict = match cs_loop {
        Some(w) => Verdict::Unknown {
            reason: UnknownReason::MuLoopFound,
            cs_loop: Some(w),
            export_offered: false,
        },
        None => Verdict::Unknown {
            reason: UnknownReason::BoundsExhausted,
            cs_loop: None,
            export_offered: true,
        },
    };
    done(verdict, report, mu, timings)
}
