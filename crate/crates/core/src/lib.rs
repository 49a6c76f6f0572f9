//! Strong productivity analysis for two-sorted term rewrite specifications.

pub mod check;
pub mod cs;
pub mod export;
pub mod mu;
pub mod parse;
pub mod position;
pub mod prover;
pub mod report;
pub mod rewrite;
pub mod signature;
pub mod sim;
pub mod spec;
pub mod term;

pub use check::{
    validate_proper, Diagnostic, DiagnosticCode, ProperSpec, ValidateOptions, ValidationReport,
    Validity,
};
pub use cs::{
    find_cs_loop, mu_redexes, mu_rewrite_step, start_terms, CsError, CsLoopWitness, LoopKind,
};
pub use export::export_csrs;
pub use mu::{compute_mu, compute_mu_with, MuError, MuOptions, ReplacementMap};
pub use parse::{parse_spec, parse_term, print_spec, ParseError, SpecFile};
pub use position::Position;
pub use prover::{
    check_syntactic, decide_productivity, find_unproductive_loop, search_interpretation,
    verify_certificate, Analysis, Interpretation, Method, ProductivityCertificate, ProverOptions,
    StepPolicy, UnknownReason, UnproductiveLoopWitness, Verdict,
};
pub use report::report_json;
pub use rewrite::{
    apply_subst, find_redexes, match_term, matches, rewrite_at, Redex, Rule, Substitution,
};
pub use signature::{Signature, Sort, Symbol, SymbolId, SymbolRole};
pub use sim::{
    eval_prefix, parallel_outermost_round, PrefixResult, RuleChooser, SeededChooser, SimError,
};
pub use spec::{Specification, Step};
pub use term::{Term, Var};
