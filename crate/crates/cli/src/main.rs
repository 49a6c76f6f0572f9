use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use prodcheck::check::{DataTermination, Exhaustiveness};
use prodcheck::cs::LoopKind;
use prodcheck::prover::{verify_certificate, Method};
use prodcheck::sim::{default_max_rounds, stream_values};
use prodcheck::{
    compute_mu_with, decide_productivity, eval_prefix, export_csrs, parse_spec, parse_term,
    report_json, validate_proper, MuOptions, ProverOptions, SeededChooser, SimError, Specification,
    Step, ValidateOptions, ValidationReport, Validity, Verdict,
};

const EXIT_OK: u8 = 0;
const EXIT_NOT_PRODUCTIVE: u8 = 1;
const EXIT_UNKNOWN: u8 = 2;
const EXIT_USAGE: u8 = 64;
const EXIT_PARSE: u8 = 65;
const EXIT_IMPROPER: u8 = 66;
const EXIT_IO: u8 = 74;

#[derive(Parser)]
#[command(
    name = "prodcheck",
    version,
    about = "Strong productivity checker for stream specifications"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check that a specification is proper.
    Validate {
        file: PathBuf,
        #[arg(long)]
        assume_data_terminating: bool,
    },
    /// Print the replacement map.
    Mu {
        file: PathBuf,
        #[arg(long)]
        block_data_args: bool,
    },
    /// Decide strong productivity.
    Check {
        file: PathBuf,
        #[arg(long, default_value_t = prodcheck::prover::DEFAULT_MAX_COEFF)]
        max_coeff: u32,
        #[arg(long, default_value_t = prodcheck::prover::DEFAULT_MAX_CONST)]
        max_const: u32,
        #[arg(long, default_value_t = prodcheck::cs::DEFAULT_STEP_BOUND)]
        loop_steps: usize,
        #[arg(long, default_value_t = prodcheck::cs::DEFAULT_DEPTH_BOUND)]
        loop_depth: usize,
        #[arg(long)]
        assume_data_terminating: bool,
        #[arg(long)]
        block_data_args: bool,
        #[arg(long)]
        json: bool,
        /// Include stage timings in the JSON report.
        #[arg(long, requires = "json")]
        timings: bool,
    },
    /// Write the context-sensitive TRS for external termination provers.
    Export {
        file: PathBuf,
        #[arg(short = 'o', long = "output")]
        output: PathBuf,
        #[arg(long)]
        block_data_args: bool,
    },
    /// Evaluate a constructor prefix of a ground term.
    Simulate {
        file: PathBuf,
        #[arg(long)]
        term: String,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        max_rounds: Option<usize>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("prodcheck: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn load(path: &Path) -> Result<Specification, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_IO, format!("cannot read {}: {e}", path.display())))?;
    parse_spec(&text)
        .map(|f| f.spec)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}:{e}", path.display())))
}

fn run(command: Command) -> Result<u8, Failure> {
    match command {
        Command::Validate {
            file,
            assume_data_terminating,
        } => {
            let spec = load(&file)?;
            let opts = ValidateOptions {
                assume_data_terminating,
                ..ValidateOptions::default()
            };
            let report = validate_proper(&spec, &opts);
            print!("{}", describe_validation(&spec, &report));
            Ok(match report.verdict {
                Validity::Proper => EXIT_OK,
                Validity::Improper => EXIT_IMPROPER,
                Validity::Unknown => EXIT_UNKNOWN,
            })
        }
        Command::Mu {
            file,
            block_data_args,
        } => {
            let spec = load(&file)?;
            let mu = compute_mu_with(&spec, MuOptions { block_data_args })
                .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            print!("{}", mu.render(spec.signature()));
            Ok(EXIT_OK)
        }
        Command::Check {
            file,
            max_coeff,
            max_const,
            loop_steps,
            loop_depth,
            assume_data_terminating,
            block_data_args,
            json,
            timings,
        } => {
            let spec = load(&file)?;
            let opts = ProverOptions {
                validate: ValidateOptions {
                    assume_data_terminating,
                    ..ValidateOptions::default()
                },
                max_coeff,
                max_const,
                loop_steps,
                loop_depth,
                block_data_args,
                ..ProverOptions::default()
            };
            let analysis = decide_productivity(&spec, &opts)
                .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            if json {
                print!("{}", report_json(&spec, &analysis, timings));
            } else {
                print!("{}", describe_analysis(&spec, &analysis));
            }
            Ok(match analysis.verdict {
                Verdict::StronglyProductive(_) => EXIT_OK,
                Verdict::NotStronglyProductive(_) => EXIT_NOT_PRODUCTIVE,
                Verdict::Unknown { .. } => EXIT_UNKNOWN,
                Verdict::Improper => EXIT_IMPROPER,
            })
        }
        Command::Export {
            file,
            output,
            block_data_args,
        } => {
            let spec = load(&file)?;
            let report = validate_proper(&spec, &ValidateOptions::default());
            if report.verdict == Validity::Improper {
                eprint!("{}", describe_validation(&spec, &report));
                return Err(Failure::new(
                    EXIT_IMPROPER,
                    "refusing to export an improper specification",
                ));
            }
            let mu = compute_mu_with(&spec, MuOptions { block_data_args })
                .map_err(|e| Failure::new(EXIT_USAGE, e.to_string()))?;
            std::fs::write(&output, export_csrs(&spec, &mu)).map_err(|e| {
                Failure::new(EXIT_IO, format!("cannot write {}: {e}", output.display()))
            })?;
            Ok(EXIT_OK)
        }
        Command::Simulate {
            file,
            term,
            depth,
            seed,
            max_rounds,
        } => {
            let spec = load(&file)?;
            let report = validate_proper(&spec, &ValidateOptions::default());
            if report.verdict == Validity::Improper {
                eprint!("{}", describe_validation(&spec, &report));
                return Err(Failure::new(
                    EXIT_IMPROPER,
                    "cannot simulate an improper specification",
                ));
            }
            let t = parse_term(spec.signature(), &term)
                .map_err(|e| Failure::new(EXIT_PARSE, format!("--term:{e}")))?;
            let max_rounds = max_rounds.unwrap_or_else(|| default_max_rounds(&spec, depth));
            match eval_prefix(&spec, &t, depth, &mut SeededChooser::new(seed), max_rounds) {
                Ok(r) => {
                    println!("prefix: {}", spec.render(&r.term));
                    let values: Vec<String> = stream_values(&spec, &r.term)
                        .iter()
                        .map(|v| spec.render(v))
                        .collect();
                    if !values.is_empty() {
                        println!("values: {}", values.join(" "));
                    }
                    println!("rounds: {}", r.rounds_used);
                    println!("contractions: {}", r.choice_log.len());
                    Ok(EXIT_OK)
                }
                Err(SimError::InvalidTerm) => Err(Failure::new(
                    EXIT_USAGE,
                    "--term must be a ground term of structure sort",
                )),
                Err(e) => {
                    if let SimError::BudgetExceeded { last, .. } | SimError::Stuck { last, .. } = &e
                    {
                        println!("last term: {}", spec.render(last));
                    }
                    eprintln!("prodcheck: {e}");
                    Ok(EXIT_UNKNOWN)
                }
            }
        }
    }
}

fn describe_validation(spec: &Specification, report: &ValidationReport) -> String {
    let mut out = String::new();
    let verdict = match report.verdict {
        Validity::Proper => "proper",
        Validity::Improper => "improper",
        Validity::Unknown => "unknown",
    };
    writeln!(out, "specification: {verdict}").unwrap();
    for d in &report.diagnostics {
        let mut loc = String::new();
        if let Some(r) = d.location.rule {
            write!(loc, " rule {r}").unwrap();
        }
        if let Some(side) = d.location.side {
            write!(
                loc,
                " {}",
                if side == prodcheck::check::Side::Lhs {
                    "lhs"
                } else {
                    "rhs"
                }
            )
            .unwrap();
        }
        if let Some(p) = &d.location.position {
            write!(loc, " at {p}").unwrap();
        }
        writeln!(out, "  {}{loc}: {}", d.code.as_str(), d.message).unwrap();
    }
    writeln!(out, "orthogonal: {}", report.orthogonal).unwrap();
    match &report.exhaustiveness {
        Some(Exhaustiveness::Exhaustive) => writeln!(out, "exhaustive: yes").unwrap(),
        Some(Exhaustiveness::Missing { witness, .. }) => {
            writeln!(out, "exhaustive: no, missing {}", spec.render(witness)).unwrap()
        }
        Some(Exhaustiveness::Unknown { reason }) => {
            writeln!(out, "exhaustive: unknown ({reason})").unwrap()
        }
        None => {}
    }
    match &report.data_termination {
        Some(DataTermination::Assumed) => writeln!(out, "data termination: assumed").unwrap(),
        Some(DataTermination::BoundedOk) => {
            writeln!(out, "data termination: no loop within bounds").unwrap()
        }
        Some(DataTermination::LoopFound { .. }) => {
            writeln!(out, "data termination: loop found").unwrap()
        }
        None => {}
    }
    out
}

fn write_steps(out: &mut String, spec: &Specification, steps: &[Step]) {
    for s in steps {
        writeln!(
            out,
            "    {} -> {}   [rule {} at {}]",
            spec.render(&s.from),
            spec.render(&s.to),
            s.rule,
            s.position
        )
        .unwrap();
    }
}

fn describe_analysis(spec: &Specification, analysis: &prodcheck::Analysis) -> String {
    let mut out = String::new();
    writeln!(out, "verdict: {}", analysis.verdict.name()).unwrap();
    match &analysis.verdict {
        Verdict::StronglyProductive(cert) => {
            writeln!(out, "method: {}", cert.method.name()).unwrap();
            if let Method::Interpretation(interp) = &cert.method {
                for line in interp.render(spec.signature()).lines() {
                    writeln!(out, "    {line}").unwrap();
                }
            }
            for e in &cert.evidence {
                writeln!(
                    out,
                    "  rule {} ({}): {}",
                    e.rule,
                    spec.render_rule(e.rule),
                    e.detail
                )
                .unwrap();
            }
            let mu = analysis
                .mu
                .as_ref()
                .expect("proper specifications have a map");
            let check = verify_certificate(spec, mu, cert);
            writeln!(
                out,
                "certificate: {}",
                if check.passed {
                    "verified"
                } else {
                    "FAILED verification"
                }
            )
            .unwrap();
        }
        Verdict::NotStronglyProductive(w) => {
            writeln!(
                out,
                "unproductive outermost-fair cycle from {}",
                spec.render(&w.start)
            )
            .unwrap();
            if !w.prefix.is_empty() {
                writeln!(out, "  prefix:").unwrap();
                write_steps(&mut out, spec, &w.prefix);
            }
            writeln!(out, "  cycle:").unwrap();
            write_steps(&mut out, spec, &w.cycle);
        }
        Verdict::Unknown {
            reason,
            cs_loop,
            export_offered,
        } => {
            writeln!(out, "reason: {}", reason.as_str()).unwrap();
            if let Some(w) = cs_loop {
                let kind = match &w.kind {
                    LoopKind::ExactCycle => "cycle".to_string(),
                    LoopKind::SelfEmbedding { position } => format!("self-embedding at {position}"),
                };
                writeln!(
                    out,
                    "mu-nontermination witness ({kind}) from {}",
                    spec.render(&w.start)
                )
                .unwrap();
                writeln!(
                    out,
                    "  termination of the context-sensitive system cannot be used here"
                )
                .unwrap();
                if !w.prefix.is_empty() {
                    writeln!(out, "  prefix:").unwrap();
                    write_steps(&mut out, spec, &w.prefix);
                }
                writeln!(out, "  loop:").unwrap();
                write_steps(&mut out, spec, &w.cycle);
            }
            if *export_offered {
                writeln!(out, "hint: `prodcheck export` writes the context-sensitive TRS for an external prover")
                    .unwrap();
            }
        }
        Verdict::Improper => out.push_str(&describe_validation(spec, &analysis.report)),
    }
    out
}
