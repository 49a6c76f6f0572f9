//! Reader and printer for `.prodspec` files.
//!
//! ```text
//! # comment
//! data 0 : 0 ;
//! cons : : 1 1 ;
//! func n1 : s s d ;       # explicit argument sort profile
//! DATA-RULES { not(0) -> 1 ; }
//! RULES { f(0 : xs) -> f(xs) ; }
//! ```
//!
//! Identifiers that are not declared symbols are variables; their sorts are
//! inferred from the argument positions they occupy.

use std::collections::HashMap;
use std::fmt::{self, Write as _};

use serde::Serialize;
use thiserror::Error;

use crate::rewrite::{Rule, RuleError};
use crate::signature::{Signature, SignatureError, Sort, Symbol, SymbolId, SymbolRole};
use crate::spec::Specification;
use crate::term::Term;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum ParseErrorKind {
    Syntax,
    UnknownSymbol,
    Arity,
    SortConflict,
    DuplicateSymbol,
    InfixAmbiguous,
    InvalidRule,
}

impl ParseErrorKind {
    pub fn code(self) -> &'static str {
        match self {
            ParseErrorKind::Syntax => "SYNTAX",
            ParseErrorKind::UnknownSymbol => "UNKNOWN_SYMBOL",
            ParseErrorKind::Arity => "ARITY",
            ParseErrorKind::SortConflict => "SORT_CONFLICT",
            ParseErrorKind::DuplicateSymbol => "DUPLICATE_SYMBOL",
            ParseErrorKind::InfixAmbiguous => "INFIX_AMBIGUOUS",
            ParseErrorKind::InvalidRule => "INVALID_RULE",
        }
    }
}

/// 1-based line and column.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Serialize)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{span}: {} {message}", kind.code())]
pub struct ParseError {
    pub kind: ParseErrorKind,
    pub span: Span,
    pub message: String,
}

impl ParseError {
    fn new(kind: ParseErrorKind, span: Span, message: impl Into<String>) -> Self {
        ParseError {
            kind,
            span,
            message: message.into(),
        }
    }
}

/// A parsed file: the specification plus source locations of its items.
#[derive(Debug, Clone)]
pub struct SpecFile {
    pub spec: Specification,
    pub symbol_spans: Vec<Span>,
    pub rule_spans: Vec<Span>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    Ident(String),
    Colon,
    Semi,
    Comma,
    LParen,
    RParen,
    LBrace,
    RBrace,
    Arrow,
    DataRules,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Ident(s) => write!(f, "`{s}`"),
            Tok::Colon => f.write_str("`:`"),
            Tok::Semi => f.write_str("`;`"),
            Tok::Comma => f.write_str("`,`"),
            Tok::LParen => f.write_str("`(`"),
            Tok::RParen => f.write_str("`)`"),
            Tok::LBrace => f.write_str("`{`"),
            Tok::RBrace => f.write_str("`}`"),
            Tok::Arrow => f.write_str("`->`"),
            Tok::DataRules => f.write_str("`DATA-RULES`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

fn is_ident_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_' || c == '\''
}

fn lex(text: &str) -> Result<Vec<(Tok, Span)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut toks = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let span = Span { line, col };
        let mut advance = |n: usize, i: &mut usize| {
            *i += n;
            col += n;
        };
        match c {
            '\n' => {
                i += 1;
                line += 1;
                col = 1;
            }
            c if c.is_whitespace() => advance(1, &mut i),
            '#' => {
                while i < chars.len() && chars[i] != '\n' {
                    i += 1;
                }
            }
            ':' => {
                toks.push((Tok::Colon, span));
                advance(1, &mut i);
            }
            ';' => {
                toks.push((Tok::Semi, span));
                advance(1, &mut i);
            }
            ',' => {
                toks.push((Tok::Comma, span));
                advance(1, &mut i);
            }
            '(' => {
                toks.push((Tok::LParen, span));
                advance(1, &mut i);
            }
            ')' => {
                toks.push((Tok::RParen, span));
                advance(1, &mut i);
            }
            '{' => {
                toks.push((Tok::LBrace, span));
                advance(1, &mut i);
            }
            '}' => {
                toks.push((Tok::RBrace, span));
                advance(1, &mut i);
            }
            '-' if chars.get(i + 1) == Some(&'>') => {
                toks.push((Tok::Arrow, span));
                advance(2, &mut i);
            }
            c if is_ident_char(c) => {
                let start = i;
                while i < chars.len() && is_ident_char(chars[i]) {
                    i += 1;
                }
                let mut word: String = chars[start..i].iter().collect();
                col += i - start;
                let rest: String = chars[i..chars.len().min(i + 6)].iter().collect();
                if word == "DATA" && rest == "-RULES" {
                    i += 6;
                    col += 6;
                    word.clear();
                    toks.push((Tok::DataRules, span));
                    continue;
                }
                toks.push((Tok::Ident(word), span));
            }
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    span,
                    format!("unexpected character `{other}`"),
                ));
            }
        }
    }
    toks.push((Tok::Eof, Span { line, col }));
    Ok(toks)
}

/// Surface term before symbol resolution.
#[derive(Debug, Clone)]
enum Raw {
    Ident {
        name: String,
        args: Option<Vec<Raw>>,
        span: Span,
    },
    Infix {
        head: Box<Raw>,
        tail: Box<Raw>,
        span: Span,
    },
}

struct Parser {
    toks: Vec<(Tok, Span)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> Span {
        self.toks[self.pos].1
    }

    fn bump(&mut self) -> (Tok, Span) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expect(&mut self, want: Tok) -> Result<Span, ParseError> {
        let (tok, span) = self.bump();
        if tok == want {
            Ok(span)
        } else {
            Err(ParseError::new(
                ParseErrorKind::Syntax,
                span,
                format!("expected {want}, found {tok}"),
            ))
        }
    }

    fn ident(&mut self) -> Result<(String, Span), ParseError> {
        match self.bump() {
            (Tok::Ident(s), span) => Ok((s, span)),
            (tok, span) => Err(ParseError::new(
                ParseErrorKind::Syntax,
                span,
                format!("expected identifier, found {tok}"),
            )),
        }
    }

    fn section(
        &mut self,
        origin: Sort,
        out: &mut Vec<(Raw, Raw, Sort, Span)>,
    ) -> Result<(), ParseError> {
        self.expect(Tok::LBrace)?;
        while *self.peek() != Tok::RBrace {
            let span = self.span();
            let lhs = self.term()?;
            self.expect(Tok::Arrow)?;
            let rhs = self.term()?;
            self.expect(Tok::Semi)?;
            out.push((lhs, rhs, origin, span));
        }
        self.expect(Tok::RBrace)?;
        Ok(())
    }

    fn term(&mut self) -> Result<Raw, ParseError> {
        let head = self.atom()?;
        if *self.peek() == Tok::Colon {
            let span = self.bump().1;
            let tail = self.term()?;
            return Ok(Raw::Infix {
                head: Box::new(head),
                tail: Box::new(tail),
                span,
            });
        }
        Ok(head)
    }

    fn atom(&mut self) -> Result<Raw, ParseError> {
        if *self.peek() == Tok::LParen {
            self.bump();
            let t = self.term()?;
            self.expect(Tok::RParen)?;
            return Ok(t);
        }
        let (name, span) = self.ident()?;
        if *self.peek() != Tok::LParen {
            return Ok(Raw::Ident {
                name,
                args: None,
                span,
            });
        }
        self.bump();
        let mut args = Vec::new();
        if *self.peek() != Tok::RParen {
            loop {
                args.push(self.term()?);
                if *self.peek() == Tok::Comma {
                    self.bump();
                } else {
                    break;
                }
            }
        }
        self.expect(Tok::RParen)?;
        Ok(Raw::Ident {
            name,
            args: Some(args),
            span,
        })
    }
}

/// Resolves raw terms of one rule against the signature.
struct RuleScope<'a> {
    sig: &'a Signature,
    infix: Option<SymbolId>,
    vars: HashMap<String, (Sort, Span)>,
}

impl RuleScope<'_> {
    /// Records variable sorts demanded by argument positions.
    fn infer(&mut self, raw: &Raw, expected: Option<Sort>) -> Result<(), ParseError> {
        match raw {
            Raw::Infix { head, tail, span } => {
                if self.infix.is_none() {
                    return Err(ParseError::new(
                        ParseErrorKind::InfixAmbiguous,
                        *span,
                        "infix `:` needs exactly one constructor with profile (d, s)",
                    ));
                }
                self.infer(head, Some(Sort::Data))?;
                self.infer(tail, Some(Sort::Structure))
            }
            Raw::Ident { name, args, span } => match self.sig.lookup(name) {
                Some(id) => {
                    let sym = self.sig.get(id);
                    let args = args.as_deref().unwrap_or(&[]);
                    if args.len() != sym.arity() {
                        return Err(ParseError::new(
                            ParseErrorKind::Arity,
                            *span,
                            format!(
                                "`{name}` expects {} arguments, found {}",
                                sym.arity(),
                                args.len()
                            ),
                        ));
                    }
                    let sorts = sym.arg_sorts().to_vec();
                    for (a, s) in args.iter().zip(sorts) {
                        self.infer(a, Some(s))?;
                    }
                    Ok(())
                }
                None => {
                    if args.is_some() {
                        return Err(ParseError::new(
                            ParseErrorKind::UnknownSymbol,
                            *span,
                            format!("`{name}` is applied to arguments but not declared"),
                        ));
                    }
                    let Some(sort) = expected else { return Ok(()) };
                    match self.vars.get(name) {
                        Some((prev, _)) if *prev != sort => Err(ParseError::new(
                            ParseErrorKind::SortConflict,
                            *span,
                            format!("variable `{name}` used as both {prev} and {sort}"),
                        )),
                        Some(_) => Ok(()),
                        None => {
                            self.vars.insert(name.clone(), (sort, *span));
                            Ok(())
                        }
                    }
                }
            },
        }
    }

    fn sort_hint(&self, raw: &Raw) -> Option<Sort> {
        match raw {
            Raw::Infix { .. } => Some(Sort::Structure),
            Raw::Ident { name, .. } => match self.sig.lookup(name) {
                Some(id) => Some(self.sig.get(id).result_sort()),
                None => self.vars.get(name).map(|(s, _)| *s),
            },
        }
    }

    fn build(&self, raw: &Raw, expected: Option<Sort>) -> Result<Term, ParseError> {
        let (term, sort, span) = match raw {
            Raw::Infix { head, tail, span } => {
                let cons = self.infix.expect("checked during inference");
                let h = self.build(head, Some(Sort::Data))?;
                let t = self.build(tail, Some(Sort::Structure))?;
                (Term::app(cons, vec![h, t]), Sort::Structure, *span)
            }
            Raw::Ident { name, args, span } => match self.sig.lookup(name) {
                Some(id) => {
                    let sym = self.sig.get(id);
                    let args = args.as_deref().unwrap_or(&[]);
                    let built = args
                        .iter()
                        .zip(sym.arg_sorts())
                        .map(|(a, s)| self.build(a, Some(*s)))
                        .collect::<Result<Vec<_>, _>>()?;
                    (Term::app(id, built), sym.result_sort(), *span)
                }
                None => {
                    let Some((sort, _)) = self.vars.get(name) else {
                        return Err(ParseError::new(
                            ParseErrorKind::SortConflict,
                            *span,
                            format!("cannot infer the sort of variable `{name}`"),
                        ));
                    };
                    (Term::var(name, *sort), *sort, *span)
                }
            },
        };
        match expected {
            Some(e) if e != sort => Err(ParseError::new(
                ParseErrorKind::SortConflict,
                span,
                format!("expected a {e} term, found a {sort} term"),
            )),
            _ => Ok(term),
        }
    }
}

fn parse_profile(
    words: &[(String, Span)],
    role: SymbolRole,
    at: Span,
) -> Result<Vec<Sort>, ParseError> {
    if words
        .iter()
        .all(|(w, _)| w.chars().all(|c| c.is_ascii_digit()))
        && !words.is_empty()
    {
        let counts: Vec<usize> = words
            .iter()
            .map(|(w, s)| {
                w.parse()
                    .map_err(|_| ParseError::new(ParseErrorKind::Syntax, *s, "arity out of range"))
            })
            .collect::<Result<_, _>>()?;
        let (m, n) = match (role, counts.as_slice()) {
            (SymbolRole::Data, [m]) => (*m, 0),
            (SymbolRole::Constructor | SymbolRole::Defined, [m, n]) => (*m, *n),
            (SymbolRole::Data, _) => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    at,
                    "data declarations take one arity",
                ));
            }
            _ => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    at,
                    "structure declarations take two arities",
                ))
            }
        };
        let mut sorts = vec![Sort::Data; m];
        sorts.extend(std::iter::repeat_n(Sort::Structure, n));
        return Ok(sorts);
    }
    words
        .iter()
        .map(|(w, s)| match w.as_str() {
            "d" => Ok(Sort::Data),
            "s" => Ok(Sort::Structure),
            _ => Err(ParseError::new(
                ParseErrorKind::Syntax,
                *s,
                format!("expected arity or sort letter, found `{w}`"),
            )),
        })
        .collect()
}

pub fn parse_spec(text: &str) -> Result<SpecFile, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let mut sig = Signature::new();
    let mut symbol_spans = Vec::new();
    let mut raw_rules: Vec<(Raw, Raw, Sort, Span)> = Vec::new();

    loop {
        let (tok, span) = p.bump();
        match tok {
            Tok::Eof => break,
            Tok::Ident(kw) if kw == "data" || kw == "cons" || kw == "func" => {
                let role = match kw.as_str() {
                    "data" => SymbolRole::Data,
                    "cons" => SymbolRole::Constructor,
                    _ => SymbolRole::Defined,
                };
                // the infix constructor itself may be named `:`
                let (name, name_span) = if *p.peek() == Tok::Colon
                    && matches!(p.toks.get(p.pos + 1), Some((Tok::Colon, _)))
                {
                    let s = p.bump().1;
                    (":".to_string(), s)
                } else {
                    p.ident()?
                };
                p.expect(Tok::Colon)?;
                let mut words = Vec::new();
                while *p.peek() != Tok::Semi {
                    words.push(p.ident()?);
                }
                p.expect(Tok::Semi)?;
                let profile = parse_profile(&words, role, name_span)?;
                sig.add(Symbol::with_profile(name, profile, role))
                    .map_err(|e| match e {
                        SignatureError::Duplicate(_) => ParseError::new(
                            ParseErrorKind::DuplicateSymbol,
                            name_span,
                            e.to_string(),
                        ),
                        SignatureError::StructureArgOnData(_) => {
                            ParseError::new(ParseErrorKind::SortConflict, name_span, e.to_string())
                        }
                    })?;
                symbol_spans.push(span);
            }
            Tok::DataRules => p.section(Sort::Data, &mut raw_rules)?,
            Tok::Ident(kw) if kw == "RULES" => p.section(Sort::Structure, &mut raw_rules)?,
            other => {
                return Err(ParseError::new(
                    ParseErrorKind::Syntax,
                    span,
                    format!("expected a declaration or rule section, found {other}"),
                ));
            }
        }
    }

    let infix = sig.infix_constructor();
    let mut rules = Vec::new();
    let mut rule_spans = Vec::new();
    for (index, (lhs, rhs, origin, span)) in raw_rules.into_iter().enumerate() {
        let mut scope = RuleScope {
            sig: &sig,
            infix,
            vars: HashMap::new(),
        };
        scope.infer(&lhs, None)?;
        scope.infer(&rhs, None)?;
        // a bare variable on either side takes the sort of the other side
        let lsort = scope.sort_hint(&lhs);
        let rsort = scope.sort_hint(&rhs);
        if lsort.is_none() {
            if let Some(s) = rsort {
                scope.infer(&lhs, Some(s))?;
            }
        }
        if rsort.is_none() {
            if let Some(s) = lsort {
                scope.infer(&rhs, Some(s))?;
            }
        }
        let l = scope.build(&lhs, None)?;
        let r = scope.build(&rhs, None)?;
        let rule = Rule::new(l, r, origin, index).map_err(|e| match e {
            RuleError::VariableLhs | RuleError::UnboundVariable(_) => {
                ParseError::new(ParseErrorKind::InvalidRule, span, e.to_string())
            }
        })?;
        rules.push(rule);
        rule_spans.push(span);
    }
    Ok(SpecFile {
        spec: Specification::new(sig, rules),
        symbol_spans,
        rule_spans,
    })
}

/// Renders a specification in the input grammar; `parse_spec` reads it back
/// to an equal specification.
pub fn print_spec(spec: &Specification) -> String {
    let sig = spec.signature();
    let mut out = String::new();
    for (_, sym) in sig.iter() {
        let kw = match sym.role() {
            SymbolRole::Data => "data",
            SymbolRole::Constructor => "cons",
            SymbolRole::Defined => "func",
        };
        let profile = if !sym.is_data_first() {
            sym.arg_sorts()
                .iter()
                .map(|s| s.letter().to_string())
                .collect::<Vec<_>>()
                .join(" ")
        } else if sym.is_data() {
            sym.data_arity().to_string()
        } else {
            format!("{} {}", sym.data_arity(), sym.struct_arity())
        };
        let _ = writeln!(out, "{kw} {} : {profile} ;", sym.name());
    }
    let mut current: Option<Sort> = None;
    for rule in spec.rules() {
        if current != Some(rule.origin()) {
            if current.is_some() {
                out.push_str("}\n");
            }
            out.push_str(if rule.is_data_rule() {
                "DATA-RULES {\n"
            } else {
                "RULES {\n"
            });
            current = Some(rule.origin());
        }
        let _ = writeln!(
            out,
            "  {} -> {} ;",
            rule.lhs().display(sig),
            rule.rhs().display(sig)
        );
    }
    if current.is_some() {
        out.push_str("}\n");
    }
    out
}

/// Parses a single ground or open term against a signature, e.g. for the
/// simulator's `--term` argument. Variables need an inferable sort.
pub fn parse_term(sig: &Signature, text: &str) -> Result<Term, ParseError> {
    let mut p = Parser {
        toks: lex(text)?,
        pos: 0,
    };
    let raw = p.term()?;
    if *p.peek() != Tok::Eof {
        let (tok, span) = p.bump();
        return Err(ParseError::new(
            ParseErrorKind::Syntax,
            span,
            format!("unexpected {tok} after term"),
        ));
    }
    let mut scope = RuleScope {
        sig,
        infix: sig.infix_constructor(),
        vars: HashMap::new(),
    };
    scope.infer(&raw, None)?;
    scope.build(&raw, None)
}
