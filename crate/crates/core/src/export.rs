//! Context-sensitive TRS export in the termination-competition format.

use std::collections::HashSet;
use std::fmt::Write;

use crate::mu::ReplacementMap;
use crate::spec::Specification;

pub fn export_csrs(spec: &Specification, mu: &ReplacementMap) -> String {
    let sig = spec.signature();
    let mut vars: Vec<String> = Vec::new();
    let mut seen = HashSet::new();
    for rule in spec.rules() {
        for t in [rule.lhs(), rule.rhs()] {
            for (_, v) in t.var_positions() {
                if seen.insert(v.name().to_string()) {
                    vars.push(v.name().to_string());
                }
            }
        }
    }

    let mut out = String::new();
    if vars.is_empty() {
        out.push_str("(VAR)\n");
    } else {
        writeln!(out, "(VAR {})", vars.join(" ")).unwrap();
    }
    out.push_str("(STRATEGY CONTEXTSENSITIVE\n");
    for (f, allowed) in mu.iter() {
        let mut entry = sig.name(f).to_string();
        for i in allowed {
            write!(entry, " {i}").unwrap();
        }
        writeln!(out, "  ({entry})").unwrap();
    }
    out.push_str(")\n(RULES\n");
    for rule in spec.rules() {
        writeln!(
            out,
            "  {} -> {}",
            rule.lhs().display_compact(sig),
            rule.rhs().display_compact(sig)
        )
        .unwrap();
    }
    out.push_str(")\n");
    out
}
