//! Two-sorted signatures.
//!
//! Every symbol has a result sort and an argument sort profile. Data symbols
//! take data arguments only; structure symbols take any mix of data and
//! structure arguments and are split into constructors and defined symbols.

use std::collections::HashMap;
use std::fmt;

use serde::Serialize;
use thiserror::Error;

/// The two sorts of a specification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Sort {
    Data,
    Structure,
}

impl Sort {
    pub fn letter(self) -> char {
        match self {
            Sort::Data => 'd',
            Sort::Structure => 's',
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Data => f.write_str("data"),
            Sort::Structure => f.write_str("structure"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SymbolRole {
    Data,
    Constructor,
    Defined,
}

/// Index of a symbol in its [`Signature`]; also its declaration order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SymbolId(pub u32);

impl SymbolId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Symbol {
    name: String,
    arg_sorts: Vec<Sort>,
    role: SymbolRole,
}

impl Symbol {
    /// A symbol whose data arguments precede its structure arguments.
    pub fn new(
        name: impl Into<String>,
        data_arity: usize,
        struct_arity: usize,
        role: SymbolRole,
    ) -> Self {
        let mut arg_sorts = vec![Sort::Data; data_arity];
        arg_sorts.extend(std::iter::repeat_n(Sort::Structure, struct_arity));
        Symbol {
            name: name.into(),
            arg_sorts,
            role,
        }
    }

    /// A symbol with an explicit argument sort profile, for declarations that
    /// interleave data and structure arguments.
    pub fn with_profile(name: impl Into<String>, arg_sorts: Vec<Sort>, role: SymbolRole) -> Self {
        Symbol {
            name: name.into(),
            arg_sorts,
            role,
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn role(&self) -> SymbolRole {
        self.role
    }

    pub fn arg_sorts(&self) -> &[Sort] {
        &self.arg_sorts
    }

    pub fn arity(&self) -> usize {
        self.arg_sorts.len()
    }

    pub fn data_arity(&self) -> usize {
        self.arg_sorts.iter().filter(|s| **s == Sort::Data).count()
    }

    pub fn struct_arity(&self) -> usize {
        self.arg_sorts
            .iter()
            .filter(|s| **s == Sort::Structure)
            .count()
    }

    pub fn result_sort(&self) -> Sort {
        match self.role {
            SymbolRole::Data => Sort::Data,
            SymbolRole::Constructor | SymbolRole::Defined => Sort::Structure,
        }
    }

    /// True when all data arguments come before all structure arguments.
    pub fn is_data_first(&self) -> bool {
        self.arg_sorts
            .windows(2)
            .all(|w| !(w[0] == Sort::Structure && w[1] == Sort::Data))
    }

    pub fn is_constructor(&self) -> bool {
        self.role == SymbolRole::Constructor
    }

    pub fn is_defined(&self) -> bool {
        self.role == SymbolRole::Defined
    }

    pub fn is_data(&self) -> bool {
        self.role == SymbolRole::Data
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SignatureError {
    #[error("duplicate symbol `{0}`")]
    Duplicate(String),
    #[error("data symbol `{0}` cannot take structure arguments")]
    StructureArgOnData(String),
}

#[derive(Debug, Clone, Default)]
pub struct Signature {
    symbols: Vec<Symbol>,
    by_name: HashMap<String, SymbolId>,
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, symbol: Symbol) -> Result<SymbolId, SignatureError> {
        if self.by_name.contains_key(symbol.name()) {
            return Err(SignatureError::Duplicate(symbol.name().to_string()));
        }
        if symbol.is_data() && symbol.struct_arity() > 0 {
            return Err(SignatureError::StructureArgOnData(
                symbol.name().to_string(),
            ));
        }
        let id = SymbolId(self.symbols.len() as u32);
        self.by_name.insert(symbol.name().to_string(), id);
        self.symbols.push(symbol);
        Ok(id)
    }

    pub fn get(&self, id: SymbolId) -> &Symbol {
        &self.symbols[id.index()]
    }

    pub fn lookup(&self, name: &str) -> Option<SymbolId> {
        self.by_name.get(name).copied()
    }

    pub fn name(&self, id: SymbolId) -> &str {
        self.get(id).name()
    }

    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Symbols in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (SymbolId, &Symbol)> + '_ {
        self.symbols
            .iter()
            .enumerate()
            .map(|(i, s)| (SymbolId(i as u32), s))
    }

    pub fn ids_with_role(&self, role: SymbolRole) -> impl Iterator<Item = SymbolId> + '_ {
        self.iter()
            .filter(move |(_, s)| s.role() == role)
            .map(|(id, _)| id)
    }

    pub fn constructors(&self) -> Vec<SymbolId> {
        self.ids_with_role(SymbolRole::Constructor).collect()
    }

    pub fn defined(&self) -> Vec<SymbolId> {
        self.ids_with_role(SymbolRole::Defined).collect()
    }

    pub fn data_symbols(&self) -> Vec<SymbolId> {
        self.ids_with_role(SymbolRole::Data).collect()
    }

    /// The unique constructor of profile `(d, s)`, written infix as `h : t`.
    pub fn infix_constructor(&self) -> Option<SymbolId> {
        let mut found = self
            .iter()
            .filter(|(_, s)| s.is_constructor() && s.arg_sorts() == [Sort::Data, Sort::Structure])
            .map(|(id, _)| id);
        let first = found.next()?;
        match found.next() {
            Some(_) => None,
            None => Some(first),
        }
    }
}
