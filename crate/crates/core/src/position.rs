use std::fmt;

use serde::{Serialize, Serializer};

/// A path of 1-based argument indices from the root of a term.
///
/// The derived ordering is lexicographic with a prefix sorting before its
/// extensions, i.e. a pre-order walk of the term.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position(Vec<usize>);

impl Position {
    pub fn root() -> Self {
        Position(Vec::new())
    }

    pub fn from_indices(indices: impl Into<Vec<usize>>) -> Self {
        let indices = indices.into();
        debug_assert!(indices.iter().all(|i| *i >= 1), "positions are 1-based");
        Position(indices)
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_root(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        Position(v)
    }

    pub fn concat(&self, other: &Position) -> Self {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Position(v)
    }

    /// `self ≤ other` in the prefix order.
    pub fn is_prefix_of(&self, other: &Position) -> bool {
        other.0.starts_with(&self.0)
    }

    /// `self < other` in the prefix order.
    pub fn is_strict_prefix_of(&self, other: &Position) -> bool {
        self.0.len() < other.0.len() && self.is_prefix_of(other)
    }

    /// Neither position is a prefix of the other.
    pub fn is_parallel(&self, other: &Position) -> bool {
        !self.is_prefix_of(other) && !other.is_prefix_of(self)
    }

    /// The suffix `q` with `self = prefix.q`, if `prefix ≤ self`.
    pub fn strip_prefix(&self, prefix: &Position) -> Option<Position> {
        self.0
            .strip_prefix(prefix.0.as_slice())
            .map(|s| Position(s.to_vec()))
    }
}

impl fmt::Display for Position {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("ε");
        }
        for (k, i) in self.0.iter().enumerate() {
            if k > 0 {
                f.write_str(".")?;
            }
            write!(f, "{i}")?;
        }
        Ok(())
    }
}

impl Serialize for Position {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}
