//! Variable identifiers and domains.
//!
//! A [`Domain`] is a finite set of variables, an element of the power-set
//! lattice ordered by inclusion: join is union, meet is intersection and
//! the bottom element is the empty set. Variables are ordered by their
//! identifier; that order is the canonical order used for table layouts
//! and for deterministic tie-breaking everywhere in the crate.

use std::collections::BTreeSet;
use std::fmt;

/// A variable identifier.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var(String);

impl Var {
    pub fn new(name: impl Into<String>) -> Self {
        Var(name.into())
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Var {
    fn from(s: &str) -> Self {
        Var::new(s)
    }
}

/// A set of variables; an element of the power-set lattice.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Domain(BTreeSet<Var>);

impl Domain {
    /// The bottom element of the lattice.
    pub fn empty() -> Self {
        Domain(BTreeSet::new())
    }

    pub fn singleton(v: Var) -> Self {
        Domain(BTreeSet::from([v]))
    }

    /// Lattice join.
    pub fn union(&self, other: &Domain) -> Domain {
        Domain(self.0.union(&other.0).cloned().collect())
    }

    /// Lattice meet.
    pub fn intersection(&self, other: &Domain) -> Domain {
        Domain(self.0.intersection(&other.0).cloned().collect())
    }

    pub fn difference(&self, other: &Domain) -> Domain {
        Domain(self.0.difference(&other.0).cloned().collect())
    }

    /// Lattice order: `self` ≤ `other`.
    pub fn is_subset(&self, other: &Domain) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.0.contains(v)
    }

    pub fn insert(&mut self, v: Var) {
        self.0.insert(v);
    }

    /// Variables in canonical (identifier) order.
    pub fn iter(&self) -> impl Iterator<Item = &Var> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Var> for Domain {
    fn from_iter<I: IntoIterator<Item = Var>>(iter: I) -> Self {
        Domain(iter.into_iter().collect())
    }
}

impl<'a> FromIterator<&'a str> for Domain {
    fn from_iter<I: IntoIterator<Item = &'a str>>(iter: I) -> Self {
        Domain(iter.into_iter().map(Var::new).collect())
    }
}

impl fmt::Display for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl fmt::Debug for Domain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
