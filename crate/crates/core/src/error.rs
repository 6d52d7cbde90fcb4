//! Crate error type.

use std::fmt;

use crate::domain::{Domain, Var};
use crate::tree::NodeId;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Two valuations from different algebra instances were combined.
    InstanceMismatch { left: String, right: String },
    /// A projection or restriction target is not contained in the label.
    DomainNotContained { target: Domain, label: Domain, missing: Domain },
    /// A configuration was evaluated against a valuation of another scope.
    ScopeMismatch { expected: Domain, got: Domain },
    /// Two configurations assign different values to the same variable.
    IncompatibleConfigurations { var: Var },
    /// A variable is not declared in the variable system.
    UnknownVariable(Var),
    /// A labeled tree is malformed (disconnected, cyclic, no root, ...).
    Structure(String),
    /// Tree, factors and options do not fit together.
    Configuration(String),
    /// No tree node covers the queried domain.
    QueryDomain(Domain),
    /// An extension set came back empty during solution construction.
    NoSolution { node: NodeId },
    /// The brute-force oracle refuses state spaces above its cap.
    TooLarge { states: usize, cap: usize },
    /// An input value is outside the semiring's carrier set.
    InvalidValue(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InstanceMismatch { left, right } => {
                write!(f, "cannot combine valuations from different algebra instances: {left} vs {right}")
            }
            Error::DomainNotContained { target, label, missing } => {
                write!(f, "domain {target} is not contained in {label}; offending variables: {missing}")
            }
            Error::ScopeMismatch { expected, got } => {
                write!(f, "configuration scope {got} does not match valuation scope {expected}")
            }
            Error::IncompatibleConfigurations { var } => {
                write!(f, "configurations disagree on variable {var}")
            }
            Error::UnknownVariable(v) => write!(f, "unknown variable {v}"),
            Error::Structure(msg) => write!(f, "malformed tree: {msg}"),
            Error::Configuration(msg) => write!(f, "invalid configuration: {msg}"),
            Error::QueryDomain(d) => {
                write!(f, "no tree node covers query domain {d}; rebuild the tree with {d} forced into one clique")
            }
            Error::NoSolution { node } => {
                write!(f, "empty extension set at node {node}: the valuation has no solution")
            }
            Error::TooLarge { states, cap } => {
                write!(f, "state space of {states} configurations exceeds the oracle cap of {cap}")
            }
            Error::InvalidValue(msg) => write!(f, "invalid value: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
