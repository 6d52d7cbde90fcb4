//! Generic local computation over valuation algebras.
//!
//! The crate models problems as factorized valuations: pieces of
//! information with a domain label that can be combined and projected. On
//! top of that interface it provides
//!
//! - covering join tree construction (bucket elimination with min-degree,
//!   min-fill or user-given orders) and running-intersection checking,
//! - the collect pass computing marginals at every node,
//! - the extend pass constructing one optimal assignment, and a set-valued
//!   variant enumerating all of them,
//! - executable checkers for the algebra axioms, merge-friendliness,
//!   extension-family conditions and piecewise extensibility,
//! - a brute-force enumeration oracle everything is validated against,
//!   including a fixed fixture showing that the solution-set projection
//!   identity claimed in Pouly & Kohlas' *Generic Inference* (2011,
//!   Theorem 8.1) fails.
//!
//! Bundled instances: dense tables over the boolean, max-plus, min-plus
//! and max-times semirings, and sparse max-times potentials. Tables are
//! generic over the entry scalar; exact semirings typically use [`i64`],
//! real-valued ones [`f64`].

pub mod collect;
pub mod config;
pub mod dense;
pub mod domain;
pub mod error;
pub mod family;
pub mod oracle;
pub mod report;
pub mod sample;
pub mod scalar;
pub mod semiring;
pub mod solve;
pub mod sparse;
pub mod tree;
pub mod valuation;

pub use collect::{collect, query_marginal, CollectResult};
pub use config::{check_merge_friendly, merge, Configuration, ConfigurationSpace, VariableSystem};
pub use dense::DenseTable;
pub use domain::{Domain, Var};
pub use error::{Error, Result};
pub use family::{check_family, optimum_extensions};
pub use report::{Axiom, AxiomReport, PropertyReport};
pub use scalar::Scalar;
pub use semiring::Semiring;
pub use solve::{
    check_fully_piecewise_extensible, check_nary_lemmas, check_piecewise_extensible, extend,
    solve, solve_all, ExtendResult, Picker, Solution, SolutionSet, SOLUTION_CAP,
};
pub use sparse::SparsePotential;
pub use tree::{build_covering_join_tree, CoveringJoinTree, EliminationOrder, RipViolation};
pub use valuation::{check_axioms, Extensible, Ground, Valuation};

/// Dense table with real-valued entries.
pub type RealTable = DenseTable<f64>;
/// Dense table with exact integer entries.
pub type IntTable = DenseTable<i64>;
/// Sparse potential with real-valued entries.
pub type RealSparse = SparsePotential<f64>;

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn values_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<RealTable>();
        assert_send_sync::<IntTable>();
        assert_send_sync::<RealSparse>();
        assert_send_sync::<VariableSystem>();
        assert_send_sync::<CoveringJoinTree>();
    }
}
