//! Random valuation and problem generators for the property checkers and
//! the randomized test corpora.
//!
//! Everything here is driven by a caller-supplied seeded RNG, so suites are
//! reproducible. Real-valued semirings that feed exact set comparisons
//! (solution enumeration, argmax membership) are sampled from small integer
//! grids: their products and sums are then exact in `f64` regardless of how
//! partial results are grouped.

use std::sync::Arc;

use rand::distr::uniform::SampleUniform;
use rand::rngs::StdRng;
use rand::Rng;

use crate::config::VariableSystem;
use crate::dense::DenseTable;
use crate::domain::{Domain, Var};
use crate::scalar::Scalar;
use crate::semiring::Semiring;
use crate::sparse::SparsePotential;

/// A default variable system for randomized suites: variables `a`, `b`, ...
/// with frame sizes alternating between 2 and 3.
pub fn small_system(num_vars: usize) -> Arc<VariableSystem> {
    assert!(num_vars <= 26, "small_system supports at most 26 variables");
    let vars = (0..num_vars).map(|i| {
        let name = ((b'a' + i as u8) as char).to_string();
        (Var::new(name), 2 + i % 2)
    });
    Arc::new(VariableSystem::with_sizes(vars).expect("frames are nonempty"))
}

#[derive(Clone)]
enum Values<T> {
    Choice(Vec<T>),
    Range(T, T),
}

/// Generates dense tables with random scopes and values.
#[derive(Clone)]
pub struct TableSampler<T: Scalar> {
    system: Arc<VariableSystem>,
    semiring: Semiring,
    max_scope: usize,
    values: Values<T>,
}

impl<T: Scalar + SampleUniform> TableSampler<T> {
    pub fn with_choices(
        system: Arc<VariableSystem>,
        semiring: Semiring,
        max_scope: usize,
        pool: Vec<T>,
    ) -> Self {
        TableSampler { system, semiring, max_scope, values: Values::Choice(pool) }
    }

    pub fn with_range(
        system: Arc<VariableSystem>,
        semiring: Semiring,
        max_scope: usize,
        lo: T,
        hi: T,
    ) -> Self {
        TableSampler { system, semiring, max_scope, values: Values::Range(lo, hi) }
    }

    pub fn system(&self) -> &Arc<VariableSystem> {
        &self.system
    }

    pub fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn value(&self, rng: &mut StdRng) -> T {
        match &self.values {
            Values::Choice(pool) => pool[rng.random_range(0..pool.len())],
            Values::Range(lo, hi) => rng.random_range(*lo..*hi),
        }
    }

    pub fn sample(&self, rng: &mut StdRng) -> DenseTable<T> {
        let scope = random_scope(&self.system, self.max_scope, rng);
        let n = self.system.frame_count(&scope).expect("scope is in the system");
        let values = (0..n).map(|_| self.value(rng)).collect();
        DenseTable::new(self.system.clone(), self.semiring, scope, values)
            .expect("sampled values are in the carrier set")
    }

    /// Samples between one and `max_factors` tables.
    pub fn sample_factors(&self, max_factors: usize, rng: &mut StdRng) -> Vec<DenseTable<T>> {
        let n = rng.random_range(1..=max_factors);
        (0..n).map(|_| self.sample(rng)).collect()
    }
}

fn random_scope(system: &VariableSystem, max_scope: usize, rng: &mut StdRng) -> Domain {
    let universe: Vec<Var> = system.universe().iter().cloned().collect();
    let k = rng.random_range(0..=max_scope.min(universe.len()));
    rand::seq::index::sample(rng, universe.len(), k)
        .into_iter()
        .map(|i| universe[i].clone())
        .collect()
}

/// Boolean constraint tables with values in {0, 1}.
pub fn boolean_tables(num_vars: usize, max_scope: usize) -> TableSampler<i64> {
    TableSampler::with_choices(
        small_system(num_vars),
        Semiring::BooleanAndOr,
        max_scope,
        vec![0, 1],
    )
}

/// Integer-weight tables for max-plus or min-plus.
pub fn integer_weights(semiring: Semiring, num_vars: usize, max_scope: usize) -> TableSampler<i64> {
    TableSampler::with_choices(small_system(num_vars), semiring, max_scope, (-4..=9).collect())
}

/// Max-times tables with small integer-valued `f64` entries; products stay
/// exact, so argmax sets do not depend on evaluation order.
pub fn max_times_grid(num_vars: usize, max_scope: usize, allow_zero: bool) -> TableSampler<f64> {
    let lo = if allow_zero { 0 } else { 1 };
    TableSampler::with_choices(
        small_system(num_vars),
        Semiring::MaxTimes,
        max_scope,
        (lo..=6).map(f64::from).collect(),
    )
}

/// Max-times tables with continuous entries in `[0, 8)`; for checks that
/// compare values within a tolerance rather than sets.
pub fn max_times_real(num_vars: usize, max_scope: usize) -> TableSampler<f64> {
    TableSampler::with_range(small_system(num_vars), Semiring::MaxTimes, max_scope, 0.0, 8.0)
}

/// Generates sparse potentials with random supports.
#[derive(Clone)]
pub struct SparseSampler {
    system: Arc<VariableSystem>,
    max_scope: usize,
    keep_probability: f64,
    pool: Vec<f64>,
}

impl SparseSampler {
    pub fn new(num_vars: usize, max_scope: usize, keep_probability: f64) -> Self {
        Self::with_system(small_system(num_vars), max_scope, keep_probability)
    }

    pub fn with_system(
        system: Arc<VariableSystem>,
        max_scope: usize,
        keep_probability: f64,
    ) -> Self {
        SparseSampler {
            system,
            max_scope,
            keep_probability,
            pool: (1..=6).map(f64::from).collect(),
        }
    }

    pub fn system(&self) -> &Arc<VariableSystem> {
        &self.system
    }

    pub fn sample(&self, rng: &mut StdRng) -> SparsePotential<f64> {
        let scope = random_scope(&self.system, self.max_scope, rng);
        let mut entries = Vec::new();
        for cfg in self.system.enumerate(&scope).expect("scope is in the system") {
            if rng.random_bool(self.keep_probability) {
                entries.push((cfg, self.pool[rng.random_range(0..self.pool.len())]));
            }
        }
        SparsePotential::new(self.system.clone(), scope, entries)
            .expect("sampled entries are valid")
    }

    pub fn sample_factors(&self, max_factors: usize, rng: &mut StdRng) -> Vec<SparsePotential<f64>> {
        let n = rng.random_range(1..=max_factors);
        (0..n).map(|_| self.sample(rng)).collect()
    }
}
