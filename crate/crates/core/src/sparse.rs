//! Sparse max-times potentials.
//!
//! A sparse potential stores only its support: a finite map from
//! configurations of the scope to strictly positive values, every other
//! configuration evaluating to zero. Combination multiplies the values of
//! merge-compatible support pairs, projection keeps the maximum per
//! restriction. Entries that become zero are dropped, so potentials stay in
//! normal form.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::config::{Configuration, VariableSystem};
use crate::dense::DenseTable;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::family;
use crate::scalar::Scalar;
use crate::semiring::Semiring;
use crate::valuation::{Extensible, Ground, Valuation};

#[derive(Clone)]
pub struct SparsePotential<T: Scalar> {
    system: Arc<VariableSystem>,
    scope: Domain,
    entries: BTreeMap<Configuration, T>,
}

impl<T: Scalar> SparsePotential<T> {
    /// Builds a potential from `(configuration, value)` pairs. Keys must
    /// have exactly `scope` as their scope and values must be nonnegative;
    /// zero entries are dropped.
    pub fn new(
        system: Arc<VariableSystem>,
        scope: Domain,
        entries: impl IntoIterator<Item = (Configuration, T)>,
    ) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (cfg, value) in entries {
            if cfg.scope() != scope {
                return Err(Error::ScopeMismatch { expected: scope.clone(), got: cfg.scope() });
            }
            for (v, &idx) in cfg.iter() {
                if idx >= system.frame_size(v)? {
                    return Err(Error::InvalidValue(format!(
                        "value #{idx} out of range for variable {v}"
                    )));
                }
            }
            if value < T::zero() {
                return Err(Error::InvalidValue(format!(
                    "sparse potentials must be nonnegative, got {value}"
                )));
            }
            if value != T::zero() {
                map.insert(cfg, value);
            }
        }
        Ok(SparsePotential { system, scope, entries: map })
    }

    /// The support in deterministic order.
    pub fn entries(&self) -> impl Iterator<Item = (&Configuration, &T)> {
        self.entries.iter()
    }

    pub fn support_size(&self) -> usize {
        self.entries.len()
    }

    pub fn scope(&self) -> &Domain {
        &self.scope
    }

    /// Materializes the potential as a dense max-times table.
    pub fn to_dense(&self) -> Result<DenseTable<T>> {
        DenseTable::from_fn(self.system.clone(), Semiring::MaxTimes, self.scope.clone(), |cfg| {
            self.entries.get(cfg).copied().unwrap_or_else(T::zero)
        })
    }

    fn same_instance(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.system, &other.system) || self.system == other.system
    }
}

impl<T: Scalar> Valuation for SparsePotential<T> {
    fn label(&self) -> &Domain {
        &self.scope
    }

    fn combine(&self, other: &Self) -> Result<Self> {
        if !self.same_instance(other) {
            return Err(Error::InstanceMismatch {
                left: format!("sparse over {:?}", self.system),
                right: format!("sparse over {:?}", other.system),
            });
        }
        let scope = self.scope.union(&other.scope);
        let mut entries = BTreeMap::new();
        for (x, &a) in &self.entries {
            for (y, &b) in &other.entries {
                if let Ok(z) = x.merge_with(y) {
                    let v = a * b;
                    if v != T::zero() {
                        entries.insert(z, v);
                    }
                }
            }
        }
        Ok(SparsePotential { system: self.system.clone(), scope, entries })
    }

    fn project(&self, to: &Domain) -> Result<Self> {
        if !to.is_subset(&self.scope) {
            return Err(Error::DomainNotContained {
                target: to.clone(),
                label: self.scope.clone(),
                missing: to.difference(&self.scope),
            });
        }
        let mut entries: BTreeMap<Configuration, T> = BTreeMap::new();
        for (cfg, &value) in &self.entries {
            let key = cfg.restrict(to)?;
            entries
                .entry(key)
                .and_modify(|acc| *acc = Semiring::MaxTimes.aggregate(*acc, value))
                .or_insert(value);
        }
        Ok(SparsePotential { system: self.system.clone(), scope: to.clone(), entries })
    }

    fn unit_on(&self, dom: &Domain) -> Result<Self> {
        let entries = self
            .system
            .enumerate(dom)?
            .into_iter()
            .map(|cfg| (cfg, T::one()))
            .collect();
        Ok(SparsePotential { system: self.system.clone(), scope: dom.clone(), entries })
    }

    fn obs_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_instance(other)
            && self.scope == other.scope
            && self.entries.len() == other.entries.len()
            && self
                .entries
                .iter()
                .zip(&other.entries)
                .all(|((ca, va), (cb, vb))| ca == cb && va.close_to(*vb, tol))
    }
}

impl<T: Scalar> Ground for SparsePotential<T> {
    type Num = T;

    fn semiring(&self) -> Semiring {
        Semiring::MaxTimes
    }

    fn system(&self) -> &Arc<VariableSystem> {
        &self.system
    }

    fn eval(&self, z: &Configuration) -> Result<T> {
        if z.scope() != self.scope {
            return Err(Error::ScopeMismatch { expected: self.scope.clone(), got: z.scope() });
        }
        Ok(self.entries.get(z).copied().unwrap_or_else(T::zero))
    }
}

impl<T: Scalar> Extensible for SparsePotential<T> {
    fn extension_set(
        &self,
        partial: &Configuration,
    ) -> Result<std::collections::BTreeSet<Configuration>> {
        family::optimum_extensions(self, partial)
    }
}

impl<T: Scalar> fmt::Debug for SparsePotential<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "sparse[{} -> ", self.scope)?;
        for (i, (cfg, v)) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{cfg:?}: {v}")?;
        }
        write!(f, "]")
    }
}
