//! Dense table valuations over an ordered semiring.
//!
//! A table stores one entry per configuration of its scope, variables in
//! canonical order with the last one varying fastest. Combination and
//! projection are the semiring's multiplication and aggregation.

use std::fmt;
use std::sync::Arc;

use crate::config::{Configuration, VariableSystem};
use crate::domain::{Domain, Var};
use crate::error::{Error, Result};
use crate::family;
use crate::scalar::Scalar;
use crate::semiring::Semiring;
use crate::valuation::{Extensible, Ground, Valuation};

/// Row-major index arithmetic for one scope.
#[derive(Clone)]
pub(crate) struct Layout {
    vars: Vec<Var>,
    sizes: Vec<usize>,
    strides: Vec<usize>,
}

impl Layout {
    pub(crate) fn new(system: &VariableSystem, scope: &Domain) -> Result<Layout> {
        let vars: Vec<Var> = scope.iter().cloned().collect();
        let sizes: Vec<usize> = vars
            .iter()
            .map(|v| system.frame_size(v))
            .collect::<Result<_>>()?;
        let mut strides = vec![1usize; vars.len()];
        for i in (0..vars.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * sizes[i + 1];
        }
        Ok(Layout { vars, sizes, strides })
    }

    pub(crate) fn len(&self) -> usize {
        self.sizes.iter().product()
    }

    /// Stride of `v` in this layout, `None` when `v` is not in scope.
    fn stride_of(&self, v: &Var) -> Option<usize> {
        self.vars.iter().position(|w| w == v).map(|i| self.strides[i])
    }

    pub(crate) fn index_of(&self, cfg: &Configuration) -> Result<usize> {
        let mut idx = 0;
        for ((v, size), stride) in self.vars.iter().zip(&self.sizes).zip(&self.strides) {
            let digit = cfg
                .get(v)
                .ok_or_else(|| Error::UnknownVariable(v.clone()))?;
            if digit >= *size {
                return Err(Error::InvalidValue(format!(
                    "value #{digit} out of range for variable {v} (frame size {size})"
                )));
            }
            idx += digit * stride;
        }
        Ok(idx)
    }

    pub(crate) fn config_at(&self, mut idx: usize) -> Configuration {
        Configuration::new(
            self.vars
                .iter()
                .zip(&self.sizes)
                .zip(&self.strides)
                .map(|((v, size), stride)| {
                    let digit = (idx / stride) % size;
                    idx %= stride;
                    (v.clone(), digit)
                })
                .collect::<Vec<_>>(),
        )
    }

    /// Iterates the mixed-radix digit vectors of all configurations in
    /// layout order.
    fn digits(&self) -> DigitIter<'_> {
        DigitIter { sizes: &self.sizes, digits: vec![0; self.sizes.len()], remaining: self.len() }
    }
}

struct DigitIter<'a> {
    sizes: &'a [usize],
    digits: Vec<usize>,
    remaining: usize,
}

impl DigitIter<'_> {
    fn next_digits(&mut self) -> Option<&[usize]> {
        if self.remaining == 0 {
            return None;
        }
        self.remaining -= 1;
        Some(&self.digits)
    }

    fn advance(&mut self) {
        for pos in (0..self.digits.len()).rev() {
            self.digits[pos] += 1;
            if self.digits[pos] < self.sizes[pos] {
                return;
            }
            self.digits[pos] = 0;
        }
    }
}

/// A valuation represented as a dense table over its scope's frame.
#[derive(Clone)]
pub struct DenseTable<T: Scalar> {
    system: Arc<VariableSystem>,
    semiring: Semiring,
    scope: Domain,
    values: Vec<T>,
}

impl<T: Scalar> DenseTable<T> {
    /// Builds a table from values in layout order (canonical variable
    /// order, last variable fastest). Checks the length and that every
    /// value lies in the semiring's carrier set.
    pub fn new(
        system: Arc<VariableSystem>,
        semiring: Semiring,
        scope: Domain,
        values: Vec<T>,
    ) -> Result<Self> {
        let layout = Layout::new(&system, &scope)?;
        if values.len() != layout.len() {
            return Err(Error::InvalidValue(format!(
                "table over {scope} needs {} entries, got {}",
                layout.len(),
                values.len()
            )));
        }
        for v in &values {
            semiring.check_value(*v).map_err(Error::InvalidValue)?;
        }
        Ok(DenseTable { system, semiring, scope, values })
    }

    /// Builds a table by evaluating `f` at every configuration of `scope`.
    pub fn from_fn(
        system: Arc<VariableSystem>,
        semiring: Semiring,
        scope: Domain,
        mut f: impl FnMut(&Configuration) -> T,
    ) -> Result<Self> {
        let layout = Layout::new(&system, &scope)?;
        let values = (0..layout.len()).map(|i| f(&layout.config_at(i))).collect();
        DenseTable::new(system, semiring, scope, values)
    }

    /// The neutral table over `scope`: every entry is the semiring unit.
    pub fn unit(system: Arc<VariableSystem>, semiring: Semiring, scope: Domain) -> Result<Self> {
        let n = system.frame_count(&scope)?;
        Ok(DenseTable { system, semiring, scope, values: vec![semiring.unit(); n] })
    }

    pub fn values(&self) -> &[T] {
        &self.values
    }

    pub fn scope(&self) -> &Domain {
        &self.scope
    }

    fn layout(&self) -> Layout {
        Layout::new(&self.system, &self.scope).expect("scope was validated at construction")
    }

    fn same_instance(&self, other: &Self) -> bool {
        self.semiring == other.semiring
            && (Arc::ptr_eq(&self.system, &other.system) || self.system == other.system)
    }

    fn instance_name(&self) -> String {
        format!("{} over {:?}", self.semiring, self.system)
    }
}

impl<T: Scalar> Valuation for DenseTable<T> {
    fn label(&self) -> &Domain {
        &self.scope
    }

    fn combine(&self, other: &Self) -> Result<Self> {
        if !self.same_instance(other) {
            return Err(Error::InstanceMismatch {
                left: self.instance_name(),
                right: other.instance_name(),
            });
        }
        let scope = self.scope.union(&other.scope);
        let layout = Layout::new(&self.system, &scope)?;
        let (la, lb) = (self.layout(), other.layout());
        let sa: Vec<usize> = layout.vars.iter().map(|v| la.stride_of(v).unwrap_or(0)).collect();
        let sb: Vec<usize> = layout.vars.iter().map(|v| lb.stride_of(v).unwrap_or(0)).collect();
        let mut values = Vec::with_capacity(layout.len());
        let mut digits = layout.digits();
        while let Some(d) = digits.next_digits() {
            let ia: usize = d.iter().zip(&sa).map(|(x, s)| x * s).sum();
            let ib: usize = d.iter().zip(&sb).map(|(x, s)| x * s).sum();
            values.push(self.semiring.mul(self.values[ia], other.values[ib]));
            digits.advance();
        }
        Ok(DenseTable { system: self.system.clone(), semiring: self.semiring, scope, values })
    }

    fn project(&self, to: &Domain) -> Result<Self> {
        if !to.is_subset(&self.scope) {
            return Err(Error::DomainNotContained {
                target: to.clone(),
                label: self.scope.clone(),
                missing: to.difference(&self.scope),
            });
        }
        let src = self.layout();
        let tgt = Layout::new(&self.system, to)?;
        let st: Vec<usize> = src.vars.iter().map(|v| tgt.stride_of(v).unwrap_or(0)).collect();
        let mut out: Vec<Option<T>> = vec![None; tgt.len()];
        let mut digits = src.digits();
        let mut i = 0;
        while let Some(d) = digits.next_digits() {
            let ti: usize = d.iter().zip(&st).map(|(x, s)| x * s).sum();
            let v = self.values[i];
            out[ti] = Some(match out[ti] {
                None => v,
                Some(acc) => self.semiring.aggregate(acc, v),
            });
            digits.advance();
            i += 1;
        }
        let values = out
            .into_iter()
            .map(|v| v.expect("nonempty frames reach every cell"))
            .collect();
        Ok(DenseTable {
            system: self.system.clone(),
            semiring: self.semiring,
            scope: to.clone(),
            values,
        })
    }

    fn unit_on(&self, dom: &Domain) -> Result<Self> {
        DenseTable::unit(self.system.clone(), self.semiring, dom.clone())
    }

    fn obs_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_instance(other)
            && self.scope == other.scope
            && self
                .values
                .iter()
                .zip(&other.values)
                .all(|(a, b)| a.close_to(*b, tol))
    }
}

impl<T: Scalar> Ground for DenseTable<T> {
    type Num = T;

    fn semiring(&self) -> Semiring {
        self.semiring
    }

    fn system(&self) -> &Arc<VariableSystem> {
        &self.system
    }

    fn eval(&self, z: &Configuration) -> Result<T> {
        if z.scope() != self.scope {
            return Err(Error::ScopeMismatch { expected: self.scope.clone(), got: z.scope() });
        }
        Ok(self.values[self.layout().index_of(z)?])
    }
}

impl<T: Scalar> Extensible for DenseTable<T> {
    fn extension_set(&self, partial: &Configuration) -> Result<std::collections::BTreeSet<Configuration>> {
        family::optimum_extensions(self, partial)
    }
}

impl<T: Scalar> fmt::Debug for DenseTable<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}[{} -> ", self.semiring, self.scope)?;
        for (i, v) in self.values.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "]")
    }
}
