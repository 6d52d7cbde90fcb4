//! Brute-force reference implementations.
//!
//! Everything here works by enumerating full configurations and folding
//! scalar semiring operations over factor evaluations — no join trees, no
//! message passing, no table combination. The outputs are the ground truth
//! the framework is tested against.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::config::Configuration;
use crate::dense::DenseTable;
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::scalar::Scalar;
use crate::semiring::Semiring;
use crate::valuation::Ground;

/// Enumeration refusal threshold: state spaces above this are rejected
/// instead of silently grinding through.
pub const STATE_CAP: usize = 10_000_000;

fn joint_scope<G: Ground>(factors: &[G]) -> Result<Domain> {
    if factors.is_empty() {
        return Err(Error::Configuration("oracle needs at least one factor".into()));
    }
    let mut scope = Domain::empty();
    for (k, phi) in factors.iter().enumerate() {
        if phi.semiring() != factors[0].semiring() || phi.system() != factors[0].system() {
            return Err(Error::InstanceMismatch {
                left: format!("factor #0: {:?}", factors[0]),
                right: format!("factor #{k}: {phi:?}"),
            });
        }
        scope = scope.union(phi.label());
    }
    Ok(scope)
}

fn check_cap<G: Ground>(factors: &[G], scope: &Domain) -> Result<()> {
    let states = factors[0].system().frame_count(scope)?;
    if states > STATE_CAP {
        return Err(Error::TooLarge { states, cap: STATE_CAP });
    }
    Ok(())
}

/// The combined value of all factors at `z`, whose scope must contain every
/// factor label: the product of the factor evaluations at the restrictions
/// of `z`.
pub fn joint_value<G: Ground>(factors: &[G], z: &Configuration) -> Result<G::Num> {
    let semiring = factors
        .first()
        .ok_or_else(|| Error::Configuration("oracle needs at least one factor".into()))?
        .semiring();
    let mut acc = semiring.unit();
    for phi in factors {
        acc = semiring.mul(acc, phi.eval(&z.restrict(phi.label())?)?);
    }
    Ok(acc)
}

/// The marginal of the combined factors on `to`, computed by full
/// enumeration. `to` may reach outside the joint factor scope; the extra
/// variables are unconstrained.
pub fn brute_marginal<G: Ground>(factors: &[G], to: &Domain) -> Result<DenseTable<G::Num>> {
    let scope = joint_scope(factors)?.union(to);
    check_cap(factors, &scope)?;
    let system = factors[0].system().clone();
    let semiring = factors[0].semiring();
    let mut cells: BTreeMap<Configuration, G::Num> = BTreeMap::new();
    for z in system.enumerate(&scope)? {
        let value = joint_value(factors, &z)?;
        cells
            .entry(z.restrict(to)?)
            .and_modify(|acc| *acc = semiring.aggregate(*acc, value))
            .or_insert(value);
    }
    DenseTable::from_fn(system, semiring, to.clone(), |cfg| cells[cfg])
}

/// The optimum of the combined factors: their marginal on the empty domain.
pub fn global_optimum<G: Ground>(factors: &[G]) -> Result<G::Num> {
    let scope = joint_scope(factors)?;
    check_cap(factors, &scope)?;
    let semiring = factors[0].semiring();
    let mut best: Option<G::Num> = None;
    for z in factors[0].system().enumerate(&scope)? {
        let value = joint_value(factors, &z)?;
        best = Some(match best {
            None => value,
            Some(b) => semiring.aggregate(b, value),
        });
    }
    best.ok_or_else(|| Error::Configuration("empty frame enumeration".into()))
}

/// Observational equality across representations: same label and equal
/// values at every configuration of the label's frame, within `tol`.
pub fn eval_eq<A, B>(a: &A, b: &B, tol: f64) -> Result<bool>
where
    A: Ground,
    B: Ground<Num = A::Num>,
{
    if a.label() != b.label() {
        return Ok(false);
    }
    for cfg in a.system().enumerate(a.label())? {
        if !a.eval(&cfg)?.close_to(b.eval(&cfg)?, tol) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// All full-scope configurations attaining the optimum.
pub fn brute_solutions<G: Ground>(factors: &[G]) -> Result<BTreeSet<Configuration>> {
    let scope = joint_scope(factors)?;
    check_cap(factors, &scope)?;
    let optimum = global_optimum(factors)?;
    let mut solutions = BTreeSet::new();
    for z in factors[0].system().enumerate(&scope)? {
        if joint_value(factors, &z)? == optimum {
            solutions.insert(z);
        }
    }
    Ok(solutions)
}

/// The fixed two-variable Boolean fixture and the evaluation of both sides
/// of the claimed solution-set projection identity of Pouly & Kohlas
/// (Generic Inference, 2011, Theorem 8.1), which fails on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    /// The solution set of the equality constraint, restricted to {x, y}
    /// (the left-hand side of the identity).
    pub lhs: BTreeSet<Configuration>,
    /// The set the identity claims equals it.
    pub rhs: BTreeSet<Configuration>,
    /// Solutions restricted to {y}.
    pub solutions_on_y: BTreeSet<Configuration>,
    /// Extension candidates computed from the {x}-marginal.
    pub candidates_on_x: BTreeSet<Configuration>,
    /// The optimum of the constraint, attained by the diagonal.
    pub optimum: i64,
    /// Whether the identity holds on the fixture.
    pub identity_holds: bool,
}

impl fmt::Display for CounterexampleReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "fixture: boolean constraint over binary x, y with value 1 iff x = y")?;
        writeln!(f, "optimum at the empty scope: {}", self.optimum)?;
        writeln!(f, "lhs, solution set restricted to {{x, y}}: {:?}", self.lhs)?;
        writeln!(f, "  solutions restricted to {{y}}: {:?}", self.solutions_on_y)?;
        writeln!(f, "  candidates from the {{x}}-marginal: {:?}", self.candidates_on_x)?;
        writeln!(f, "rhs, per the claimed identity: {:?}", self.rhs)?;
        write!(f, "identity holds: {}", self.identity_holds)
    }
}

/// Evaluates both sides of the projection identity on the equality
/// constraint, with the scope split `X = {x}`, `Y = {y}`.
///
/// The left-hand side restricts the solution set to `X ∪ Y` (a no-op here).
/// The right-hand side keeps every configuration whose `Y`-part restricts
/// from some solution and whose `X`-part attains the `X`-marginal's
/// optimum. Because the marginal is flat, the right-hand side is the whole
/// frame and the identity fails.
pub fn reproduce_counterexample() -> CounterexampleReport {
    let build = || -> Result<CounterexampleReport> {
        let system = std::sync::Arc::new(crate::config::VariableSystem::with_sizes([
            (crate::domain::Var::new("x"), 2),
            (crate::domain::Var::new("y"), 2),
        ])?);
        let x_dom = Domain::singleton(crate::domain::Var::new("x"));
        let y_dom = Domain::singleton(crate::domain::Var::new("y"));
        let xy = x_dom.union(&y_dom);
        let phi = DenseTable::new(
            system.clone(),
            Semiring::BooleanAndOr,
            xy.clone(),
            vec![1i64, 0, 0, 1],
        )?;
        let factors = [phi.clone()];

        let optimum = global_optimum(&factors)?;
        let solutions = brute_solutions(&factors)?;
        let lhs: BTreeSet<Configuration> = solutions
            .iter()
            .map(|z| z.restrict(&xy))
            .collect::<Result<_>>()?;

        let solutions_on_y: BTreeSet<Configuration> = solutions
            .iter()
            .map(|z| z.restrict(&y_dom))
            .collect::<Result<_>>()?;

        // extension candidates of the empty configuration against the
        // X-marginal: the X-configurations attaining the optimum
        let marginal_x = brute_marginal(&factors, &x_dom)?;
        let mut candidates_on_x = BTreeSet::new();
        for cfg in system.enumerate(&x_dom)? {
            if marginal_x.eval(&cfg)? == optimum {
                candidates_on_x.insert(cfg);
            }
        }

        let mut rhs = BTreeSet::new();
        for z in system.enumerate(&xy)? {
            if solutions_on_y.contains(&z.restrict(&y_dom)?)
                && candidates_on_x.contains(&z.restrict(&x_dom)?)
            {
                rhs.insert(z);
            }
        }

        let identity_holds = lhs == rhs;
        Ok(CounterexampleReport {
            lhs,
            rhs,
            solutions_on_y,
            candidates_on_x,
            optimum,
            identity_holds,
        })
    };
    build().expect("the fixture is fixed and valid")
}
