//! The valuation-algebra interface and its executable axiom checker.
//!
//! A valuation is an immutable piece of information with a domain label.
//! An algebra instance supplies combination and projection; the checker
//! probes the six axioms on randomly sampled valuations.
//!
//! Equality of valuations is observational throughout: equal label and
//! equal value at every configuration of the label's frame, within a
//! tolerance. The trait exposes it as [`Valuation::obs_eq`] so each
//! instance can implement it against its own representation.

use std::collections::BTreeSet;
use std::fmt::Debug;
use std::sync::Arc;

use rand::rngs::StdRng;
use rand::Rng;

use crate::config::{Configuration, VariableSystem};
use crate::domain::Domain;
use crate::error::Result;
use crate::report::{Axiom, AxiomReport, AxiomStat};
use crate::scalar::Scalar;
use crate::semiring::Semiring;

/// An element of a valuation algebra.
///
/// Implementations must keep values immutable after construction; every
/// method may be called concurrently from multiple threads.
pub trait Valuation: Clone + Debug + Send + Sync {
    /// The domain this valuation carries information about.
    fn label(&self) -> &Domain;

    /// Combination. Fails with an instance-mismatch error when the operands
    /// do not belong to the same concrete algebra.
    fn combine(&self, other: &Self) -> Result<Self>;

    /// Projection to `to ≤ label`. Fails with a domain error naming the
    /// offending variables otherwise.
    fn project(&self, to: &Domain) -> Result<Self>;

    /// The neutral valuation of this valuation's algebra instance over
    /// `dom`: combining with it only extends the label. `unit_on(⊥)` is the
    /// identity element adjoined to the algebra. Fails when `dom` names
    /// variables the instance does not know.
    fn unit_on(&self, dom: &Domain) -> Result<Self>;

    /// The identity valuation: neutral under combination, label ⊥.
    fn identity(&self) -> Result<Self> {
        self.unit_on(&Domain::empty())
    }

    /// Observational equality within `tol`.
    fn obs_eq(&self, other: &Self, tol: f64) -> bool;
}

/// A valuation that can be evaluated pointwise at configurations of its
/// label's frame. The brute-force oracle and the objective computation work
/// exclusively through this interface.
pub trait Ground: Valuation {
    type Num: Scalar;

    fn semiring(&self) -> Semiring;

    fn system(&self) -> &Arc<VariableSystem>;

    /// Value at a configuration whose scope equals the label.
    fn eval(&self, z: &Configuration) -> Result<Self::Num>;
}

/// A valuation with an attached family of configuration extension sets.
///
/// For the bundled instances this is the optimum-tracking family: the
/// extensions of `x` are the full-scope configurations that restrict to `x`
/// and attain the projection of the valuation onto `x`'s scope.
pub trait Extensible: Valuation {
    /// The extension set of `partial`, whose scope must be contained in the
    /// label. Elements have the label as scope and restrict to `partial`.
    fn extension_set(&self, partial: &Configuration) -> Result<BTreeSet<Configuration>>;
}

pub(crate) fn random_subdomain(of: &Domain, rng: &mut StdRng) -> Domain {
    of.iter().filter(|_| rng.random_bool(0.5)).cloned().collect()
}

/// Runs `trials` randomized probes of the six valuation-algebra axioms
/// against valuations drawn from `sample`. Failures are recorded in the
/// report together with the first counterexample, never raised as errors.
pub fn check_axioms<V, F>(rng: &mut StdRng, trials: usize, tol: f64, mut sample: F) -> AxiomReport
where
    V: Valuation,
    F: FnMut(&mut StdRng) -> V,
{
    let mut stats: Vec<AxiomStat> = Axiom::ALL
        .iter()
        .map(|&axiom| AxiomStat { axiom, passes: 0, failures: 0, first_counterexample: None })
        .collect();

    let record = |stats: &mut Vec<AxiomStat>, axiom: Axiom, ok: bool, witness: &dyn Fn() -> String| {
        let stat = stats.iter_mut().find(|s| s.axiom == axiom).unwrap();
        if ok {
            stat.passes += 1;
        } else {
            stat.failures += 1;
            if stat.first_counterexample.is_none() {
                stat.first_counterexample = Some(witness());
            }
        }
    };

    for _ in 0..trials {
        let phi = sample(rng);
        let psi = sample(rng);
        let chi = sample(rng);

        // A1: commutative semigroup.
        let a1 = (|| -> Result<bool> {
            let pq = phi.combine(&psi)?;
            let qp = psi.combine(&phi)?;
            let left = pq.combine(&chi)?;
            let right = phi.combine(&psi.combine(&chi)?)?;
            Ok(pq.obs_eq(&qp, tol) && left.obs_eq(&right, tol))
        })()
        .unwrap_or(false);
        record(&mut stats, Axiom::Semigroup, a1, &|| format!("{phi:?}, {psi:?}, {chi:?}"));

        // A2: label of a combination is the join of the labels.
        let a2 = phi
            .combine(&psi)
            .map(|c| *c.label() == phi.label().union(psi.label()))
            .unwrap_or(false);
        record(&mut stats, Axiom::Labeling, a2, &|| format!("{phi:?}, {psi:?}"));

        // A3: projection yields the requested label.
        let x = random_subdomain(phi.label(), rng);
        let a3 = phi.project(&x).map(|p| *p.label() == x).unwrap_or(false);
        record(&mut stats, Axiom::Projection, a3, &|| format!("{phi:?} -> {x}"));

        // A4: consecutive projections collapse.
        let y = random_subdomain(phi.label(), rng);
        let x = random_subdomain(&y, rng);
        let a4 = (|| -> Result<bool> {
            let two_step = phi.project(&y)?.project(&x)?;
            Ok(two_step.obs_eq(&phi.project(&x)?, tol))
        })()
        .unwrap_or(false);
        record(&mut stats, Axiom::Transitivity, a4, &|| format!("{phi:?} -> {y} -> {x}"));

        // A5: for d(phi)=x, d(psi)=y and x <= z <= x v y:
        //     (psi (x) phi)^(z) == phi (x) psi^(z ^ y).
        let xy = phi.label().union(psi.label());
        let z = phi.label().union(&random_subdomain(&xy.difference(phi.label()), rng));
        let a5 = (|| -> Result<bool> {
            let left = psi.combine(&phi)?.project(&z)?;
            let right = phi.combine(&psi.project(&z.intersection(psi.label()))?)?;
            Ok(left.obs_eq(&right, tol))
        })()
        .unwrap_or(false);
        record(&mut stats, Axiom::Combination, a5, &|| format!("{phi:?}, {psi:?}, z={z}"));

        // A6: projecting onto the own label changes nothing.
        let a6 = phi
            .project(phi.label())
            .map(|p| p.obs_eq(&phi, tol))
            .unwrap_or(false);
        record(&mut stats, Axiom::Stability, a6, &|| format!("{phi:?}"));
    }

    AxiomReport { trials, stats }
}
