//! The optimum-tracking family of configuration extension sets.
//!
//! For a valuation `phi` and a partial configuration `x` with scope
//! `s ≤ d(phi)`, the extension set contains exactly the full-scope
//! configurations that restrict to `x` and attain `phi` projected onto `s`
//! at `x`. Solutions of `phi` are the extensions of the empty
//! configuration.
//!
//! [`check_family`] probes the three defining conditions of an extension
//! family by exhaustive enumeration per sampled valuation: full-scope
//! extension sets are singletons, extension sets decompose through any
//! intermediate scope, and the solution set equals the extensions of `<>`.

use std::collections::BTreeSet;

use rand::rngs::StdRng;

use crate::config::Configuration;
use crate::error::{Error, Result};
use crate::oracle;
use crate::report::PropertyReport;
use crate::valuation::{random_subdomain, Extensible, Ground};

/// The extension set of `partial` under the optimum-tracking family.
///
/// The comparison against the projected value is exact: projection in the
/// bundled instances selects table entries, it never creates new numbers.
pub fn optimum_extensions<G: Ground>(
    phi: &G,
    partial: &Configuration,
) -> Result<BTreeSet<Configuration>> {
    let scope = partial.scope();
    if !scope.is_subset(phi.label()) {
        return Err(Error::DomainNotContained {
            target: scope.clone(),
            label: phi.label().clone(),
            missing: scope.difference(phi.label()),
        });
    }
    let target = phi.project(&scope)?.eval(partial)?;
    let mut out = BTreeSet::new();
    for z in phi.system().enumerate(phi.label())? {
        if z.restrict(&scope)? == *partial && phi.eval(&z)? == target {
            out.insert(z);
        }
    }
    Ok(out)
}

/// Computes an extension set in two steps through the intermediate scope
/// `t`: first extend to the projection onto `t`, then extend each result to
/// the full scope.
fn two_step_extensions<G: Ground + Extensible>(
    phi: &G,
    partial: &Configuration,
    t: &crate::domain::Domain,
) -> Result<BTreeSet<Configuration>> {
    let through = phi.project(t)?.extension_set(partial)?;
    let mut out = BTreeSet::new();
    for z in phi.system().enumerate(phi.label())? {
        let zt = z.restrict(t)?;
        if through.contains(&zt) && phi.extension_set(&zt)?.contains(&z) {
            out.insert(z);
        }
    }
    Ok(out)
}

/// Verifies the extension-family conditions on sampled valuations.
pub fn check_family<G, F>(rng: &mut StdRng, trials: usize, mut sample: F) -> Result<PropertyReport>
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> G,
{
    let mut report = PropertyReport::new("extension family conditions");
    for _ in 0..trials {
        report.trials += 1;
        let phi = sample(rng);
        let label = phi.label().clone();

        // Full-scope extension sets are singletons.
        for x in phi.system().enumerate(&label)? {
            report.checked += 1;
            let ext = phi.extension_set(&x)?;
            if ext.len() != 1 || !ext.contains(&x) {
                report.record_violation(format!(
                    "full-scope extension set of {x:?} under {phi:?} is {ext:?}, not the singleton"
                ));
            }
        }

        // Extension sets decompose through an intermediate scope: sample
        // s < t <= label and compare the direct set with the two-step one.
        let t = random_subdomain(&label, rng);
        let s = random_subdomain(&t, rng);
        if s != t {
            for x in phi.system().enumerate(&s)? {
                report.checked += 1;
                let direct = phi.extension_set(&x)?;
                let two_step = two_step_extensions(&phi, &x, &t)?;
                if direct != two_step {
                    report.record_violation(format!(
                        "two-step extension of {x:?} through {t} under {phi:?}: {two_step:?} != direct {direct:?}"
                    ));
                }
            }
        }

        // The solution set is the extension set of the empty configuration.
        report.checked += 1;
        let solutions = oracle::brute_solutions(std::slice::from_ref(&phi))?;
        let from_empty = phi.extension_set(&Configuration::empty())?;
        if solutions != from_empty {
            report.record_violation(format!(
                "solutions of {phi:?} are {solutions:?} but extensions of <> are {from_empty:?}"
            ));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Configuration;
    use crate::dense::tests::{equality_constraint, max_plus_fixture};
    use crate::domain::{Domain, Var};
    use crate::sample;
    use crate::semiring::Semiring;
    use crate::valuation::Valuation;
    use rand::SeedableRng;

    fn cfg(pairs: &[(&str, usize)]) -> Configuration {
        Configuration::new(pairs.iter().map(|(v, i)| (Var::new(*v), *i)))
    }

    #[test]
    fn equality_constraint_solutions() {
        let (_, phi) = equality_constraint();
        let ext = phi.extension_set(&Configuration::empty()).unwrap();
        let expected: BTreeSet<Configuration> =
            [cfg(&[("x", 0), ("y", 0)]), cfg(&[("x", 1), ("y", 1)])].into();
        assert_eq!(ext, expected);
    }

    #[test]
    fn full_scope_extension_is_singleton() {
        let (_, phi) = equality_constraint();
        let x = cfg(&[("x", 0), ("y", 1)]);
        assert_eq!(phi.extension_set(&x).unwrap(), BTreeSet::from([x]));
    }

    #[test]
    fn max_plus_row_extension() {
        let (_, phi1, phi2) = max_plus_fixture();
        let joint = phi1.combine(&phi2).unwrap(); // (3, 6, 5, 8)
        let ext = joint.extension_set(&cfg(&[("u", 0)])).unwrap();
        assert_eq!(ext, BTreeSet::from([cfg(&[("u", 0), ("v", 1)])]));
    }

    #[test]
    fn rejects_partial_outside_label() {
        let (_, phi1, _) = max_plus_fixture();
        assert!(phi1.extension_set(&cfg(&[("w", 0)])).is_err());
    }

    #[test]
    fn two_step_matches_direct_on_equality_constraint() {
        let (_, phi) = equality_constraint();
        let t: Domain = ["x"].into_iter().collect();
        let direct = phi.extension_set(&Configuration::empty()).unwrap();
        let two_step = two_step_extensions(&phi, &Configuration::empty(), &t).unwrap();
        assert_eq!(direct, two_step);
        let expected: BTreeSet<Configuration> =
            [cfg(&[("x", 0), ("y", 0)]), cfg(&[("x", 1), ("y", 1)])].into();
        assert_eq!(two_step, expected);
    }

    #[test]
    fn family_conditions_hold_for_bundled_instances() {
        for sampler in [
            sample::boolean_tables(4, 3),
            sample::integer_weights(Semiring::MaxPlus, 4, 3),
            sample::integer_weights(Semiring::MinPlus, 4, 3),
        ] {
            let mut rng = StdRng::seed_from_u64(11);
            let report = check_family(&mut rng, 60, |rng| sampler.sample(rng)).unwrap();
            assert!(report.passed(), "{report}");
        }
    }
}
