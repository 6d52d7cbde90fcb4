//! Variable systems and configurations.
//!
//! A [`VariableSystem`] assigns a finite, nonempty frame to every variable.
//! A [`Configuration`] is an assignment of frame values to the variables of
//! its scope; the empty-scope configuration is the unique element `<>`.
//! Values are stored as indices into the frame, so configurations order and
//! compare deterministically; the human-readable labels live in the system.
//!
//! [`ConfigurationSpace`] is the abstract interface behind both: a family of
//! configuration sets per domain together with scope restriction. Variable
//! systems enumerate the full Cartesian product; other spaces (for example
//! one restricted to the support of a sparse potential) may expose proper
//! subsets and are not necessarily merge-friendly — [`check_merge_friendly`]
//! probes exactly that.

use std::collections::BTreeMap;
use std::fmt;

use rand::rngs::StdRng;
use rand::Rng;

use crate::domain::{Domain, Var};
use crate::error::{Error, Result};
use crate::report::PropertyReport;

/// A finite frame per variable.
#[derive(Clone, PartialEq, Eq)]
pub struct VariableSystem {
    frames: BTreeMap<Var, Vec<String>>,
}

impl VariableSystem {
    /// Builds a system from `(variable, frame)` pairs. Every frame must be
    /// nonempty.
    pub fn new(vars: impl IntoIterator<Item = (Var, Vec<String>)>) -> Result<Self> {
        let frames: BTreeMap<Var, Vec<String>> = vars.into_iter().collect();
        for (v, frame) in &frames {
            if frame.is_empty() {
                return Err(Error::InvalidValue(format!("variable {v} has an empty frame")));
            }
        }
        Ok(VariableSystem { frames })
    }

    /// Convenience constructor: frames given by size, value labels `0..n`.
    pub fn with_sizes(vars: impl IntoIterator<Item = (Var, usize)>) -> Result<Self> {
        Self::new(
            vars.into_iter()
                .map(|(v, n)| (v, (0..n).map(|i| i.to_string()).collect())),
        )
    }

    /// All declared variables; the top element of the problem's lattice.
    pub fn universe(&self) -> Domain {
        self.frames.keys().cloned().collect()
    }

    pub fn frame_size(&self, v: &Var) -> Result<usize> {
        self.frames
            .get(v)
            .map(Vec::len)
            .ok_or_else(|| Error::UnknownVariable(v.clone()))
    }

    pub fn value_label(&self, v: &Var, index: usize) -> Result<&str> {
        let frame = self.frames.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
        frame
            .get(index)
            .map(String::as_str)
            .ok_or_else(|| Error::InvalidValue(format!("variable {v} has no value #{index}")))
    }

    /// Index of a value label within a variable's frame.
    pub fn value_index(&self, v: &Var, label: &str) -> Result<usize> {
        let frame = self.frames.get(v).ok_or_else(|| Error::UnknownVariable(v.clone()))?;
        frame
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::InvalidValue(format!("variable {v} has no value '{label}'")))
    }

    pub fn contains(&self, v: &Var) -> bool {
        self.frames.contains_key(v)
    }

    /// Number of configurations over `scope`.
    pub fn frame_count(&self, scope: &Domain) -> Result<usize> {
        let mut n: usize = 1;
        for v in scope.iter() {
            n = n.saturating_mul(self.frame_size(v)?);
        }
        Ok(n)
    }

    /// Enumerates all configurations over `scope`, last variable in
    /// canonical order varying fastest. This is the layout order of dense
    /// tables.
    pub fn enumerate(&self, scope: &Domain) -> Result<Vec<Configuration>> {
        let vars: Vec<&Var> = scope.iter().collect();
        let sizes: Vec<usize> = vars
            .iter()
            .map(|v| self.frame_size(v))
            .collect::<Result<_>>()?;
        let total: usize = sizes.iter().product();
        let mut out = Vec::with_capacity(total);
        let mut digits = vec![0usize; vars.len()];
        for _ in 0..total {
            out.push(Configuration(
                vars.iter()
                    .zip(&digits)
                    .map(|(v, &d)| ((*v).clone(), d))
                    .collect(),
            ));
            for pos in (0..digits.len()).rev() {
                digits[pos] += 1;
                if digits[pos] < sizes[pos] {
                    break;
                }
                digits[pos] = 0;
            }
        }
        Ok(out)
    }

    /// Renders a configuration with frame value labels, variables in
    /// canonical order.
    pub fn format_config(&self, cfg: &Configuration) -> String {
        if cfg.is_empty() {
            return "()".to_string();
        }
        let mut parts = Vec::new();
        for (v, &idx) in cfg.iter() {
            let label = self
                .value_label(v, idx)
                .map(str::to_string)
                .unwrap_or_else(|_| idx.to_string());
            parts.push(format!("{v}={label}"));
        }
        parts.join(" ")
    }
}

impl fmt::Debug for VariableSystem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VariableSystem{{")?;
        for (i, (v, frame)) in self.frames.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}:{}", frame.len())?;
        }
        write!(f, "}}")
    }
}

/// An assignment of values (frame indices) to the variables of a scope.
///
/// The scope is implicit in the keys; two configurations over different
/// scopes never compare equal. Ordering is lexicographic in canonical
/// variable order, which makes "lexicographically smallest" tie-breaking a
/// plain `min`.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Configuration(BTreeMap<Var, usize>);

impl Configuration {
    /// The unique empty-scope configuration `<>`.
    pub fn empty() -> Self {
        Configuration(BTreeMap::new())
    }

    pub fn new(values: impl IntoIterator<Item = (Var, usize)>) -> Self {
        Configuration(values.into_iter().collect())
    }

    pub fn scope(&self) -> Domain {
        self.0.keys().cloned().collect()
    }

    pub fn get(&self, v: &Var) -> Option<usize> {
        self.0.get(v).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Var, &usize)> {
        self.0.iter()
    }

    /// Scope restriction: keeps the variables in `to`, discards the rest.
    pub fn restrict(&self, to: &Domain) -> Result<Configuration> {
        let scope = self.scope();
        if !to.is_subset(&scope) {
            return Err(Error::DomainNotContained {
                target: to.clone(),
                label: scope.clone(),
                missing: to.difference(&scope),
            });
        }
        Ok(Configuration(
            self.0
                .iter()
                .filter(|(v, _)| to.contains(v))
                .map(|(v, &i)| (v.clone(), i))
                .collect(),
        ))
    }

    /// Two configurations of a variable system are compatible iff they agree
    /// on their shared variables.
    pub fn compatible(&self, other: &Configuration) -> bool {
        self.0
            .iter()
            .all(|(v, i)| other.0.get(v).is_none_or(|j| j == i))
    }

    /// The unique merger with `other`, over the join of the scopes.
    pub fn merge_with(&self, other: &Configuration) -> Result<Configuration> {
        let mut merged = self.0.clone();
        for (v, &i) in &other.0 {
            match merged.insert(v.clone(), i) {
                Some(j) if j != i => {
                    return Err(Error::IncompatibleConfigurations { var: v.clone() })
                }
                _ => {}
            }
        }
        Ok(Configuration(merged))
    }
}

/// Merger of a nonempty list of pairwise-compatible configurations.
pub fn merge(configs: &[Configuration]) -> Result<Configuration> {
    let (first, rest) = configs
        .split_first()
        .ok_or_else(|| Error::Configuration("merge of an empty list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, c| acc.merge_with(c))
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, (v, idx)) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{v}={idx}")?;
        }
        write!(f, ")")
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// A family of configuration sets per domain with scope restriction.
pub trait ConfigurationSpace {
    /// The top domain the space knows about.
    fn universe(&self) -> Domain;

    /// The configuration set of `scope`.
    fn configurations(&self, scope: &Domain) -> Result<Vec<Configuration>>;

    /// Compatibility in the space's own terms: some configuration over the
    /// joined scope restricts to both.
    fn space_compatible(&self, x: &Configuration, y: &Configuration) -> Result<bool> {
        let join = x.scope().union(&y.scope());
        for z in self.configurations(&join)? {
            if z.restrict(&x.scope())? == *x && z.restrict(&y.scope())? == *y {
                return Ok(true);
            }
        }
        Ok(false)
    }
}

impl ConfigurationSpace for VariableSystem {
    fn universe(&self) -> Domain {
        self.universe()
    }

    fn configurations(&self, scope: &Domain) -> Result<Vec<Configuration>> {
        self.enumerate(scope)
    }
}

/// Checks merge-friendliness: whenever two configurations agree on the meet
/// of their scopes, they must be compatible in the space. Scope pairs are
/// sampled, the configurations are enumerated exhaustively per trial.
pub fn check_merge_friendly(
    space: &impl ConfigurationSpace,
    rng: &mut StdRng,
    trials: usize,
) -> Result<PropertyReport> {
    let mut report = PropertyReport::new("merge-friendly");
    let universe: Vec<Var> = space.universe().iter().cloned().collect();
    for _ in 0..trials {
        report.trials += 1;
        let s = random_subset(&universe, rng);
        let t = random_subset(&universe, rng);
        let meet = s.intersection(&t);
        for x in space.configurations(&s)? {
            for y in space.configurations(&t)? {
                if x.restrict(&meet)? != y.restrict(&meet)? {
                    continue;
                }
                report.checked += 1;
                if !space.space_compatible(&x, &y)? {
                    report.record_violation(format!(
                        "{x:?} over {s} and {y:?} over {t} agree on {meet} but have no merger"
                    ));
                }
            }
        }
    }
    Ok(report)
}

pub(crate) fn random_subset(universe: &[Var], rng: &mut StdRng) -> Domain {
    universe
        .iter()
        .filter(|_| rng.random_bool(0.5))
        .cloned()
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;

    fn cfg(pairs: &[(&str, usize)]) -> Configuration {
        Configuration::new(pairs.iter().map(|(v, i)| (Var::new(*v), *i)))
    }

    fn dom(vars: &[&str]) -> Domain {
        vars.iter().copied().collect()
    }

    fn binary_system(vars: &[&str]) -> VariableSystem {
        VariableSystem::with_sizes(vars.iter().map(|v| (Var::new(*v), 2))).unwrap()
    }

    #[test]
    fn restrict_discards_values() {
        let z = cfg(&[("x", 1), ("y", 0)]);
        assert_eq!(z.restrict(&dom(&["x"])).unwrap(), cfg(&[("x", 1)]));
        assert_eq!(z.restrict(&z.scope()).unwrap(), z);
        assert_eq!(z.restrict(&Domain::empty()).unwrap(), Configuration::empty());
    }

    #[test]
    fn restrict_rejects_foreign_variables() {
        let z = cfg(&[("x", 1)]);
        match z.restrict(&dom(&["x", "w"])) {
            Err(Error::DomainNotContained { missing, .. }) => assert_eq!(missing, dom(&["w"])),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn compatibility() {
        assert!(cfg(&[("x", 1)]).compatible(&cfg(&[("y", 0)])));
        assert!(cfg(&[("x", 1), ("y", 0)]).compatible(&cfg(&[("y", 0), ("z", 1)])));
        assert!(!cfg(&[("x", 1), ("y", 0)]).compatible(&cfg(&[("y", 1)])));
    }

    #[test]
    fn merge_examples() {
        assert_eq!(
            merge(&[cfg(&[("x", 1)]), cfg(&[("y", 0)])]).unwrap(),
            cfg(&[("x", 1), ("y", 0)])
        );
        let x = cfg(&[("x", 1), ("y", 0)]);
        assert_eq!(merge(std::slice::from_ref(&x)).unwrap(), x);
        assert_eq!(
            merge(&[cfg(&[("x", 1), ("y", 0)]), cfg(&[("y", 0), ("z", 1)])]).unwrap(),
            cfg(&[("x", 1), ("y", 0), ("z", 1)])
        );
    }

    #[test]
    fn merge_names_the_conflicting_variable() {
        match merge(&[cfg(&[("x", 1), ("y", 0)]), cfg(&[("y", 1)])]) {
            Err(Error::IncompatibleConfigurations { var }) => assert_eq!(var, Var::new("y")),
            other => panic!("expected incompatibility, got {other:?}"),
        }
    }

    #[test]
    fn enumeration_order_is_last_variable_fastest() {
        let sys = binary_system(&["u", "v"]);
        let cfgs = sys.enumerate(&dom(&["u", "v"])).unwrap();
        assert_eq!(
            cfgs,
            vec![
                cfg(&[("u", 0), ("v", 0)]),
                cfg(&[("u", 0), ("v", 1)]),
                cfg(&[("u", 1), ("v", 0)]),
                cfg(&[("u", 1), ("v", 1)]),
            ]
        );
        // the empty scope has exactly the empty configuration
        assert_eq!(sys.enumerate(&Domain::empty()).unwrap(), vec![Configuration::empty()]);
    }

    #[test]
    fn variable_system_is_merge_friendly() {
        let sys = binary_system(&["x", "y", "z"]);
        let mut rng = StdRng::seed_from_u64(0);
        let report = check_merge_friendly(&sys, &mut rng, 50).unwrap();
        assert!(report.passed(), "{report}");
    }

    #[test]
    fn single_variable_system_is_merge_friendly() {
        let sys = binary_system(&["x"]);
        let mut rng = StdRng::seed_from_u64(1);
        let report = check_merge_friendly(&sys, &mut rng, 20).unwrap();
        assert!(report.passed(), "{report}");
    }

    /// A space whose two-variable set misses the diagonal: restriction maps
    /// stay surjective, but configurations agreeing on the empty meet need
    /// not have a merger.
    struct HoleySpace {
        sys: VariableSystem,
    }

    impl ConfigurationSpace for HoleySpace {
        fn universe(&self) -> Domain {
            self.sys.universe()
        }

        fn configurations(&self, scope: &Domain) -> Result<Vec<Configuration>> {
            let mut cfgs = self.sys.enumerate(scope)?;
            if scope.len() == 2 {
                cfgs.retain(|c| {
                    let vals: Vec<usize> = c.iter().map(|(_, &i)| i).collect();
                    vals[0] != vals[1]
                });
            }
            Ok(cfgs)
        }
    }

    #[test]
    fn support_restricted_space_violates_merge_friendliness() {
        let space = HoleySpace { sys: binary_system(&["x", "y"]) };
        let mut rng = StdRng::seed_from_u64(7);
        let report = check_merge_friendly(&space, &mut rng, 50).unwrap();
        assert!(!report.passed());
        assert!(report.first_violation.unwrap().contains("no merger"));
    }

    mod properties {
        use super::*;
        use proptest::prelude::*;

        fn arb_config() -> impl Strategy<Value = Configuration> {
            proptest::collection::btree_map(prop_oneof!["a", "b", "c", "d"], 0usize..3, 0..4)
                .prop_map(|m| Configuration::new(m.into_iter().map(|(v, i)| (Var::new(v), i))))
        }

        proptest! {
            #[test]
            fn restrict_is_transitive(z in arb_config(), mask1 in 0u8..16, mask2 in 0u8..16) {
                let vars: Vec<Var> = z.scope().iter().cloned().collect();
                let t: Domain = vars.iter().enumerate()
                    .filter(|(i, _)| mask1 & (1 << i) != 0)
                    .map(|(_, v)| v.clone()).collect();
                let s: Domain = t.iter().enumerate()
                    .filter(|(i, _)| mask2 & (1 << i) != 0)
                    .map(|(_, v)| v.clone()).collect();
                let via_t = z.restrict(&t).unwrap().restrict(&s).unwrap();
                prop_assert_eq!(via_t, z.restrict(&s).unwrap());
            }

            #[test]
            fn merge_with_own_restriction_is_identity(z in arb_config(), mask in 0u8..16) {
                let part: Domain = z.scope().iter().enumerate()
                    .filter(|(i, _)| mask & (1 << i) != 0)
                    .map(|(_, v)| v.clone()).collect();
                let r = z.restrict(&part).unwrap();
                prop_assert_eq!(z.merge_with(&r).unwrap(), z);
            }

            #[test]
            fn merge_is_commutative_when_defined(a in arb_config(), b in arb_config()) {
                if a.compatible(&b) {
                    prop_assert_eq!(a.merge_with(&b).unwrap(), b.merge_with(&a).unwrap());
                } else {
                    prop_assert!(a.merge_with(&b).is_err());
                }
            }

            #[test]
            fn restriction_is_surjective(mask1 in 0u8..8, mask2 in 0u8..8) {
                let sys = binary_system(&["x", "y", "z"]);
                let vars: Vec<Var> = sys.universe().iter().cloned().collect();
                let t: Domain = vars.iter().enumerate()
                    .filter(|(i, _)| mask1 & (1 << i) != 0)
                    .map(|(_, v)| v.clone()).collect();
                let s: Domain = t.iter().enumerate()
                    .filter(|(i, _)| mask2 & (1 << i) != 0)
                    .map(|(_, v)| v.clone()).collect();
                let images: std::collections::BTreeSet<Configuration> = sys
                    .enumerate(&t).unwrap()
                    .iter()
                    .map(|z| z.restrict(&s).unwrap())
                    .collect();
                let expected: std::collections::BTreeSet<Configuration> =
                    sys.enumerate(&s).unwrap().into_iter().collect();
                prop_assert_eq!(images, expected);
            }
        }
    }
}
