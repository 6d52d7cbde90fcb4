//! Solution construction on top of a collect pass.
//!
//! The extend pass walks the tree from the root: each node receives the
//! part of the parent's choice that lives on its separator, picks one of
//! its extensions, and passes the relevant parts on. Merging the per-node
//! choices yields a global solution whenever the instance's extension
//! family is piecewise extensible and its configuration system is
//! merge-friendly — the conditions probed by the checkers in this module.
//!
//! The all-solutions variant propagates sets instead of single choices:
//! the root enumerates its whole extension set, every node extends every
//! received partial configuration in every possible way, and sibling
//! subtree results are merged pairwise. Completeness requires the family
//! to be fully piecewise extensible; membership of every reported solution
//! is verified by evaluation regardless.

use std::collections::BTreeSet;

use rand::rngs::StdRng;

use crate::config::{merge, Configuration};
use crate::collect::{collect, CollectResult};
use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::oracle;
use crate::report::PropertyReport;
use crate::scalar::Scalar;
use crate::tree::{build_covering_join_tree, CoveringJoinTree, EliminationOrder};
use crate::valuation::{random_subdomain, Extensible, Ground};

/// How a node picks one element from its extension set.
///
/// The bundled instances enumerate extension sets in canonical order, so
/// both strategies are deterministic; `Lexicographic` is additionally
/// stable under any reordering of the enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Picker {
    #[default]
    Lexicographic,
    FirstFound,
}

impl Picker {
    fn pick(&self, set: &BTreeSet<Configuration>) -> Option<Configuration> {
        match self {
            Picker::Lexicographic => set.first().cloned(),
            Picker::FirstFound => set.iter().next().cloned(),
        }
    }
}

/// Per-node choices of one extend pass.
#[derive(Debug, Clone)]
pub struct ExtendResult {
    /// What each node received: the root the empty configuration, every
    /// other node a configuration over its separator.
    pub received: Vec<Configuration>,
    /// The configuration each node selected, scope equal to its label.
    pub selected: Vec<Configuration>,
    /// The merger of all selections.
    pub solution: Configuration,
}

/// Runs the extend pass over the collected contents.
pub fn extend<V: Extensible>(
    tree: &CoveringJoinTree,
    collected: &CollectResult<V>,
    picker: Picker,
) -> Result<ExtendResult> {
    tree.validate_structure()?;
    let n = tree.len();
    let mut received = vec![Configuration::empty(); n];
    let mut selected = vec![Configuration::empty(); n];
    for i in tree.pre_order() {
        let extensions = collected.collected[i].extension_set(&received[i])?;
        let choice = picker.pick(&extensions).ok_or(Error::NoSolution { node: i })?;
        for &child in tree.children(i) {
            received[child] = choice.restrict(&tree.separator(child))?;
        }
        selected[i] = choice;
    }
    let solution = merge(&selected)?;
    Ok(ExtendResult { received, selected, solution })
}

/// A solved problem: one optimal assignment and its objective value.
#[derive(Debug, Clone)]
pub struct Solution<T> {
    pub assignment: Configuration,
    pub objective: T,
    /// `false` when the semiring has an annihilating zero and the optimum
    /// is zero: the assignment is still an optimizer, but nothing satisfies
    /// all factors.
    pub satisfiable: bool,
}

fn factor_scope<G: Ground>(factors: &[G]) -> Domain {
    factors
        .iter()
        .fold(Domain::empty(), |acc, phi| acc.union(phi.label()))
}

fn is_satisfiable<T: Scalar>(semiring: crate::semiring::Semiring, objective: T) -> bool {
    !(semiring.zero_annihilates() && objective == T::zero())
}

/// Finds one solution of the combined factors: build a covering join tree,
/// collect, extend, merge.
pub fn solve<G: Ground + Extensible>(
    factors: &[G],
    order: &EliminationOrder,
    picker: Picker,
) -> Result<Solution<G::Num>> {
    let tree = build_covering_join_tree(factors, order)?;
    let collected = collect(&tree, factors)?;
    let result = extend(&tree, &collected, picker)?;
    let assignment = result.solution.restrict(&factor_scope(factors))?;
    let objective = oracle::joint_value(factors, &assignment)?;
    Ok(Solution {
        assignment,
        objective,
        satisfiable: is_satisfiable(factors[0].semiring(), objective),
    })
}

/// The solutions found by [`solve_all`].
#[derive(Debug, Clone)]
pub struct SolutionSet<T> {
    pub solutions: BTreeSet<Configuration>,
    pub objective: T,
    pub satisfiable: bool,
    /// `true` when the enumeration hit the cap and the set may be missing
    /// solutions.
    pub truncated: bool,
}

struct Budget {
    cap: usize,
    used: usize,
    truncated: bool,
}

impl Budget {
    /// Accounts for one merged configuration; `false` once the cap is hit.
    fn spend(&mut self) -> bool {
        if self.used >= self.cap {
            self.truncated = true;
            return false;
        }
        self.used += 1;
        true
    }
}

fn extend_all_node<V: Extensible>(
    tree: &CoveringJoinTree,
    collected: &CollectResult<V>,
    node: usize,
    received: &Configuration,
    budget: &mut Budget,
) -> Result<BTreeSet<Configuration>> {
    let mut results = BTreeSet::new();
    for choice in collected.collected[node].extension_set(received)? {
        let mut partials = BTreeSet::from([choice.clone()]);
        for &child in tree.children(node) {
            let down = choice.restrict(&tree.separator(child))?;
            let subtree = extend_all_node(tree, collected, child, &down, budget)?;
            let mut merged = BTreeSet::new();
            for a in &partials {
                for b in &subtree {
                    if !a.compatible(b) {
                        continue;
                    }
                    if !budget.spend() {
                        return Ok(results);
                    }
                    merged.insert(a.merge_with(b)?);
                }
            }
            partials = merged;
        }
        for p in partials {
            if !budget.spend() {
                return Ok(results);
            }
            results.insert(p);
        }
    }
    Ok(results)
}

/// Default cap on merged configurations during [`solve_all`].
pub const SOLUTION_CAP: usize = 1_000_000;

/// Enumerates solutions of the combined factors, up to `cap` merged
/// configurations. Every returned configuration is verified to attain the
/// optimum; the set is complete for fully piecewise extensible families
/// unless `truncated` is set.
pub fn solve_all<G: Ground + Extensible>(
    factors: &[G],
    order: &EliminationOrder,
    cap: usize,
) -> Result<SolutionSet<G::Num>> {
    let tree = build_covering_join_tree(factors, order)?;
    let collected = collect(&tree, factors)?;
    let root = tree.root();
    let objective = collected.collected[root]
        .project(&Domain::empty())?
        .eval(&Configuration::empty())?;

    let mut budget = Budget { cap, used: 0, truncated: false };
    let merged =
        extend_all_node(&tree, &collected, root, &Configuration::empty(), &mut budget)?;

    let scope = factor_scope(factors);
    let tol = G::Num::default_tolerance();
    let mut solutions = BTreeSet::new();
    for z in merged {
        let z = z.restrict(&scope)?;
        if oracle::joint_value(factors, &z)?.close_to(objective, tol) {
            solutions.insert(z);
        }
    }
    Ok(SolutionSet {
        solutions,
        objective,
        satisfiable: is_satisfiable(factors[0].semiring(), objective),
        truncated: budget.truncated,
    })
}

// ---------------------------------------------------------------------------
// Extensibility checkers
// ---------------------------------------------------------------------------

/// The extension set of the part of `x` relevant to `phi`: membership of a
/// candidate's restriction in this set is what "extends to `phi`" means for
/// configurations of wider scope.
fn relevant_extensions<G: Ground + Extensible>(
    phi: &G,
    x: &Configuration,
) -> Result<BTreeSet<Configuration>> {
    phi.extension_set(&x.restrict(&x.scope().intersection(phi.label()))?)
}

/// Checks piecewise extensibility on sampled pairs: a joint extension to
/// two factors must extend to their combination. The scope `t` of the base
/// configuration is sampled between the meet and the join of the labels;
/// base configurations and candidate extensions are enumerated
/// exhaustively.
pub fn check_piecewise_extensible<G, F>(
    rng: &mut StdRng,
    trials: usize,
    mut sample_pair: F,
) -> Result<PropertyReport>
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> (G, G),
{
    let mut report = PropertyReport::new("piecewise extensible");
    for _ in 0..trials {
        report.trials += 1;
        let (phi1, phi2) = sample_pair(rng);
        let product = phi1.combine(&phi2)?;
        let join = product.label().clone();
        let meet = phi1.label().intersection(phi2.label());
        let t = meet.union(&random_subdomain(&join.difference(&meet), rng));
        let system = phi1.system().clone();
        let candidates = system.enumerate(&join)?;
        for x in system.enumerate(&t)? {
            let e1 = relevant_extensions(&phi1, &x)?;
            let e2 = relevant_extensions(&phi2, &x)?;
            let joint_extensions = product.extension_set(&x)?;
            for z in &candidates {
                if !(e1.contains(&z.restrict(phi1.label())?)
                    && e2.contains(&z.restrict(phi2.label())?))
                {
                    continue;
                }
                report.checked += 1;
                if !joint_extensions.contains(z) {
                    report.record_violation(format!(
                        "{z:?} extends {x:?} to {phi1:?} and {phi2:?} separately but not to their combination"
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Checks full piecewise extensibility: joint extensions of the factors and
/// extensions of the combination must be the same configurations.
pub fn check_fully_piecewise_extensible<G, F>(
    rng: &mut StdRng,
    trials: usize,
    mut sample_pair: F,
) -> Result<PropertyReport>
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> (G, G),
{
    let mut report = PropertyReport::new("fully piecewise extensible");
    for _ in 0..trials {
        report.trials += 1;
        let (phi1, phi2) = sample_pair(rng);
        let product = phi1.combine(&phi2)?;
        let join = product.label().clone();
        let meet = phi1.label().intersection(phi2.label());
        let t = meet.union(&random_subdomain(&join.difference(&meet), rng));
        let system = phi1.system().clone();
        let candidates = system.enumerate(&join)?;
        for x in system.enumerate(&t)? {
            let e1 = relevant_extensions(&phi1, &x)?;
            let e2 = relevant_extensions(&phi2, &x)?;
            let joint_extensions = product.extension_set(&x)?;
            for z in &candidates {
                report.checked += 1;
                let separately = e1.contains(&z.restrict(phi1.label())?)
                    && e2.contains(&z.restrict(phi2.label())?);
                let to_product = joint_extensions.contains(z);
                if separately != to_product {
                    report.record_violation(format!(
                        "{z:?} over {x:?}: extends to {phi1:?} and {phi2:?} separately: {separately}, \
                         to the combination: {to_product}"
                    ));
                }
            }
        }
    }
    Ok(report)
}

/// Checks the two n-ary consequences of piecewise extensibility on sampled
/// factor lists: joint extensions to all factors extend to the product, and
/// extending a solution of the product's projection factor-by-factor and
/// merging yields a solution of the product.
pub fn check_nary_lemmas<G, F>(
    rng: &mut StdRng,
    trials: usize,
    mut sample_factors: F,
) -> Result<PropertyReport>
where
    G: Ground + Extensible,
    F: FnMut(&mut StdRng) -> Vec<G>,
{
    const COMBO_CAP: usize = 500;
    let mut report = PropertyReport::new("n-ary extension lemmas");
    for _ in 0..trials {
        report.trials += 1;
        let factors = sample_factors(rng);
        if factors.is_empty() {
            continue;
        }
        let system = factors[0].system().clone();
        let product = factors
            .iter()
            .skip(1)
            .try_fold(factors[0].clone(), |acc, phi| acc.combine(phi))?;
        let join = product.label().clone();

        // overlap of each factor with the rest
        let overlaps: Vec<Domain> = factors
            .iter()
            .enumerate()
            .map(|(i, phi)| {
                let rest = factors
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(Domain::empty(), |acc, (_, other)| acc.union(other.label()));
                phi.label().intersection(&rest)
            })
            .collect();
        let overlap_join = overlaps
            .iter()
            .fold(Domain::empty(), |acc, r| acc.union(r));

        // joint extensions extend to the product, for overlap_join <= t <= join
        let t = overlap_join.union(&random_subdomain(&join.difference(&overlap_join), rng));
        let candidates = system.enumerate(&join)?;
        for x in system.enumerate(&t)? {
            let per_factor: Vec<BTreeSet<Configuration>> = factors
                .iter()
                .map(|phi| relevant_extensions(phi, &x))
                .collect::<Result<_>>()?;
            let joint_extensions = product.extension_set(&x)?;
            for z in &candidates {
                let mut all = true;
                for (phi, e) in factors.iter().zip(&per_factor) {
                    if !e.contains(&z.restrict(phi.label())?) {
                        all = false;
                        break;
                    }
                }
                if !all {
                    continue;
                }
                report.checked += 1;
                if !joint_extensions.contains(z) {
                    report.record_violation(format!(
                        "{z:?} extends {x:?} to every factor but not to the product"
                    ));
                }
            }
        }

        // solutions of the projection extend to solutions of the product:
        // take a root factor whose label covers the pairwise overlaps of
        // the rest
        let (rho, rest) = factors.split_first().expect("nonempty");
        let rest_overlaps = rest
            .iter()
            .enumerate()
            .map(|(i, phi)| {
                let others = rest
                    .iter()
                    .enumerate()
                    .filter(|(j, _)| *j != i)
                    .fold(Domain::empty(), |acc, (_, other)| acc.union(other.label()));
                phi.label().intersection(&others)
            })
            .fold(Domain::empty(), |acc, r| acc.union(&r));
        if !rest_overlaps.is_subset(rho.label()) {
            continue; // hypothesis not met for this sample
        }
        let d_rho = rho.label().clone();
        let projected = product.project(&d_rho)?;
        let product_solutions = product.extension_set(&Configuration::empty())?;
        for x in projected.extension_set(&Configuration::empty())? {
            // every choice of per-factor extensions of x
            let extension_sets: Vec<Vec<Configuration>> = rest
                .iter()
                .map(|phi| {
                    let relevant = x.restrict(&d_rho.intersection(phi.label()))?;
                    Ok(phi.extension_set(&relevant)?.into_iter().collect())
                })
                .collect::<Result<_>>()?;
            let mut combos: Vec<Vec<&Configuration>> = vec![Vec::new()];
            for set in &extension_sets {
                let mut next = Vec::new();
                'outer: for combo in &combos {
                    for y in set {
                        if next.len() >= COMBO_CAP {
                            break 'outer;
                        }
                        let mut extended = combo.clone();
                        extended.push(y);
                        next.push(extended);
                    }
                }
                combos = next;
            }
            for combo in combos {
                let mut parts: Vec<Configuration> = vec![x.clone()];
                parts.extend(combo.into_iter().cloned());
                let Ok(z) = merge(&parts) else { continue };
                report.checked += 1;
                if !product_solutions.contains(&z) {
                    report.record_violation(format!(
                        "merger {z:?} of projection solution {x:?} and factor extensions is not a solution"
                    ));
                }
            }
        }
    }
    Ok(report)
}
