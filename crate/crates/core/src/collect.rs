//! Leaves-to-root message passing.
//!
//! Every node starts from the neutral valuation over its label combined
//! with its assigned factors, so node contents always carry the full node
//! label. Messages are the node's *collected* content projected onto its
//! separator; after the pass, the content of node `i` equals the product of
//! all factors in the subtree under `i`, marginalized onto the label of
//! `i`. In particular the root holds the marginal of the whole
//! factorization at its label.

use crate::domain::Domain;
use crate::error::{Error, Result};
use crate::tree::{build_covering_join_tree, CoveringJoinTree, EliminationOrder};
use crate::valuation::Valuation;

/// Node contents and messages of one collect pass.
#[derive(Debug, Clone)]
pub struct CollectResult<V> {
    /// Initial content per node: the neutral valuation over the node label
    /// combined with the assigned factors.
    pub initial: Vec<V>,
    /// Collected content per node, label equal to the node label.
    pub collected: Vec<V>,
    /// Message sent towards the parent, scope equal to the separator.
    /// `None` at the root.
    pub messages: Vec<Option<V>>,
}

/// Runs the collect pass over `tree` for `factors`.
pub fn collect<V: Valuation>(tree: &CoveringJoinTree, factors: &[V]) -> Result<CollectResult<V>> {
    tree.validate_structure()?;
    tree.covers(factors)?;
    let exemplar = factors
        .first()
        .ok_or_else(|| Error::Configuration("collect needs at least one factor".into()))?;

    let mut initial = Vec::with_capacity(tree.len());
    for i in 0..tree.len() {
        initial.push(exemplar.unit_on(tree.label(i))?);
    }
    for (k, phi) in factors.iter().enumerate() {
        let node = tree.assignment()[k];
        initial[node] = initial[node].combine(phi)?;
    }

    let mut collected: Vec<Option<V>> = vec![None; tree.len()];
    let mut messages: Vec<Option<V>> = vec![None; tree.len()];
    for i in tree.post_order() {
        let mut content = initial[i].clone();
        for &child in tree.children(i) {
            let msg = messages[child].as_ref().expect("children are processed first");
            content = content.combine(msg)?;
        }
        if tree.parent(i).is_some() {
            messages[i] = Some(content.project(&tree.separator(i))?);
        }
        collected[i] = Some(content);
    }

    Ok(CollectResult {
        initial,
        collected: collected.into_iter().map(|c| c.expect("all nodes visited")).collect(),
        messages,
    })
}

/// Computes the marginal of the combined factors on `x` by building a tree
/// with `x` forced into one node, rooting there, collecting and projecting.
pub fn query_marginal<V: Valuation>(
    factors: &[V],
    x: &Domain,
    order: &EliminationOrder,
) -> Result<V> {
    let exemplar = factors
        .first()
        .ok_or_else(|| Error::Configuration("marginal of zero factors".into()))?;
    let mut joint = Domain::empty();
    for phi in factors {
        joint = joint.union(phi.label());
    }
    if !x.is_subset(&joint) {
        return Err(Error::DomainNotContained {
            target: x.clone(),
            label: joint.clone(),
            missing: x.difference(&joint),
        });
    }
    // a neutral factor over x guarantees some node covers x
    let mut extended: Vec<V> = factors.to_vec();
    extended.push(exemplar.unit_on(x)?);
    let tree = build_covering_join_tree(&extended, order)?.root_towards(x)?;
    let result = collect(&tree, &extended)?;
    result.collected[tree.root()].project(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::Configuration;
    use crate::dense::tests::{equality_constraint, max_plus_fixture};
    use crate::domain::Var;
    use crate::oracle;
    use crate::valuation::{Ground, Valuation};

    fn dom(vars: &[&str]) -> Domain {
        vars.iter().copied().collect()
    }

    fn order(vars: &[&str]) -> EliminationOrder {
        EliminationOrder::Given(vars.iter().map(|v| Var::new(*v)).collect())
    }

    #[test]
    fn single_node_collect_has_no_messages() {
        let (_, _, phi2) = max_plus_fixture();
        let tree = build_covering_join_tree(&[phi2.clone()], &order(&["u", "v"])).unwrap();
        let result = collect(&tree, &[phi2.clone()]).unwrap();
        assert!(result.messages[0].is_none());
        assert!(result.collected[0].obs_eq(&phi2, 0.0));
    }

    #[test]
    fn fixture_collect_with_wide_root() {
        let (_, phi1, phi2) = max_plus_fixture();
        // order (u, v): phi1 and phi2 both land in u's bucket {u, v},
        // which sends {v} onward; the {v} bucket is pruned, so the wide
        // node is the root.
        let tree = build_covering_join_tree(&[phi1.clone(), phi2.clone()], &order(&["u", "v"]))
            .unwrap();
        let root = tree.root();
        assert_eq!(tree.label(root), &dom(&["u", "v"]));
        let result = collect(&tree, &[phi1, phi2]).unwrap();
        assert_eq!(result.collected[root].values(), &[3, 6, 5, 8]);
    }

    #[test]
    fn fixture_collect_with_narrow_root() {
        let (_, phi1, phi2) = max_plus_fixture();
        // order (v, u): the {u, v} bucket sends its {u} message to the
        // root bucket {u}
        let tree = build_covering_join_tree(&[phi1.clone(), phi2.clone()], &order(&["v", "u"]))
            .unwrap();
        let root = tree.root();
        assert_eq!(tree.label(root), &dom(&["u"]));
        let result = collect(&tree, &[phi1, phi2]).unwrap();
        assert_eq!(result.collected[root].values(), &[6, 8]);
        // the message from the wide node has the separator as its label
        let child = tree.children(root)[0];
        assert_eq!(
            result.messages[child].as_ref().unwrap().label(),
            &tree.separator(child)
        );
    }

    #[test]
    fn collected_labels_match_node_labels() {
        let (_, phi1, phi2) = max_plus_fixture();
        let tree =
            build_covering_join_tree(&[phi1.clone(), phi2.clone()], &EliminationOrder::MinFill)
                .unwrap();
        let result = collect(&tree, &[phi1, phi2]).unwrap();
        for i in 0..tree.len() {
            assert_eq!(result.collected[i].label(), tree.label(i));
        }
    }

    #[test]
    fn query_marginal_examples() {
        let (_, phi1, phi2) = max_plus_fixture();

        // single factor, full scope: the factor itself
        let m = query_marginal(&[phi2.clone()], &dom(&["u", "v"]), &EliminationOrder::MinDegree)
            .unwrap();
        assert!(m.obs_eq(&phi2, 0.0));

        let m = query_marginal(&[phi1.clone(), phi2.clone()], &dom(&["u"]), &EliminationOrder::MinDegree)
            .unwrap();
        assert_eq!(m.values(), &[6, 8]);
        let brute = oracle::brute_marginal(&[phi1.clone(), phi2.clone()], &dom(&["u"])).unwrap();
        assert!(m.obs_eq(&brute, 0.0));

        // querying outside the joint label is a domain error
        assert!(matches!(
            query_marginal(&[phi1, phi2], &dom(&["w"]), &EliminationOrder::MinDegree),
            Err(Error::DomainNotContained { .. })
        ));
    }

    #[test]
    fn equality_constraint_empty_marginal_is_one() {
        let (_, phi) = equality_constraint();
        let m = query_marginal(&[phi], &Domain::empty(), &EliminationOrder::MinDegree).unwrap();
        assert_eq!(m.eval(&Configuration::empty()).unwrap(), 1);
    }
}
