//! Labeled trees, covering join trees and their construction.
//!
//! Construction is bucket elimination: every variable of the elimination
//! order owns a bucket, each factor lands in the bucket of its
//! first-eliminated variable, and eliminating a bucket sends its remaining
//! variables to the bucket of their first-eliminated member. That routing
//! yields the running intersection property by construction. Factor-less
//! buckets whose label is contained in a neighbor are absorbed afterwards,
//! so a single factor really produces a single node.

use std::collections::{BTreeMap, BTreeSet};

use crate::domain::{Domain, Var};
use crate::error::{Error, Result};
use crate::valuation::Valuation;

pub type NodeId = usize;

/// How to pick the variable elimination order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EliminationOrder {
    /// Use this order, first variable eliminated first. Must cover every
    /// variable appearing in a factor label.
    Given(Vec<Var>),
    /// Repeatedly eliminate the variable with the fewest neighbors in the
    /// interaction graph. Ties break canonically.
    MinDegree,
    /// Repeatedly eliminate the variable whose elimination adds the fewest
    /// fill edges. Ties break canonically.
    MinFill,
}

/// A witness that the running intersection property fails: `k` lies on the
/// path between `i` and `j` but misses part of their shared label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RipViolation {
    pub i: NodeId,
    pub j: NodeId,
    pub k: NodeId,
}

/// A rooted labeled tree with a factor assignment.
#[derive(Debug, Clone)]
pub struct CoveringJoinTree {
    labels: Vec<Domain>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Vec<NodeId>>,
    root: NodeId,
    /// factor index -> node carrying it
    assignment: Vec<NodeId>,
}

impl CoveringJoinTree {
    /// Assembles a tree from raw parts without structural validation, so
    /// that malformed inputs can be fed to the checkers. Parent indices
    /// must be in range and at least one node must be parentless.
    pub fn from_parts(
        labels: Vec<Domain>,
        parent: Vec<Option<NodeId>>,
        assignment: Vec<NodeId>,
    ) -> Result<Self> {
        let n = labels.len();
        if parent.len() != n {
            return Err(Error::Structure(format!(
                "{n} labels but {} parent links",
                parent.len()
            )));
        }
        if let Some(p) = parent.iter().flatten().find(|&&p| p >= n) {
            return Err(Error::Structure(format!("parent index {p} out of range")));
        }
        if let Some(&a) = assignment.iter().find(|&&a| a >= n) {
            return Err(Error::Structure(format!("factor assigned to missing node {a}")));
        }
        let root = parent
            .iter()
            .position(Option::is_none)
            .ok_or_else(|| Error::Structure("no root: every node has a parent".into()))?;
        let mut children = vec![Vec::new(); n];
        for (i, p) in parent.iter().enumerate() {
            if let Some(p) = p {
                children[*p].push(i);
            }
        }
        Ok(CoveringJoinTree { labels, parent, children, root, assignment })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, i: NodeId) -> &Domain {
        &self.labels[i]
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn parent(&self, i: NodeId) -> Option<NodeId> {
        self.parent[i]
    }

    pub fn children(&self, i: NodeId) -> &[NodeId] {
        &self.children[i]
    }

    pub fn assignment(&self) -> &[NodeId] {
        &self.assignment
    }

    /// The separator of `i`: empty at the root, otherwise the meet of the
    /// label with the parent's label.
    pub fn separator(&self, i: NodeId) -> Domain {
        match self.parent[i] {
            None => Domain::empty(),
            Some(p) => self.labels[i].intersection(&self.labels[p]),
        }
    }

    /// Checks that the parent links form a single rooted tree.
    pub fn validate_structure(&self) -> Result<()> {
        let n = self.len();
        if n == 0 {
            return Err(Error::Structure("tree has no nodes".into()));
        }
        let roots = self.parent.iter().filter(|p| p.is_none()).count();
        if roots != 1 {
            return Err(Error::Structure(format!(
                "disconnected: {roots} parentless nodes"
            )));
        }
        for start in 0..n {
            let mut cur = start;
            for _ in 0..n {
                match self.parent[cur] {
                    None => break,
                    Some(p) => cur = p,
                }
            }
            if self.parent[cur].is_some() {
                return Err(Error::Structure(format!("cycle through node {start}")));
            }
            if cur != self.root {
                return Err(Error::Structure(format!(
                    "node {start} does not reach the root"
                )));
            }
        }
        Ok(())
    }

    /// Checks that every factor's label fits inside its node.
    pub fn covers<V: Valuation>(&self, factors: &[V]) -> Result<()> {
        if factors.len() != self.assignment.len() {
            return Err(Error::Configuration(format!(
                "tree assigns {} factors but {} were given",
                self.assignment.len(),
                factors.len()
            )));
        }
        for (k, phi) in factors.iter().enumerate() {
            let node = self.assignment[k];
            if !phi.label().is_subset(&self.labels[node]) {
                return Err(Error::Configuration(format!(
                    "factor #{k} over {} is not covered by node {node} labeled {}",
                    phi.label(),
                    self.labels[node]
                )));
            }
        }
        Ok(())
    }

    /// Verifies the running intersection property for every node pair.
    /// Returns the first violating `(i, j, k)` triple, if any.
    pub fn verify_running_intersection(&self) -> Result<Option<RipViolation>> {
        self.validate_structure()?;
        let n = self.len();
        for i in 0..n {
            for j in (i + 1)..n {
                let shared = self.labels[i].intersection(&self.labels[j]);
                if shared.is_empty() {
                    continue;
                }
                for k in self.path(i, j) {
                    if !shared.is_subset(&self.labels[k]) {
                        return Ok(Some(RipViolation { i, j, k }));
                    }
                }
            }
        }
        Ok(None)
    }

    /// The nodes strictly between `i` and `j`.
    fn path(&self, i: NodeId, j: NodeId) -> Vec<NodeId> {
        let ancestors = |mut x: NodeId| {
            let mut chain = vec![x];
            while let Some(p) = self.parent[x] {
                chain.push(p);
                x = p;
            }
            chain
        };
        let up_i = ancestors(i);
        let up_j = ancestors(j);
        let set_i: BTreeSet<NodeId> = up_i.iter().copied().collect();
        let lca = *up_j.iter().find(|x| set_i.contains(x)).expect("same tree");
        let mut path: Vec<NodeId> =
            up_i.iter().take_while(|&&x| x != lca).copied().collect();
        path.push(lca);
        let down: Vec<NodeId> = up_j.iter().take_while(|&&x| x != lca).copied().collect();
        path.extend(down.into_iter().rev());
        path.retain(|&k| k != i && k != j);
        path
    }

    /// Re-roots the tree at a node whose label contains `x`. The smallest
    /// such node id wins; with an empty `x` the tree is returned unchanged.
    pub fn root_towards(&self, x: &Domain) -> Result<Self> {
        if x.is_empty() {
            return Ok(self.clone());
        }
        let target = (0..self.len())
            .find(|&i| x.is_subset(&self.labels[i]))
            .ok_or_else(|| Error::QueryDomain(x.clone()))?;
        if target == self.root {
            return Ok(self.clone());
        }
        // flip the parent links on the path from the old root to the target
        let mut parent = self.parent.clone();
        let mut cur = target;
        let mut prev = None;
        while let Some(next) = parent[cur] {
            parent[cur] = prev;
            prev = Some(cur);
            cur = next;
        }
        parent[cur] = prev;
        CoveringJoinTree::from_parts(self.labels.clone(), parent, self.assignment.clone())
    }

    /// Nodes with every child before its parent; children visited in
    /// ascending id order, so message schedules are deterministic.
    pub fn post_order(&self) -> Vec<NodeId> {
        let mut order = self.pre_order();
        order.reverse();
        order
    }

    /// Nodes with every parent before its children.
    pub fn pre_order(&self) -> Vec<NodeId> {
        let mut order = Vec::with_capacity(self.len());
        let mut stack = vec![self.root];
        while let Some(i) = stack.pop() {
            order.push(i);
            // push in reverse so smaller ids come out first
            for &c in self.children[i].iter().rev() {
                stack.push(c);
            }
        }
        order
    }
}

/// Organizes the factors into a covering join tree.
pub fn build_covering_join_tree<V: Valuation>(
    factors: &[V],
    order: &EliminationOrder,
) -> Result<CoveringJoinTree> {
    if factors.is_empty() {
        return Err(Error::Configuration("cannot build a tree for zero factors".into()));
    }
    let labels: Vec<&Domain> = factors.iter().map(Valuation::label).collect();
    let mut all_vars = Domain::empty();
    for l in &labels {
        all_vars = all_vars.union(l);
    }
    let elim = match order {
        EliminationOrder::Given(vars) => {
            let given: Domain = vars.iter().cloned().collect();
            let missing = all_vars.difference(&given);
            if !missing.is_empty() {
                return Err(Error::Configuration(format!(
                    "elimination order is missing variables {missing}"
                )));
            }
            if vars.len() != given.len() {
                return Err(Error::Configuration("elimination order repeats a variable".into()));
            }
            vars.clone()
        }
        EliminationOrder::MinDegree => eliminate_greedy(&labels, false),
        EliminationOrder::MinFill => eliminate_greedy(&labels, true),
    };
    build_with_order(&labels, &elim)
}

/// Greedy elimination ordering on the variable interaction graph.
fn eliminate_greedy(labels: &[&Domain], by_fill: bool) -> Vec<Var> {
    let mut adjacency: BTreeMap<Var, BTreeSet<Var>> = BTreeMap::new();
    for label in labels {
        for v in label.iter() {
            let entry = adjacency.entry(v.clone()).or_default();
            for w in label.iter() {
                if w != v {
                    entry.insert(w.clone());
                }
            }
        }
    }
    let mut order = Vec::with_capacity(adjacency.len());
    while !adjacency.is_empty() {
        let cost = |v: &Var| -> usize {
            let nbrs = &adjacency[v];
            if by_fill {
                let mut fill = 0;
                for a in nbrs {
                    for b in nbrs {
                        if a < b && !adjacency[a].contains(b) {
                            fill += 1;
                        }
                    }
                }
                fill
            } else {
                nbrs.len()
            }
        };
        // first minimum in canonical order
        let best = adjacency
            .keys()
            .cloned()
            .min_by_key(|v| (cost(v), v.clone()))
            .expect("nonempty");
        let nbrs = adjacency.remove(&best).unwrap_or_default();
        for a in &nbrs {
            if let Some(set) = adjacency.get_mut(a) {
                set.remove(&best);
                set.extend(nbrs.iter().filter(|&b| b != a).cloned());
            }
        }
        order.push(best);
    }
    order
}

fn build_with_order(labels: &[&Domain], elim: &[Var]) -> Result<CoveringJoinTree> {
    if elim.is_empty() {
        // all factors are constants; one node over the empty domain
        return CoveringJoinTree::from_parts(
            vec![Domain::empty()],
            vec![None],
            vec![0; labels.len()],
        );
    }
    let position: BTreeMap<&Var, usize> = elim.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let n = elim.len();
    let root = n - 1;

    // route each factor to the bucket of its first-eliminated variable
    let mut demands: Vec<Domain> = elim.iter().cloned().map(Domain::singleton).collect();
    let mut assignment = Vec::with_capacity(labels.len());
    let mut has_factor = vec![false; n];
    for label in labels {
        let bucket = match label.iter().map(|v| position[v]).min() {
            Some(b) => b,
            None => root, // constant factor
        };
        demands[bucket] = demands[bucket].union(label);
        assignment.push(bucket);
        has_factor[bucket] = true;
    }

    // eliminate bucket by bucket, forwarding the remainder
    let mut node_labels = vec![Domain::empty(); n];
    let mut parent = vec![None; n];
    for i in 0..n {
        node_labels[i] = demands[i].clone();
        let message = demands[i].difference(&Domain::singleton(elim[i].clone()));
        if let Some(dest) = message.iter().map(|v| position[v]).min() {
            debug_assert!(dest > i, "messages travel forward in the order");
            demands[dest] = demands[dest].union(&message);
            parent[i] = Some(dest);
        } else if i != root {
            // nothing left to say; stay connected through an empty separator
            parent[i] = Some(i + 1);
        }
    }

    prune_absorbed(&mut node_labels, &mut parent, &mut assignment, &mut has_factor);
    CoveringJoinTree::from_parts(node_labels, parent, assignment)
}

/// Removes factor-less nodes whose label is contained in a neighbor's,
/// splicing their children onto the absorbing neighbor. Keeps the running
/// intersection property: any path through the removed node now runs
/// through a superset label.
fn prune_absorbed(
    labels: &mut Vec<Domain>,
    parent: &mut Vec<Option<NodeId>>,
    assignment: &mut [NodeId],
    has_factor: &mut Vec<bool>,
) {
    let n = labels.len();
    let mut alive: Vec<bool> = vec![true; n];
    let children_of = |parent: &[Option<NodeId>], alive: &[bool], i: NodeId| -> Vec<NodeId> {
        (0..n).filter(|&c| alive[c] && parent[c] == Some(i)).collect()
    };

    let mut changed = true;
    while changed {
        changed = false;
        for i in 0..n {
            if !alive[i] || has_factor[i] {
                continue;
            }
            let kids = children_of(parent, &alive, i);
            // absorb into the parent when possible, else the first child
            // whose label swallows ours
            let target = match parent[i] {
                Some(p) if alive[p] && labels[i].is_subset(&labels[p]) => Some(p),
                _ => kids
                    .iter()
                    .copied()
                    .find(|&c| labels[i].is_subset(&labels[c])),
            };
            let Some(t) = target else { continue };
            for c in kids {
                if c != t {
                    parent[c] = Some(t);
                }
            }
            if parent[i] == Some(t) {
                // children already rewired above
            } else {
                parent[t] = parent[i];
            }
            alive[i] = false;
            changed = true;
        }
    }

    // compact ids
    let mut remap = vec![usize::MAX; n];
    let mut next = 0;
    for i in 0..n {
        if alive[i] {
            remap[i] = next;
            next += 1;
        }
    }
    let mut new_labels = Vec::with_capacity(next);
    let mut new_parent = Vec::with_capacity(next);
    let mut new_has = Vec::with_capacity(next);
    for i in 0..n {
        if alive[i] {
            new_labels.push(labels[i].clone());
            new_parent.push(parent[i].map(|p| remap[p]));
            new_has.push(has_factor[i]);
        }
    }
    for a in assignment.iter_mut() {
        *a = remap[*a];
    }
    *labels = new_labels;
    *parent = new_parent;
    *has_factor = new_has;
}
