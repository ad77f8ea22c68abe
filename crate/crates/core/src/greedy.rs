//! Positive vectors: maximal segment sums, the greedy partition, the
//! recursive norm formula and the consistency check.
//!
//! "Children" here are *induced support children*: the minimal support nodes
//! strictly below a support node. They need not be tree children, and a node
//! may have more than two of them.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num::Zero;

use crate::error::{JtError, Result};
use crate::norm::{constrained_norm_sq, jt_norm_sq, Constraint, Partition};
use crate::rational::Rational;
use crate::tree::{Node, NodeSet, Segment};
use crate::vector::TreeVector;

/// How to pick among several heaviest children.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TiePolicy {
    /// Lexicographically smallest path (prefers bit 0).
    #[default]
    LexMin,
    /// Lexicographically largest path.
    LexMax,
}

impl TiePolicy {
    fn pick(&self, ties: &[Node]) -> Option<Node> {
        let key = |a: &&Node, b: &&Node| a.lex_cmp(b);
        match self {
            TiePolicy::LexMin => ties.iter().min_by(key).copied(),
            TiePolicy::LexMax => ties.iter().max_by(key).copied(),
        }
    }
}

/// `supp(x)` with its induced parent/child structure.
#[derive(Clone, Debug)]
pub struct SupportTree {
    nodes: NodeSet,
    parent: BTreeMap<Node, Option<Node>>,
    children: BTreeMap<Node, Vec<Node>>,
}

impl SupportTree {
    pub fn new(x: &TreeVector) -> SupportTree {
        let nodes = x.support();
        let mut parent = BTreeMap::new();
        let mut children: BTreeMap<Node, Vec<Node>> =
            nodes.iter().map(|n| (*n, Vec::new())).collect();
        for v in &nodes {
            let p = (0..v.depth())
                .rev()
                .map(|d| v.ancestor_at(d))
                .find(|anc| nodes.contains(anc));
            parent.insert(*v, p);
            if let Some(p) = p {
                children
                    .get_mut(&p)
                    .expect("parent is a support node")
                    .push(*v);
            }
        }
        SupportTree {
            nodes,
            parent,
            children,
        }
    }

    pub fn nodes(&self) -> &NodeSet {
        &self.nodes
    }

    pub fn induced_parent(&self, u: &Node) -> Option<Node> {
        self.parent.get(u).copied().flatten()
    }

    pub fn induced_children(&self, u: &Node) -> &[Node] {
        self.children.get(u).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn is_leaf(&self, u: &Node) -> bool {
        self.induced_children(u).is_empty()
    }

    pub fn minimal_nodes(&self) -> Vec<Node> {
        self.nodes
            .iter()
            .filter(|n| self.induced_parent(n).is_none())
            .copied()
            .collect()
    }

    /// Minimal support nodes strictly below `a`; for support nodes these are
    /// the induced children.
    pub fn minimal_below(&self, a: &Node) -> Vec<Node> {
        if self.nodes.contains(a) {
            return self.induced_children(a).to_vec();
        }
        self.nodes
            .iter()
            .filter(|v| a.lt(v) && self.induced_parent(v).is_none_or(|p| !a.lt(&p)))
            .copied()
            .collect()
    }
}

/// Output of the greedy pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GreedyTrace {
    /// `S_u(x)` for every support node.
    pub s_values: BTreeMap<Node, Rational>,
    /// The child each support node links to, if any.
    pub chosen: BTreeMap<Node, Option<Node>>,
    /// Heaviest induced children of each support node.
    pub ties: BTreeMap<Node, Vec<Node>>,
}

/// `S_u(x)` for every support node, in one bottom-up pass.
pub fn segment_sums(x: &TreeVector, tree: &SupportTree) -> BTreeMap<Node, Rational> {
    let mut s: BTreeMap<Node, Rational> = BTreeMap::new();
    for u in tree.nodes().iter().rev() {
        let best_child = tree
            .induced_children(u)
            .iter()
            .map(|c| s[c].clone())
            .max()
            .filter(|m| *m > Rational::zero())
            .unwrap_or_else(Rational::zero);
        s.insert(*u, x.get(u) + best_child);
    }
    s
}

/// `S_a(x)`: the largest sum of a downward segment starting at `a`.
pub fn max_segment_sum(x: &TreeVector, a: &Node) -> Result<Rational> {
    x.require_nonnegative()?;
    if !x.range().contains(a) {
        return Err(JtError::Domain(format!("node {a:?} is outside ran(x)")));
    }
    let tree = SupportTree::new(x);
    let s = segment_sums(x, &tree);
    Ok(wedge_max_sum(&tree, &s, a))
}

/// `S_a(x)` for any node, given the support sums; 0 when `W_a` misses the
/// support.
pub fn wedge_max_sum(tree: &SupportTree, sums: &BTreeMap<Node, Rational>, a: &Node) -> Rational {
    if let Some(v) = sums.get(a) {
        return v.clone();
    }
    tree.minimal_below(a)
        .iter()
        .map(|c| sums[c].clone())
        .max()
        .unwrap_or_else(Rational::zero)
}

fn heaviest(children: &[Node], s: &BTreeMap<Node, Rational>) -> Vec<Node> {
    let Some(max) = children.iter().map(|c| &s[c]).max() else {
        return Vec::new();
    };
    let mut out: Vec<Node> = children.iter().filter(|c| &s[*c] == max).copied().collect();
    out.sort_by(|a, b| a.lex_cmp(b));
    out
}

pub fn greedy_trace(x: &TreeVector, policy: TiePolicy) -> Result<GreedyTrace> {
    x.require_nonnegative()?;
    let tree = SupportTree::new(x);
    let s_values = segment_sums(x, &tree);
    let mut chosen = BTreeMap::new();
    let mut ties = BTreeMap::new();
    for u in tree.nodes() {
        let t = heaviest(tree.induced_children(u), &s_values);
        let pick = policy.pick(&t).filter(|c| s_values[c] > Rational::zero());
        chosen.insert(*u, pick);
        ties.insert(*u, t);
    }
    Ok(GreedyTrace {
        s_values,
        chosen,
        ties,
    })
}

/// Segments obtained by following `links` down from every node that is not
/// itself linked to.
pub fn partition_from_links(
    x: &TreeVector,
    links: &BTreeMap<Node, Option<Node>>,
) -> Result<Partition> {
    let linked: NodeSet = links.values().flatten().copied().collect();
    let mut segments = Vec::new();
    for head in x.support() {
        if linked.contains(&head) {
            continue;
        }
        let mut last = head;
        while let Some(Some(next)) = links.get(&last) {
            last = *next;
        }
        segments.push(Segment::new(head, last)?);
    }
    Partition::new(segments)
}

pub fn greedy_partition(x: &TreeVector) -> Result<(Partition, GreedyTrace)> {
    greedy_partition_with(x, TiePolicy::default())
}

pub fn greedy_partition_with(
    x: &TreeVector,
    policy: TiePolicy,
) -> Result<(Partition, GreedyTrace)> {
    let trace = greedy_trace(x, policy)?;
    let p = partition_from_links(x, &trace.chosen)?;
    Ok((p, trace))
}

/// Checks `||x_a||^2 = x(a)^2 + 2 x(a) max_c S_c(x) + sum_c ||x_c||^2` over the
/// induced children `c` of `a`.
pub fn recursive_norm_check(x: &TreeVector, a: &Node) -> Result<bool> {
    x.require_nonnegative()?;
    if !x.entries().contains_key(a) {
        return Err(JtError::Domain(format!("node {a:?} is not in supp(x)")));
    }
    let tree = SupportTree::new(x);
    let s = segment_sums(x, &tree);
    let xa = x.get(a);
    let kids = tree.induced_children(a);
    let heaviest = kids
        .iter()
        .map(|c| s[c].clone())
        .max()
        .unwrap_or_else(Rational::zero);
    let subtree_norms: Rational = kids
        .iter()
        .map(|c| jt_norm_sq(&x.restrict_wedge(c)).norm_sq)
        .sum();
    let two = Rational::from_integer(2.into());
    let rhs = &xa * &xa + two * &xa * heaviest + subtree_norms;
    Ok(jt_norm_sq(&x.restrict_wedge(a)).norm_sq == rhs)
}

/// A segment step that does not go to a heaviest child.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub segment: Segment,
    pub node: Node,
    pub chosen: Node,
    pub better: Node,
}

pub fn consistent_with_greedy(x: &TreeVector, p: &Partition) -> Result<(bool, Vec<Violation>)> {
    x.require_nonnegative()?;
    let tree = SupportTree::new(x);
    let s = segment_sums(x, &tree);
    let mut violations = Vec::new();
    for seg in p.segments() {
        let in_support: Vec<Node> = seg.members().filter(|m| tree.nodes().contains(m)).collect();
        for pair in in_support.windows(2) {
            let (u, c) = (pair[0], pair[1]);
            let best = heaviest(tree.induced_children(&u), &s);
            let Some(better) = best.first().copied() else {
                continue;
            };
            if s[&c].cmp(&s[&better]) == Ordering::Less {
                violations.push(Violation {
                    segment: *seg,
                    node: u,
                    chosen: c,
                    better,
                });
            }
        }
    }
    Ok((violations.is_empty(), violations))
}

/// Whether forcing `s` still attains the norm, for `s` starting at a minimal
/// support node and carrying that node's maximal segment sum.
pub fn forced_segment_is_norming(x: &TreeVector, s: &Segment) -> Result<bool> {
    x.require_nonnegative()?;
    let tree = SupportTree::new(x);
    let top = s.top();
    if !tree.nodes().contains(&top) || tree.induced_parent(&top).is_some() {
        return Err(JtError::Domain(format!(
            "segment {s} does not start at a minimal support node"
        )));
    }
    let sums = segment_sums(x, &tree);
    if x.segment_sum(s) != sums[&top] {
        return Err(JtError::Domain(format!(
            "segment {s} sums to {}, not the maximal segment sum {}",
            x.segment_sum(s),
            sums[&top]
        )));
    }
    let forced = constrained_norm_sq(x, &[Constraint::ForceSegment(*s)])?;
    Ok(forced.norm_sq == jt_norm_sq(x).norm_sq)
}
