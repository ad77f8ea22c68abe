//! Nodes of the dyadic tree, segments, and complete-subtree combinatorics.
//!
//! A [`Node`] is a finite 0/1 word; the root is the empty word. The tree order
//! is the prefix order. A [`Segment`] is an order-convex chain stored by its two
//! endpoints and only materialized on request.

use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::error::{JtError, Result};

/// Default cap on the depth of nodes accepted from input.
pub const DEFAULT_MAX_DEPTH: usize = 30;

/// Largest depth a [`Node`] can represent. Input caps must stay strictly below
/// this so that children of accepted nodes are still representable.
pub const REPRESENTABLE_DEPTH: usize = 63;

/// Finite set of nodes, iterated in canonical order (depth, then bits).
pub type NodeSet = BTreeSet<Node>;

/// A position in the dyadic tree.
///
/// The path is stored most-significant-bit first in the low `depth` bits of
/// `bits`, so the derived ordering is the canonical one: by depth, then
/// lexicographically within a level.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    depth: u8,
    bits: u64,
}

impl Node {
    pub const fn root() -> Node {
        Node { depth: 0, bits: 0 }
    }

    /// Parses a bit string, rejecting anything deeper than `max_depth`.
    pub fn parse(s: &str, max_depth: usize) -> Result<Node> {
        let cap = max_depth.min(REPRESENTABLE_DEPTH - 1);
        if s.len() > cap {
            return Err(JtError::Parse(format!(
                "node {s:?} has depth {} above the cap {cap}",
                s.len()
            )));
        }
        let mut node = Node::root();
        for ch in s.chars() {
            node = match ch {
                '0' => node.child(0),
                '1' => node.child(1),
                other => {
                    return Err(JtError::Parse(format!(
                        "node {s:?} contains {other:?}; expected only '0' and '1'"
                    )))
                }
            };
        }
        Ok(node)
    }

    pub fn depth(&self) -> usize {
        self.depth as usize
    }

    pub fn is_root(&self) -> bool {
        self.depth == 0
    }

    /// Bit at position `i` (0 is the bit just below the root).
    pub fn bit(&self, i: usize) -> u8 {
        assert!(i < self.depth(), "bit index {i} out of range");
        ((self.bits >> (self.depth() - 1 - i)) & 1) as u8
    }

    pub fn child(&self, bit: u8) -> Node {
        assert!(self.depth() < REPRESENTABLE_DEPTH, "node too deep");
        Node {
            depth: self.depth + 1,
            bits: (self.bits << 1) | u64::from(bit & 1),
        }
    }

    pub fn parent(&self) -> Option<Node> {
        if self.is_root() {
            None
        } else {
            Some(Node {
                depth: self.depth - 1,
                bits: self.bits >> 1,
            })
        }
    }

    /// Last bit of the path, `None` for the root.
    pub fn last_bit(&self) -> Option<u8> {
        (!self.is_root()).then_some((self.bits & 1) as u8)
    }

    /// The ancestor of `self` at depth `d` (`self` when `d == depth`).
    pub fn ancestor_at(&self, d: usize) -> Node {
        assert!(d <= self.depth(), "ancestor depth {d} below node");
        Node {
            depth: d as u8,
            bits: self.bits >> (self.depth() - d),
        }
    }

    /// Initial-segment order: `self` is a prefix of `other`.
    pub fn leq(&self, other: &Node) -> bool {
        self.depth <= other.depth && other.ancestor_at(self.depth()) == *self
    }

    pub fn lt(&self, other: &Node) -> bool {
        self != other && self.leq(other)
    }

    pub fn comparable(&self, other: &Node) -> bool {
        self.leq(other) || other.leq(self)
    }

    /// Plain lexicographic comparison of the bit strings ("00" < "1").
    pub fn lex_cmp(&self, other: &Node) -> Ordering {
        let common = self.depth.min(other.depth) as usize;
        let a = self.ancestor_at(common);
        let b = other.ancestor_at(common);
        a.bits.cmp(&b.bits).then(self.depth.cmp(&other.depth))
    }

    /// Nodes from the root down to `self`, inclusive.
    pub fn path_from_root(&self) -> impl Iterator<Item = Node> + '_ {
        (0..=self.depth()).map(move |d| self.ancestor_at(d))
    }

    /// Human-facing label; the root renders as `∅`.
    pub fn label(&self) -> String {
        if self.is_root() {
            "∅".to_string()
        } else {
            self.to_string()
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.depth() {
            write!(f, "{}", self.bit(i))?;
        }
        Ok(())
    }
}

impl fmt::Debug for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Node({:?})", self.to_string())
    }
}

impl FromStr for Node {
    type Err = JtError;

    fn from_str(s: &str) -> Result<Node> {
        Node::parse(s, DEFAULT_MAX_DEPTH)
    }
}

/// An order-convex chain `[top, bottom]` of the tree.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Segment {
    top: Node,
    bottom: Node,
}

impl Segment {
    pub fn new(top: Node, bottom: Node) -> Result<Segment> {
        if top.leq(&bottom) {
            Ok(Segment { top, bottom })
        } else {
            Err(JtError::Domain(format!(
                "segment top {top:?} is not an ancestor of bottom {bottom:?}"
            )))
        }
    }

    pub fn singleton(node: Node) -> Segment {
        Segment {
            top: node,
            bottom: node,
        }
    }

    pub fn top(&self) -> Node {
        self.top
    }

    pub fn bottom(&self) -> Node {
        self.bottom
    }

    pub fn len(&self) -> usize {
        self.bottom.depth() - self.top.depth() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, node: &Node) -> bool {
        self.top.leq(node) && node.leq(&self.bottom)
    }

    /// Members from top to bottom.
    pub fn members(&self) -> impl Iterator<Item = Node> + '_ {
        (self.top.depth()..=self.bottom.depth()).map(move |d| self.bottom.ancestor_at(d))
    }

    pub fn is_disjoint(&self, other: &Segment) -> bool {
        !(self.top.leq(&other.bottom) && other.top.leq(&self.bottom))
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.top.label(), self.bottom.label())
    }
}

pub fn leq(a: &Node, b: &Node) -> bool {
    a.leq(b)
}

pub fn segment_members(s: &Segment) -> Vec<Node> {
    s.members().collect()
}

pub fn segments_disjoint(s1: &Segment, s2: &Segment) -> bool {
    s1.is_disjoint(s2)
}

/// Smallest complete subtree containing `a`.
///
/// Every member `b` pulls in the interval from its shallowest ancestor in `a`
/// down to itself; the union of those intervals is the closure.
pub fn complete_closure(a: &NodeSet) -> NodeSet {
    let mut out = NodeSet::new();
    for b in a {
        let top = b
            .path_from_root()
            .find(|anc| a.contains(anc))
            .expect("every node is its own ancestor");
        for d in top.depth()..=b.depth() {
            out.insert(b.ancestor_at(d));
        }
    }
    out
}

pub fn is_complete_subtree(k: &NodeSet) -> bool {
    k.iter().all(|b| {
        let mut above_member = false;
        b.path_from_root().all(|anc| {
            let inside = k.contains(&anc);
            let ok = inside || !above_member;
            above_member |= inside;
            ok
        })
    })
}

/// All ordered pairs `(u, v)` of `k` with `u < v`, in canonical order.
pub fn comparable_pairs(k: &NodeSet) -> Vec<(Node, Node)> {
    let mut out = Vec::new();
    for u in k {
        for v in k {
            if u.lt(v) {
                out.push((*u, *v));
            }
        }
    }
    out
}

/// Parent-child pairs `(parent, child)` with both ends in `k`.
pub fn parent_child_pairs(k: &NodeSet) -> Vec<(Node, Node)> {
    let mut out: Vec<(Node, Node)> = k
        .iter()
        .filter_map(|v| v.parent().filter(|p| k.contains(p)).map(|p| (p, *v)))
        .collect();
    out.sort();
    out
}
