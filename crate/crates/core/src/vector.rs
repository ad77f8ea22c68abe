//! Finite-support vectors on the dyadic tree with exact rational entries.

use std::collections::BTreeMap;

use num::{Signed, Zero};

use crate::error::{JtError, Result};
use crate::rational::Rational;
use crate::tree::{complete_closure, Node, NodeSet, Segment};

/// A vector of `c00(T)`: finitely many nonzero rational coordinates.
///
/// Zero coordinates are never stored, so the key set is exactly the support.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct TreeVector {
    entries: BTreeMap<Node, Rational>,
}

impl TreeVector {
    pub fn zero() -> TreeVector {
        TreeVector::default()
    }

    pub fn new(entries: BTreeMap<Node, Rational>) -> TreeVector {
        TreeVector {
            entries: entries.into_iter().filter(|(_, v)| !v.is_zero()).collect(),
        }
    }

    /// The basis vector `e_node`.
    pub fn unit(node: Node) -> TreeVector {
        TreeVector::new(BTreeMap::from([(node, Rational::from_integer(1.into()))]))
    }

    pub fn get(&self, node: &Node) -> Rational {
        self.entries
            .get(node)
            .cloned()
            .unwrap_or_else(Rational::zero)
    }

    pub fn entries(&self) -> &BTreeMap<Node, Rational> {
        &self.entries
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Node, &Rational)> {
        self.entries.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.entries.values().all(|v| v.is_positive())
    }

    /// Fails with a positivity error naming the first negative node.
    pub fn require_nonnegative(&self) -> Result<()> {
        match self.entries.iter().find(|(_, v)| v.is_negative()) {
            Some((node, _)) => Err(JtError::Positivity(node.to_string())),
            None => Ok(()),
        }
    }

    pub fn support(&self) -> NodeSet {
        self.entries.keys().copied().collect()
    }

    pub fn range(&self) -> NodeSet {
        complete_closure(&self.support())
    }

    pub fn l2_sq(&self) -> Rational {
        self.entries.values().map(|v| v * v).sum()
    }

    pub fn restrict(&self, k: &NodeSet) -> TreeVector {
        self.filter(|node| k.contains(node))
    }

    /// Restriction to the wedge `W_a = { b : a <= b }`.
    pub fn restrict_wedge(&self, a: &Node) -> TreeVector {
        self.filter(|node| a.leq(node))
    }

    fn filter(&self, keep: impl Fn(&Node) -> bool) -> TreeVector {
        TreeVector {
            entries: self
                .entries
                .iter()
                .filter(|(node, _)| keep(node))
                .map(|(n, v)| (*n, v.clone()))
                .collect(),
        }
    }

    pub fn segment_sum(&self, s: &Segment) -> Rational {
        s.members().map(|node| self.get(&node)).sum()
    }

    pub fn add(&self, other: &TreeVector) -> TreeVector {
        let mut entries = self.entries.clone();
        for (node, v) in &other.entries {
            *entries.entry(*node).or_insert_with(Rational::zero) += v;
        }
        TreeVector::new(entries)
    }

    pub fn sub(&self, other: &TreeVector) -> TreeVector {
        self.add(&other.scale(&-Rational::from_integer(1.into())))
    }

    pub fn scale(&self, factor: &Rational) -> TreeVector {
        TreeVector::new(self.entries.iter().map(|(n, v)| (*n, v * factor)).collect())
    }
}

impl FromIterator<(Node, Rational)> for TreeVector {
    fn from_iter<I: IntoIterator<Item = (Node, Rational)>>(iter: I) -> TreeVector {
        TreeVector::new(iter.into_iter().collect())
    }
}

pub fn support(x: &TreeVector) -> NodeSet {
    x.support()
}

pub fn range(x: &TreeVector) -> NodeSet {
    x.range()
}

pub fn l2_sq(x: &TreeVector) -> Rational {
    x.l2_sq()
}

pub fn restrict(x: &TreeVector, k: &NodeSet) -> TreeVector {
    x.restrict(k)
}

pub fn segment_sum(x: &TreeVector, s: &Segment) -> Rational {
    x.segment_sum(s)
}
