//! Exact squared JT norms, constrained variants, and norming partitions.
//!
//! Only *canonical* segments are searched: both endpoints lie in `supp(x)`.
//! Any segment can be trimmed to the hull of its support without changing its
//! sum; trimming keeps segments disjoint and never makes a separated pair
//! share a segment, so every optimum (constrained or not) is attained on a
//! canonical partition. Forced segments are the one exception and are kept
//! verbatim.

mod dp;
mod oracle;

use std::collections::BTreeSet;
use std::fmt;

use num::Zero;

use crate::error::{JtError, Result};
use crate::rational::Rational;
use crate::tree::{Node, Segment};
use crate::vector::TreeVector;

pub use oracle::{canonical_segments, for_each_family};

/// Default node cap for exhaustive enumeration over `ran(x)`.
pub const DEFAULT_ORACLE_CAP: usize = 13;

/// A family of pairwise disjoint segments.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Partition {
    segments: BTreeSet<Segment>,
}

impl Partition {
    pub fn empty() -> Partition {
        Partition::default()
    }

    pub fn new(segments: impl IntoIterator<Item = Segment>) -> Result<Partition> {
        let segments: Vec<Segment> = segments.into_iter().collect();
        for (i, a) in segments.iter().enumerate() {
            for b in &segments[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(JtError::InvalidPartition(format!("{a} overlaps {b}")));
                }
            }
        }
        Ok(Partition {
            segments: segments.into_iter().collect(),
        })
    }

    pub fn segments(&self) -> impl Iterator<Item = &Segment> {
        self.segments.iter()
    }

    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }

    pub fn contains(&self, s: &Segment) -> bool {
        self.segments.contains(s)
    }

    /// The segment containing `node`, if any.
    pub fn segment_of(&self, node: &Node) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(node))
    }

    /// Every segment has both endpoints in `supp(x)`.
    pub fn is_canonical_for(&self, x: &TreeVector) -> bool {
        let supp = x.entries();
        self.segments
            .iter()
            .all(|s| supp.contains_key(&s.top()) && supp.contains_key(&s.bottom()))
    }

    /// The all-singletons partition over `supp(x)`.
    pub fn singletons(x: &TreeVector) -> Partition {
        Partition {
            segments: x.support().into_iter().map(Segment::singleton).collect(),
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, s) in self.segments.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{s}")?;
        }
        write!(f, "}}")
    }
}

/// A restriction on the partitions admitted by [`constrained_norm_sq`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Constraint {
    /// No segment contains both nodes.
    SeparatePair(Node, Node),
    /// The singleton `[a, a]` is one of the segments.
    IsolateNode(Node),
    /// The given segment is one of the segments.
    ForceSegment(Segment),
}

impl Constraint {
    pub fn is_satisfied_by(&self, p: &Partition) -> bool {
        match self {
            Constraint::SeparatePair(u, v) => !p.segments().any(|s| s.contains(u) && s.contains(v)),
            Constraint::IsolateNode(a) => p.contains(&Segment::singleton(*a)),
            Constraint::ForceSegment(s) => p.contains(s),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormResult {
    pub norm_sq: Rational,
    pub witness: Partition,
}

/// `||x||_P^2`: the sum of squared segment sums.
pub fn score(x: &TreeVector, p: &Partition) -> Rational {
    p.segments()
        .map(|s| {
            let t = x.segment_sum(s);
            &t * &t
        })
        .sum()
}

/// Like [`score`], for a raw segment list that may overlap.
pub fn score_segments(x: &TreeVector, segments: &[Segment]) -> Result<Rational> {
    let p = Partition::new(segments.iter().copied())?;
    Ok(score(x, &p))
}

/// `||x||_JT^2` with a canonical maximizing partition.
pub fn jt_norm_sq(x: &TreeVector) -> NormResult {
    constrained_norm_sq(x, &[]).expect("the unconstrained problem is always feasible")
}

/// Maximum score over canonical partitions that satisfy every constraint.
pub fn constrained_norm_sq(x: &TreeVector, cs: &[Constraint]) -> Result<NormResult> {
    let result = dp::solve(x, cs)?;
    let rescored = score(x, &result.witness);
    if rescored != result.norm_sq {
        return Err(JtError::Internal(format!(
            "witness {} scores {rescored}, table value {}",
            result.witness, result.norm_sq
        )));
    }
    Ok(result)
}

/// `||x||^2` minus the best score among partitions separating `u` from `v`.
pub fn gap(x: &TreeVector, u: &Node, v: &Node) -> Result<Rational> {
    if u == v {
        return Err(JtError::Domain(format!(
            "gap needs two distinct nodes, got {u:?} twice"
        )));
    }
    let ran = x.range();
    for node in [u, v] {
        if !ran.contains(node) {
            return Err(JtError::Domain(format!("node {node:?} is outside ran(x)")));
        }
    }
    if !u.comparable(v) {
        return Ok(Rational::zero());
    }
    let full = jt_norm_sq(x).norm_sq;
    let separated = constrained_norm_sq(x, &[Constraint::SeparatePair(*u, *v)])?.norm_sq;
    Ok(full - separated)
}

/// Exhaustive maximum over all families of disjoint canonical segments.
pub fn oracle_norm_sq(x: &TreeVector, cap: usize) -> Result<Rational> {
    let mut best = Rational::zero();
    for_each_family(x, cap, |_, value| {
        if *value > best {
            best = value.clone();
        }
    })?;
    Ok(best)
}

/// All canonical partitions whose score equals `||x||_JT^2`, sorted.
pub fn enumerate_norming(x: &TreeVector, cap: usize) -> Result<Vec<Partition>> {
    let target = jt_norm_sq(x).norm_sq;
    let mut out = Vec::new();
    let mut failure = None;
    for_each_family(x, cap, |family, value| {
        if *value == target {
            match Partition::new(family.iter().copied()) {
                Ok(p) => out.push(p),
                Err(e) => failure = Some(e),
            }
        }
    })?;
    if let Some(e) = failure {
        return Err(JtError::Internal(format!(
            "enumerated family is not a partition: {e}"
        )));
    }
    out.sort();
    Ok(out)
}
