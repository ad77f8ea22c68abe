//! Separation, extremality certificates, perturbation witnesses and the
//! Equal Sums check.

use std::collections::BTreeMap;

use num::Zero;

use crate::error::{JtError, Result};
use crate::greedy::{segment_sums, wedge_max_sum, SupportTree};
use crate::norm::{constrained_norm_sq, enumerate_norming, gap, jt_norm_sq, Constraint};
use crate::rational::{int, Rational};
use crate::tree::{comparable_pairs, parent_child_pairs, Node, Segment};
use crate::vector::TreeVector;

/// Largest number of halvings tried when searching for a witness `ε`.
pub const MAX_HALVINGS: u32 = 64;

/// Which comparable pairs of `ran(x)` the separation check visits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum PairMode {
    /// Parent-child pairs only.
    #[default]
    Adjacent,
    /// Every comparable pair.
    AllPairs,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeparationReport {
    pub separated: bool,
    /// Gap of every visited pair `(u, v)` with `u < v`.
    pub pair_gaps: BTreeMap<(Node, Node), Rational>,
    /// First parent-child pair with a positive gap, in canonical order.
    pub first_blocked_pair: Option<(Node, Node)>,
}

pub fn is_separated(x: &TreeVector) -> SeparationReport {
    is_separated_with(x, PairMode::Adjacent)
}

pub fn is_separated_with(x: &TreeVector, mode: PairMode) -> SeparationReport {
    let ran = x.range();
    let pairs = match mode {
        PairMode::Adjacent => parent_child_pairs(&ran),
        PairMode::AllPairs => comparable_pairs(&ran),
    };
    let pair_gaps: BTreeMap<(Node, Node), Rational> = pairs
        .into_iter()
        .map(|(u, v)| {
            let g = gap(x, &u, &v).expect("pairs are distinct nodes of ran(x)");
            ((u, v), g)
        })
        .collect();
    let separated = pair_gaps.values().all(Zero::is_zero);
    let first_blocked_pair = pair_gaps
        .iter()
        .find(|((u, v), g)| v.parent() == Some(*u) && !g.is_zero())
        .map(|(pair, _)| *pair);
    SeparationReport {
        separated,
        pair_gaps,
        first_blocked_pair,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    Extreme,
    NotExtreme,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Extreme => "extreme",
            Verdict::NotExtreme => "not-extreme",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Basis {
    L2Equality,
    SeparatedFiniteSupport,
    BlockedPair,
}

impl Basis {
    pub fn as_str(&self) -> &'static str {
        match self {
            Basis::L2Equality => "l2-equality",
            Basis::SeparatedFiniteSupport => "separated-finite-support",
            Basis::BlockedPair => "blocked-pair",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtremeCertificate {
    pub verdict: Verdict,
    pub basis: Basis,
    pub blocked_pair: Option<(Node, Node)>,
    pub witness_y: Option<TreeVector>,
    pub epsilon: Option<Rational>,
    pub norm_sq: Rational,
}

pub fn certify_extreme(x: &TreeVector) -> Result<ExtremeCertificate> {
    if x.is_zero() {
        return Err(JtError::Domain(
            "the zero vector has no extremality certificate".into(),
        ));
    }
    let norm_sq = jt_norm_sq(x).norm_sq;
    let extreme = |basis| ExtremeCertificate {
        verdict: Verdict::Extreme,
        basis,
        blocked_pair: None,
        witness_y: None,
        epsilon: None,
        norm_sq: norm_sq.clone(),
    };
    if norm_sq == x.l2_sq() {
        return Ok(extreme(Basis::L2Equality));
    }
    let report = is_separated(x);
    if report.separated {
        return Ok(extreme(Basis::SeparatedFiniteSupport));
    }
    let (u, v) = report.first_blocked_pair.ok_or_else(|| {
        JtError::Internal("not separated, yet no parent-child pair is blocked".into())
    })?;
    let (y, eps) = perturbation_witness(x, &u, &v)?;
    Ok(ExtremeCertificate {
        verdict: Verdict::NotExtreme,
        basis: Basis::BlockedPair,
        blocked_pair: Some((u, v)),
        witness_y: Some(y),
        epsilon: Some(eps),
        norm_sq,
    })
}

/// `y = ε(e_u - e_v)` with `||x + y|| = ||x - y|| = ||x||`, halving `ε` from 1.
pub fn perturbation_witness(x: &TreeVector, u: &Node, v: &Node) -> Result<(TreeVector, Rational)> {
    perturbation_witness_from(x, u, v, &int(1))
}

/// As [`perturbation_witness`], starting the search at `start`.
pub fn perturbation_witness_from(
    x: &TreeVector,
    u: &Node,
    v: &Node,
    start: &Rational,
) -> Result<(TreeVector, Rational)> {
    if v.parent() != Some(*u) {
        return Err(JtError::Domain(format!("{v:?} is not a child of {u:?}")));
    }
    if *start <= Rational::zero() {
        return Err(JtError::Domain(format!(
            "starting epsilon {start} is not positive"
        )));
    }
    if gap(x, u, v)?.is_zero() {
        return Err(JtError::Domain(format!(
            "{u:?} and {v:?} are separable; no perturbation along this pair"
        )));
    }
    let target = jt_norm_sq(x).norm_sq;
    let direction = TreeVector::unit(*u).sub(&TreeVector::unit(*v));
    let two = int(2);
    let mut eps = start.clone();
    for _ in 0..=MAX_HALVINGS {
        let y = direction.scale(&eps);
        if jt_norm_sq(&x.add(&y)).norm_sq == target && jt_norm_sq(&x.sub(&y)).norm_sq == target {
            return Ok((y, eps));
        }
        eps /= &two;
    }
    Err(JtError::Internal(format!(
        "no witness along ({u:?}, {v:?}) after {MAX_HALVINGS} halvings"
    )))
}

/// Whether `y` sums to zero on every segment of every norming partition of `x`.
pub fn vanishes_on_all_norming(x: &TreeVector, y: &TreeVector, cap: usize) -> Result<bool> {
    let norming = enumerate_norming(x, cap)?;
    Ok(norming
        .iter()
        .all(|p| p.segments().all(|s| y.segment_sum(s).is_zero())))
}

/// `(every support node isolatable, ||x||^2 = l2^2)`.
pub fn all_isolatable_implies_l2(x: &TreeVector) -> (bool, bool) {
    let norm_sq = jt_norm_sq(x).norm_sq;
    let isolatable = x.support().iter().all(|a| {
        constrained_norm_sq(x, &[Constraint::IsolateNode(*a)])
            .map(|r| r.norm_sq == norm_sq)
            .expect("support nodes lie in ran(x) and one forced singleton is feasible")
    });
    (isolatable, norm_sq == x.l2_sq())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EqualSumsReport {
    pub holds: bool,
    /// Sum of `x` from support node `u` down to the point where a branch
    /// leaves `ran(x)`, keyed by `(u, exit)`; `exit` is the first node of the
    /// branch outside `ran(x)`.
    pub branch_sums: BTreeMap<(Node, Node), Rational>,
    /// `(S_{a0}, S_{a1})` over the tree children of each non-maximal support
    /// node `a`.
    pub sibling_balance: BTreeMap<Node, (Rational, Rational)>,
    /// Largest branch sum from a minimal support node.
    pub sigma: Rational,
}

impl EqualSumsReport {
    pub fn siblings_balanced(&self) -> bool {
        self.sibling_balance.values().all(|(a, b)| a == b)
    }
}

pub fn equal_sums_report(x: &TreeVector) -> Result<EqualSumsReport> {
    x.require_nonnegative()?;
    let ran = x.range();
    let tree = SupportTree::new(x);
    let sums = segment_sums(x, &tree);

    let mut branch_sums = BTreeMap::new();
    let mut holds = true;
    for u in tree.nodes() {
        let mut seen: Option<Rational> = None;
        for w in ran.iter().filter(|w| u.leq(w)) {
            let sum = x.segment_sum(&Segment::new(*u, *w).expect("u <= w"));
            for exit in [w.child(0), w.child(1)] {
                if ran.contains(&exit) {
                    continue;
                }
                match &seen {
                    Some(s) if *s != sum => holds = false,
                    Some(_) => {}
                    None => seen = Some(sum.clone()),
                }
                branch_sums.insert((*u, exit), sum.clone());
            }
        }
    }

    let sibling_balance = tree
        .nodes()
        .iter()
        .filter(|a| !tree.is_leaf(a))
        .map(|a| {
            let s0 = wedge_max_sum(&tree, &sums, &a.child(0));
            let s1 = wedge_max_sum(&tree, &sums, &a.child(1));
            (*a, (s0, s1))
        })
        .collect();

    let minimal = tree.minimal_nodes();
    let sigma = branch_sums
        .iter()
        .filter(|((u, _), _)| minimal.contains(u))
        .map(|(_, s)| s.clone())
        .max()
        .unwrap_or_else(Rational::zero);

    Ok(EqualSumsReport {
        holds,
        branch_sums,
        sibling_balance,
        sigma,
    })
}
