//! Exhaustive enumeration of canonical segment families.
//!
//! Kept deliberately naive: member sets are materialized by walking parent
//! links, overlap is tested by set intersection, and every family is scored
//! from scratch. Nothing here is shared with the dynamic program.

use std::collections::HashSet;

use num::Zero;

use crate::error::{JtError, Result};
use crate::rational::Rational;
use crate::tree::{Node, Segment};
use crate::vector::TreeVector;

/// Every segment with both endpoints in `supp(x)`.
pub fn canonical_segments(x: &TreeVector) -> Vec<Segment> {
    let supp: Vec<Node> = x.entries().keys().copied().collect();
    let mut out = Vec::new();
    for top in &supp {
        for bottom in &supp {
            if bottom.to_string().starts_with(&top.to_string()) {
                out.push(Segment::new(*top, *bottom).expect("prefix implies ancestor"));
            }
        }
    }
    out
}

struct Candidate {
    segment: Segment,
    members: HashSet<Node>,
    sum: Rational,
}

fn materialize(x: &TreeVector, s: Segment) -> Candidate {
    let mut members = HashSet::new();
    let mut sum = Rational::zero();
    let mut cur = Some(s.bottom());
    while let Some(node) = cur {
        sum += x.get(&node);
        members.insert(node);
        if node == s.top() {
            break;
        }
        cur = node.parent();
    }
    Candidate {
        segment: s,
        members,
        sum,
    }
}

/// Calls `visit(family, score)` once for every family of pairwise disjoint
/// canonical segments, including the empty family.
pub fn for_each_family(
    x: &TreeVector,
    cap: usize,
    mut visit: impl FnMut(&[Segment], &Rational),
) -> Result<()> {
    let ran = x.range().len();
    if ran > cap {
        return Err(JtError::Limit(format!(
            "|ran(x)| = {ran} exceeds the oracle cap {cap}"
        )));
    }
    let candidates: Vec<Candidate> = canonical_segments(x)
        .into_iter()
        .map(|s| materialize(x, s))
        .collect();
    let mut chosen: Vec<usize> = Vec::new();
    let mut family: Vec<Segment> = Vec::new();
    recurse(&candidates, 0, &mut chosen, &mut family, &mut visit);
    Ok(())
}

fn recurse(
    candidates: &[Candidate],
    next: usize,
    chosen: &mut Vec<usize>,
    family: &mut Vec<Segment>,
    visit: &mut impl FnMut(&[Segment], &Rational),
) {
    if next == candidates.len() {
        let total: Rational = chosen
            .iter()
            .map(|&i| &candidates[i].sum * &candidates[i].sum)
            .sum();
        visit(family, &total);
        return;
    }
    recurse(candidates, next + 1, chosen, family, visit);
    let c = &candidates[next];
    let clashes = chosen
        .iter()
        .any(|&i| !candidates[i].members.is_disjoint(&c.members));
    if !clashes {
        chosen.push(next);
        family.push(c.segment);
        recurse(candidates, next + 1, chosen, family, visit);
        family.pop();
        chosen.pop();
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn n(s: &str) -> Node {
        s.parse().unwrap()
    }

    #[test]
    fn two_chain_has_four_families() {
        let x: TreeVector = [(n(""), int(1)), (n("0"), int(1))].into_iter().collect();
        let mut scores = Vec::new();
        for_each_family(&x, 13, |_, v| scores.push(v.clone())).unwrap();
        scores.sort();
        // empty, {ε}, {0}, {ε}+{0}, {[ε,0]}
        assert_eq!(scores, vec![int(0), int(1), int(1), int(2), int(4)]);
    }

    #[test]
    fn canonical_segments_need_support_endpoints() {
        let x: TreeVector = [(n(""), int(1)), (n("00"), int(1)), (n("01"), int(1))]
            .into_iter()
            .collect();
        assert_eq!(canonical_segments(&x).len(), 5);
    }
}
