//! Seeded random instance generators shared by the integration tests.

#![allow(dead_code)]

use jtx_core::rational::{int, ratio};
use jtx_core::tree::complete_closure;
use jtx_core::{Node, NodeSet, Rational, TreeVector};
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn n(s: &str) -> Node {
    s.parse().unwrap()
}

pub fn vec_of(items: &[(&str, i64)]) -> TreeVector {
    items.iter().map(|(k, v)| (n(k), int(*v))).collect()
}

/// All nodes of depth at most `depth`, in canonical order.
pub fn full_tree_nodes(depth: usize) -> Vec<Node> {
    let mut out = vec![Node::root()];
    let mut level = vec![Node::root()];
    for _ in 0..depth {
        level = level
            .iter()
            .flat_map(|p| [p.child(0), p.child(1)])
            .collect();
        out.extend(&level);
    }
    out
}

/// `x_n`: every node of depth at most `depth` carries 1.
pub fn full_tree(depth: usize) -> TreeVector {
    full_tree_nodes(depth)
        .into_iter()
        .map(|a| (a, int(1)))
        .collect()
}

/// `p / q` with `p` in {-3..3} minus 0 and `q` in 1..=4.
pub fn signed_entry(rng: &mut impl Rng) -> Rational {
    let p = *[-3i64, -2, -1, 1, 2, 3].choose(rng).unwrap();
    ratio(p, rng.gen_range(1..=4))
}

pub fn positive_entry(rng: &mut impl Rng) -> Rational {
    let p = rng.gen_range(1..=3);
    if rng.gen_bool(0.25) {
        ratio(p, 2)
    } else {
        int(p)
    }
}

/// Signed vector with `|ran(x)| <= max_ran`.
pub fn random_signed(rng: &mut impl Rng, max_ran: usize) -> TreeVector {
    loop {
        let depth = rng.gen_range(1..=5);
        let pool = full_tree_nodes(depth);
        let k = rng.gen_range(1..=7);
        let x: TreeVector = (0..k)
            .map(|_| (*pool.choose(rng).unwrap(), signed_entry(rng)))
            .collect();
        if !x.is_zero() && x.range().len() <= max_ran {
            return x;
        }
    }
}

/// Positive vector on the full tree of depth <= 6, each node kept with a
/// per-instance density of at most 60%.
pub fn random_positive(rng: &mut impl Rng) -> TreeVector {
    loop {
        let depth = rng.gen_range(1..=6);
        let density = rng.gen_range(0.05..=0.6);
        let mut entries = Vec::new();
        for a in full_tree_nodes(depth) {
            if rng.gen_bool(density) {
                entries.push((a, positive_entry(rng)));
            }
        }
        let x: TreeVector = entries.into_iter().collect();
        if !x.is_zero() {
            return x;
        }
    }
}

/// Signed vector supported on one branch of depth <= 8.
pub fn random_single_branch(rng: &mut impl Rng) -> TreeVector {
    loop {
        let len = rng.gen_range(1..=8);
        let mut chain = vec![Node::root()];
        for _ in 0..len {
            let last = *chain.last().unwrap();
            chain.push(last.child(rng.gen_range(0..2)));
        }
        let mut entries = Vec::new();
        for a in chain {
            if rng.gen_bool(0.6) {
                entries.push((a, signed_entry(rng)));
            }
        }
        let x: TreeVector = entries.into_iter().collect();
        if !x.is_zero() {
            return x;
        }
    }
}

/// Signed vector supported on pairwise incomparable segments: one chain below
/// each of several distinct nodes of a common level.
pub fn random_incomparable_segments(rng: &mut impl Rng) -> TreeVector {
    loop {
        let level = rng.gen_range(1..=3);
        let mut heads: Vec<Node> = full_tree_nodes(level)
            .into_iter()
            .filter(|a| a.depth() == level)
            .collect();
        heads.shuffle(rng);
        heads.truncate(rng.gen_range(1..=3));
        let mut entries = Vec::new();
        for h in heads {
            let mut cur = h;
            for _ in 0..rng.gen_range(0..=2) {
                cur = cur.child(rng.gen_range(0..2));
            }
            for _ in 0..rng.gen_range(1..=4) {
                if rng.gen_bool(0.7) {
                    entries.push((cur, signed_entry(rng)));
                }
                cur = cur.child(rng.gen_range(0..2));
            }
        }
        let x: TreeVector = entries.into_iter().collect();
        if !x.is_zero() {
            return x;
        }
    }
}

/// A complete subtree inside `ran(x)`: the closure of a random subset.
pub fn random_complete_subtree(rng: &mut impl Rng, x: &TreeVector) -> NodeSet {
    let picked: NodeSet = x
        .range()
        .into_iter()
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    complete_closure(&picked)
}
