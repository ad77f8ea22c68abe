//! Tree dynamic program over `ran(x)`.
//!
//! For every node `w` of the range forest we keep
//!
//! * `free[w]`: the best score inside `W_w` when no segment enters `w` from
//!   above, together with the choice that attains it;
//! * `table[w]`: for a segment that contains `w` and may have started higher
//!   up, a map from `(t, mask)` to the best score `r` of everything else in
//!   `W_w`. Here `t` is the sum of the segment's part inside `W_w` and `mask`
//!   records which separated-pair targets that part already contains.
//!
//! The parent combines a child entry as `(x(p) + t, r + free of the siblings)`
//! and a segment starting at `w` is worth `t^2 + r`. The objective is
//! quadratic in `t`, so the whole table is kept; only entries with equal key
//! and lower `r` are pruned. Each entry corresponds to one endpoint, so a
//! table never holds more entries than the subtree has nodes.

use std::collections::{BTreeMap, HashMap};

use num::Zero;

use crate::error::{JtError, Result};
use crate::rational::Rational;
use crate::tree::{Node, Segment};
use crate::vector::TreeVector;

use super::{Constraint, NormResult, Partition};

const MAX_SEPARATED_PAIRS: usize = 64;

struct Slot {
    node: Node,
    value: Rational,
    in_support: bool,
    children: Vec<usize>,
}

/// The range of `x` as an arena, parents before children.
struct Forest {
    slots: Vec<Slot>,
    index: HashMap<Node, usize>,
    roots: Vec<usize>,
}

impl Forest {
    fn build(x: &TreeVector) -> Forest {
        let ran = x.range();
        let mut slots: Vec<Slot> = Vec::with_capacity(ran.len());
        let mut index = HashMap::with_capacity(ran.len());
        let mut roots = Vec::new();
        for node in ran {
            let i = slots.len();
            index.insert(node, i);
            match node.parent().and_then(|p| index.get(&p).copied()) {
                // Canonical order visits "…0" before "…1", so children stay bit-ordered.
                Some(p) => slots[p].children.push(i),
                None => roots.push(i),
            }
            slots.push(Slot {
                node,
                value: x.get(&node),
                in_support: x.entries().contains_key(&node),
                children: Vec::new(),
            });
        }
        Forest {
            slots,
            index,
            roots,
        }
    }

    fn slot_of(&self, node: &Node) -> Result<usize> {
        self.index
            .get(node)
            .copied()
            .ok_or_else(|| JtError::Domain(format!("node {node:?} is outside ran(x)")))
    }
}

/// Constraints lowered onto slot indices.
struct Plan {
    /// Forced segments as (top slot, bottom slot).
    forced: Vec<(usize, usize)>,
    forced_of: Vec<Option<usize>>,
    /// Bit `i` set at the slot holding the lower node of separated pair `i`.
    target_bits: Vec<u64>,
    /// Bit `i` set at the slot holding the upper node of separated pair `i`.
    guard_bits: Vec<u64>,
}

impl Plan {
    fn compile(forest: &Forest, cs: &[Constraint]) -> Result<Plan> {
        let n = forest.slots.len();
        let mut forced_segments: Vec<Segment> = Vec::new();
        let mut pairs: Vec<(usize, usize)> = Vec::new();
        for c in cs {
            match c {
                Constraint::SeparatePair(u, v) => {
                    if u == v {
                        return Err(JtError::Domain(format!(
                            "cannot separate {u:?} from itself"
                        )));
                    }
                    let (iu, iv) = (forest.slot_of(u)?, forest.slot_of(v)?);
                    if u.lt(v) {
                        pairs.push((iu, iv));
                    } else if v.lt(u) {
                        pairs.push((iv, iu));
                    }
                }
                Constraint::IsolateNode(a) => {
                    forest.slot_of(a)?;
                    forced_segments.push(Segment::singleton(*a));
                }
                Constraint::ForceSegment(s) => {
                    forest.slot_of(&s.top())?;
                    forest.slot_of(&s.bottom())?;
                    forced_segments.push(*s);
                }
            }
        }
        pairs.sort_unstable();
        pairs.dedup();
        if pairs.len() > MAX_SEPARATED_PAIRS {
            return Err(JtError::Limit(format!(
                "{} separated pairs, at most {MAX_SEPARATED_PAIRS} supported",
                pairs.len()
            )));
        }
        forced_segments.sort_unstable();
        forced_segments.dedup();
        for (i, a) in forced_segments.iter().enumerate() {
            for b in &forced_segments[i + 1..] {
                if !a.is_disjoint(b) {
                    return Err(JtError::Infeasible(format!(
                        "forced segments {a} and {b} overlap"
                    )));
                }
            }
        }

        let mut forced = Vec::with_capacity(forced_segments.len());
        let mut forced_of = vec![None; n];
        for (k, s) in forced_segments.iter().enumerate() {
            forced.push((forest.slot_of(&s.top())?, forest.slot_of(&s.bottom())?));
            for member in s.members() {
                forced_of[forest.slot_of(&member)?] = Some(k);
            }
        }
        let mut target_bits = vec![0u64; n];
        let mut guard_bits = vec![0u64; n];
        for (bit, (iu, iv)) in pairs.iter().enumerate() {
            guard_bits[*iu] |= 1 << bit;
            target_bits[*iv] |= 1 << bit;
        }
        Ok(Plan {
            forced,
            forced_of,
            target_bits,
            guard_bits,
        })
    }
}

#[derive(Clone)]
struct Entry {
    rest: Rational,
    end: usize,
}

type Table = BTreeMap<(Rational, u64), Entry>;

#[derive(Clone, Copy)]
enum Choice {
    Omit,
    Start { end: usize },
}

struct Solver<'a> {
    forest: &'a Forest,
    plan: &'a Plan,
    tables: Vec<Table>,
    free: Vec<Option<(Rational, Choice)>>,
    enterable: Vec<bool>,
}

impl<'a> Solver<'a> {
    fn new(forest: &'a Forest, plan: &'a Plan) -> Solver<'a> {
        let n = forest.slots.len();
        Solver {
            forest,
            plan,
            tables: vec![Table::new(); n],
            free: vec![None; n],
            enterable: vec![true; n],
        }
    }

    /// Keeps the higher `rest`; on ties the endpoint that comes first in
    /// canonical order (shorter, then toward bit 0).
    fn offer(&self, table: &mut Table, key: (Rational, u64), entry: Entry) {
        match table.get(&key) {
            Some(old) if !self.beats(&entry, old) => {}
            _ => {
                table.insert(key, entry);
            }
        }
    }

    fn beats(&self, new: &Entry, old: &Entry) -> bool {
        new.rest > old.rest
            || (new.rest == old.rest
                && self.forest.slots[new.end].node < self.forest.slots[old.end].node)
    }

    fn free_sum<'b>(&self, kids: impl Iterator<Item = &'b usize>) -> Option<Rational> {
        let mut total = Rational::zero();
        for c in kids {
            total += &self.free[*c].as_ref()?.0;
        }
        Some(total)
    }

    fn visit(&mut self, i: usize) {
        let forest = self.forest;
        let slot = &forest.slots[i];
        let kids = &slot.children;
        let hang_all = self.free_sum(kids.iter());
        let self_bits = self.plan.target_bits[i];
        let guard = self.plan.guard_bits[i];
        let mut table = Table::new();

        match self.plan.forced_of[i] {
            None => {
                if slot.in_support {
                    if let Some(h) = &hang_all {
                        let entry = Entry {
                            rest: h.clone(),
                            end: i,
                        };
                        self.offer(&mut table, (slot.value.clone(), self_bits), entry);
                    }
                }
                for &c in kids {
                    if !self.enterable[c] {
                        continue;
                    }
                    let Some(others) = self.free_sum(kids.iter().filter(|k| **k != c)) else {
                        continue;
                    };
                    for ((t, mask), e) in &self.tables[c] {
                        let mask = mask | self_bits;
                        if mask & guard != 0 {
                            continue;
                        }
                        let entry = Entry {
                            rest: &e.rest + &others,
                            end: e.end,
                        };
                        self.offer(&mut table, (&slot.value + t, mask), entry);
                    }
                }
                let mut best = hang_all.map(|h| (h, Choice::Omit));
                if slot.in_support {
                    for ((t, _), e) in &table {
                        let value = t * t + &e.rest;
                        let better = match &best {
                            None => true,
                            Some((b, Choice::Omit)) => value > *b,
                            Some((b, Choice::Start { end })) => {
                                value > *b
                                    || (value == *b
                                        && self.forest.slots[e.end].node
                                            < self.forest.slots[*end].node)
                            }
                        };
                        if better {
                            best = Some((value, Choice::Start { end: e.end }));
                        }
                    }
                }
                self.free[i] = best;
            }
            Some(k) => {
                let (top, bottom) = self.plan.forced[k];
                if i == bottom {
                    if let Some(h) = hang_all {
                        table.insert((slot.value.clone(), self_bits), Entry { rest: h, end: i });
                    }
                } else {
                    let bottom_node = forest.slots[bottom].node;
                    let next_node = bottom_node.ancestor_at(slot.node.depth() + 1);
                    let next = forest.index[&next_node];
                    let others = self.free_sum(kids.iter().filter(|c| **c != next));
                    if let Some(others) = others {
                        for ((t, mask), e) in &self.tables[next] {
                            let mask = mask | self_bits;
                            if mask & guard == 0 {
                                let entry = Entry {
                                    rest: &e.rest + &others,
                                    end: e.end,
                                };
                                table.insert((&slot.value + t, mask), entry);
                            }
                        }
                    }
                }
                self.free[i] = if i == top {
                    table
                        .iter()
                        .next()
                        .map(|((t, _), e)| (t * t + &e.rest, Choice::Start { end: e.end }))
                } else {
                    None
                };
                self.enterable[i] = i != top;
            }
        }
        self.tables[i] = table;
    }

    fn emit_free(&self, i: usize, out: &mut Vec<Segment>) {
        match self.free[i].as_ref().map(|(_, c)| *c) {
            Some(Choice::Omit) => {
                for &c in &self.forest.slots[i].children {
                    self.emit_free(c, out);
                }
            }
            Some(Choice::Start { end }) => self.emit_path(i, end, out),
            None => unreachable!("feasible solutions only reach feasible nodes"),
        }
    }

    fn emit_path(&self, start: usize, end: usize, out: &mut Vec<Segment>) {
        let slots = &self.forest.slots;
        let end_node = slots[end].node;
        out.push(Segment::new(slots[start].node, end_node).expect("DP paths descend"));
        let mut cur = start;
        loop {
            let next = (cur != end)
                .then(|| self.forest.index[&end_node.ancestor_at(slots[cur].node.depth() + 1)]);
            for &c in &slots[cur].children {
                if Some(c) != next {
                    self.emit_free(c, out);
                }
            }
            match next {
                Some(n) => cur = n,
                None => break,
            }
        }
    }
}

pub(super) fn solve(x: &TreeVector, cs: &[Constraint]) -> Result<NormResult> {
    let forest = Forest::build(x);
    let plan = Plan::compile(&forest, cs)?;
    let mut solver = Solver::new(&forest, &plan);
    for i in (0..forest.slots.len()).rev() {
        solver.visit(i);
    }
    let mut norm_sq = Rational::zero();
    for &r in &forest.roots {
        match &solver.free[r] {
            Some((value, _)) => norm_sq += value,
            None => {
                return Err(JtError::Infeasible(
                    "no partition satisfies every constraint".to_string(),
                ))
            }
        }
    }
    let mut segments = Vec::new();
    for &r in &forest.roots {
        solver.emit_free(r, &mut segments);
    }
    let witness = Partition::new(segments)
        .map_err(|e| JtError::Internal(format!("reconstructed witness overlaps: {e}")))?;
    Ok(NormResult { norm_sq, witness })
}
