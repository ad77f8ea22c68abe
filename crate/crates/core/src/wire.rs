//! JSON wire forms. Rationals always travel as strings, nodes as bit strings.

use std::collections::BTreeMap;

use serde::Deserialize;
use serde_json::{json, Map, Value};

use crate::error::{JtError, Result};
use crate::extremality::{EqualSumsReport, ExtremeCertificate, SeparationReport};
use crate::greedy::{GreedyTrace, Violation};
use crate::norm::{NormResult, Partition};
use crate::rational::{parse_rational, sqrt_decimal, to_wire};
use crate::tree::{Node, Segment};
use crate::vector::TreeVector;

/// Default number of fractional digits in `norm_decimal`.
pub const DEFAULT_DIGITS: usize = 12;

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct VectorFile {
    vector: BTreeMap<String, String>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct SegmentWire {
    top: String,
    bottom: String,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PartitionFile {
    segments: Vec<SegmentWire>,
}

fn parse_json<'a, T: Deserialize<'a>>(text: &'a str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| JtError::Parse(format!("{what}: {e}")))
}

pub fn parse_vector(text: &str, max_depth: usize) -> Result<TreeVector> {
    let file: VectorFile = parse_json(text, "vector file")?;
    file.vector
        .iter()
        .map(|(k, v)| Ok((Node::parse(k, max_depth)?, parse_rational(v)?)))
        .collect()
}

pub fn parse_partition(text: &str, max_depth: usize) -> Result<Partition> {
    let file: PartitionFile = parse_json(text, "partition file")?;
    let mut segments = Vec::with_capacity(file.segments.len());
    for s in &file.segments {
        let (top, bottom) = (
            Node::parse(&s.top, max_depth)?,
            Node::parse(&s.bottom, max_depth)?,
        );
        let seg = Segment::new(top, bottom).map_err(|_| {
            JtError::InvalidPartition(format!("{:?} is not above {:?}", s.top, s.bottom))
        })?;
        segments.push(seg);
    }
    Partition::new(segments)
}

pub fn node(n: &Node) -> Value {
    Value::String(n.to_string())
}

fn pair(p: &Option<(Node, Node)>) -> Value {
    match p {
        Some((u, v)) => json!([u.to_string(), v.to_string()]),
        None => Value::Null,
    }
}

pub fn vector(x: &TreeVector) -> Value {
    let entries: Map<String, Value> = x
        .iter()
        .map(|(k, v)| (k.to_string(), Value::String(to_wire(v))))
        .collect();
    json!({ "vector": entries })
}

pub fn segment(s: &Segment) -> Value {
    json!({ "top": s.top().to_string(), "bottom": s.bottom().to_string() })
}

pub fn partition(p: &Partition) -> Value {
    json!({ "segments": p.segments().map(segment).collect::<Vec<_>>() })
}

pub fn norm_result(r: &NormResult, digits: usize) -> Result<Value> {
    Ok(json!({
        "norm_sq": to_wire(&r.norm_sq),
        "norm_decimal": sqrt_decimal(&r.norm_sq, digits)?,
        "witness": partition(&r.witness),
    }))
}

pub fn greedy_trace(t: &GreedyTrace) -> Value {
    let s_values: Map<String, Value> = t
        .s_values
        .iter()
        .map(|(k, v)| (k.to_string(), Value::String(to_wire(v))))
        .collect();
    let chosen: Map<String, Value> = t
        .chosen
        .iter()
        .map(|(k, c)| (k.to_string(), c.as_ref().map_or(Value::Null, node)))
        .collect();
    let ties: Map<String, Value> = t
        .ties
        .iter()
        .map(|(k, ts)| (k.to_string(), ts.iter().map(node).collect()))
        .collect();
    json!({ "s_values": s_values, "chosen": chosen, "ties": ties })
}

pub fn violation(v: &Violation) -> Value {
    json!({
        "segment": segment(&v.segment),
        "node": node(&v.node),
        "chosen": node(&v.chosen),
        "better": node(&v.better),
    })
}

pub fn certificate(c: &ExtremeCertificate) -> Value {
    json!({
        "verdict": c.verdict.as_str(),
        "basis": c.basis.as_str(),
        "blocked_pair": pair(&c.blocked_pair),
        "witness_y": c.witness_y.as_ref().map_or(Value::Null, vector),
        "epsilon": c.epsilon.as_ref().map_or(Value::Null, |e| Value::String(to_wire(e))),
        "norm_sq": to_wire(&c.norm_sq),
    })
}

pub fn separation_report(r: &SeparationReport) -> Value {
    let gaps: Vec<Value> = r
        .pair_gaps
        .iter()
        .map(|((u, v), g)| json!({ "u": u.to_string(), "v": v.to_string(), "gap": to_wire(g) }))
        .collect();
    json!({
        "separated": r.separated,
        "pair_gaps": gaps,
        "first_blocked_pair": pair(&r.first_blocked_pair),
    })
}

pub fn equal_sums_report(r: &EqualSumsReport) -> Value {
    let branches: Vec<Value> = r
        .branch_sums
        .iter()
        .map(|((u, exit), s)| {
            json!({ "from": u.to_string(), "exit": exit.to_string(), "sum": to_wire(s) })
        })
        .collect();
    let balance: Map<String, Value> = r
        .sibling_balance
        .iter()
        .map(|(a, (s0, s1))| (a.to_string(), json!([to_wire(s0), to_wire(s1)])))
        .collect();
    json!({
        "holds": r.holds,
        "branch_sums": branches,
        "sibling_balance": balance,
        "sigma": to_wire(&r.sigma),
    })
}

/// Pretty-printed JSON with a trailing newline.
pub fn render(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values built here always serialize");
    s.push('\n');
    s
}
