//! Graphviz export of `ran(x)` with an optional partition overlay.

use std::fmt::Write;

use crate::norm::Partition;
use crate::rational::to_wire;
use crate::tree::Node;
use crate::vector::TreeVector;

const PALETTE: [&str; 10] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
    "#bcbd22", "#7f7f7f",
];

fn id(n: &Node) -> String {
    format!("\"n{n}\"")
}

/// Nodes of `ran(x)` outside the support are dashed; each segment of `p`
/// gets its own color on its nodes and internal edges.
pub fn to_dot(x: &TreeVector, p: Option<&Partition>) -> String {
    let ran = x.range();
    let color_of = |n: &Node| -> Option<&str> {
        let p = p?;
        p.segments()
            .position(|s| s.contains(n))
            .map(|i| PALETTE[i % PALETTE.len()])
    };
    let mut out = String::from("digraph ran {\n  node [shape=ellipse, fontname=\"monospace\"];\n");
    for n in &ran {
        let value = to_wire(&x.get(n));
        let mut attrs = format!("label=\"{}\\n{}\"", n.label(), value);
        if !x.entries().contains_key(n) {
            attrs.push_str(", style=dashed");
        }
        if let Some(c) = color_of(n) {
            let _ = write!(attrs, ", color=\"{c}\", penwidth=2");
        }
        let _ = writeln!(out, "  {} [{attrs}];", id(n));
    }
    for n in &ran {
        let Some(parent) = n.parent().filter(|q| ran.contains(q)) else {
            continue;
        };
        let same = p
            .and_then(|p| p.segment_of(n))
            .filter(|s| s.contains(&parent));
        match same.and_then(|_| color_of(n)) {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  {} -> {} [color=\"{c}\", penwidth=2];",
                    id(&parent),
                    id(n)
                );
            }
            None => {
                let _ = writeln!(out, "  {} -> {};", id(&parent), id(n));
            }
        }
    }
    out.push_str("}\n");
    out
}
