use std::fmt::Write;

use crate::diagram::{Diagram, Endpoint, GeneratorKind};

fn label(k: &GeneratorKind) -> String {
    use GeneratorKind::*;
    match k {
        ZBox { params, .. } => {
            let p: Vec<String> = params.entries().iter().map(|c| format!("{:.3}{:+.3}i", c.re, c.im)).collect();
            format!("Z ({})", p.join(", "))
        }
        WNode { .. } => "W".into(),
        WNodeDagger { .. } => "W†".into(),
        Hadamard { dim } => format!("H{}", dim.get()),
        XSpider { .. } => "X".into(),
        Splitter { m, n } => format!("split {}x{}", m.get(), n.get()),
        Merger { m, n } => format!("merge {}x{}", m.get(), n.get()),
        Swap { .. } => "swap".into(),
        Identity { .. } => "id".into(),
        Cap { .. } => "cap".into(),
        Cup { .. } => "cup".into(),
        Multiplier { label, .. } => format!("×{label}"),
        Scalar(c) => format!("{:.3}{:+.3}i", c.re, c.im),
    }
}

fn color(k: &GeneratorKind) -> &'static str {
    match k {
        GeneratorKind::ZBox { .. } => "palegreen",
        GeneratorKind::XSpider { .. } => "lightcoral",
        GeneratorKind::WNode { .. } | GeneratorKind::WNodeDagger { .. } => "white",
        GeneratorKind::Hadamard { .. } => "khaki",
        _ => "lightgrey",
    }
}

/// Graphviz rendering with inputs at the bottom and outputs at the top.
/// Edge labels give the wire dimension.
pub fn to_dot(d: &Diagram) -> String {
    let mut s = String::from("digraph zxw {\n  rankdir=BT;\n  node [style=filled];\n");
    for (i, dim) in d.inputs().iter().enumerate() {
        let _ = writeln!(s, "  in{i} [label=\"in {i} ({})\", shape=plaintext, style=\"\"];", dim.get());
    }
    for (i, dim) in d.outputs().iter().enumerate() {
        let _ = writeln!(s, "  out{i} [label=\"out {i} ({})\", shape=plaintext, style=\"\"];", dim.get());
    }
    for (i, k) in d.nodes().iter().enumerate() {
        let _ = writeln!(s, "  n{i} [label=\"{}\", fillcolor={}];", label(k).replace('"', "'"), color(k));
    }
    let name = |e: Endpoint| match e {
        Endpoint::Port { node, .. } => format!("n{node}"),
        Endpoint::Input(i) => format!("in{i}"),
        Endpoint::Output(i) => format!("out{i}"),
    };
    for &(a, b) in d.edges() {
        let dim = d.endpoint_dim(a).or_else(|| d.endpoint_dim(b)).map_or(0, |x| x.get());
        let _ = writeln!(s, "  {} -> {} [label=\"{dim}\", arrowhead=none];", name(a), name(b));
    }
    s.push_str("}\n");
    s
}
