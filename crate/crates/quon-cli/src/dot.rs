//! Graphviz rendering. Each element is a node and each strand segment an
//! edge between the nodes it connects. Holes appear as dashed boxes linked
//! to the first element they precede.

use quon_core::quon::QuonDiagram;
use quon_core::{Element, Orientation};
use std::fmt::Write;

fn label(e: &Element) -> String {
    let o = |o: Orientation| match o {
        Orientation::Vertical => "V",
        Orientation::Horizontal => "H",
    };
    match *e {
        Element::Cap { j } => format!("cap {j}"),
        Element::Cup { j } => format!("cup {j}"),
        Element::Dot { j } => format!("dot {j}"),
        Element::DotPair { j, k } => format!("dots {j},{k}"),
        Element::BraidPos { j } => format!("braid+ {j}"),
        Element::BraidNeg { j } => format!("braid- {j}"),
        Element::Scattering { j, theta, orientation } => format!("{} {j} θ={:.4}{:+.4}i", o(orientation), theta.re, theta.im),
        Element::ScatteringStar { j, phi, orientation } => format!("{}* {j} φ={:.4}{:+.4}i", o(orientation), phi.re, phi.im),
    }
}

fn edge(out: &mut String, from: &str, to: &str) {
    let _ = writeln!(out, "  {from} -> {to};");
}

pub fn to_dot(q: &QuonDiagram) -> String {
    let d = &q.core;
    let mut out = String::from("digraph quon {\n  rankdir=TB;\n  node [fontname=\"monospace\"];\n");
    let mut open: Vec<String> = (0..d.width_in).map(|k| format!("in{k}")).collect();
    for name in &open {
        let _ = writeln!(out, "  {name} [shape=point];");
    }
    for (i, e) in d.elements.iter().enumerate() {
        let node = format!("e{i}");
        let _ = writeln!(out, "  {node} [shape=box,label=\"{i}: {}\"];", label(e));
        match *e {
            Element::Cap { j } => {
                open.insert(j, node.clone());
                open.insert(j, node);
            }
            Element::Cup { j } => {
                for from in open.drain(j..j + 2) {
                    edge(&mut out, &from, &node);
                }
            }
            Element::Dot { j } => {
                edge(&mut out, &open[j], &node);
                open[j] = node;
            }
            Element::DotPair { j, k } => {
                for s in [j, k] {
                    edge(&mut out, &open[s], &node);
                    open[s] = node.clone();
                }
            }
            Element::BraidPos { j } | Element::BraidNeg { j } | Element::Scattering { j, .. } | Element::ScatteringStar { j, .. } => {
                for s in [j, j + 1] {
                    edge(&mut out, &open[s], &node);
                    open[s] = node.clone();
                }
            }
        }
    }
    for (k, from) in open.iter().enumerate() {
        let _ = writeln!(out, "  out{k} [shape=point];");
        edge(&mut out, from, &format!("out{k}"));
    }
    for (h, cut) in q.parity_cuts.iter().enumerate() {
        let strands = cut.strands.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(",");
        let _ = writeln!(out, "  hole{h} [shape=box,style=dashed,label=\"hole {h}: {{{strands}}}\"];");
        if cut.time_index < d.elements.len() {
            let _ = writeln!(out, "  hole{h} -> e{} [style=dashed,arrowhead=none];", cut.time_index);
        }
    }
    out.push_str("}\n");
    out
}
