//! Graphviz rendering of a model: interfaces are boxed clusters enclosing
//! their implementations, dependencies are arrows, statuses are fill colors.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt::Write;

use crate::model::{DepsModel, OptionId, Statement};
use crate::session::NodeStatus;

pub fn status_color(status: NodeStatus) -> &'static str {
    match status {
        NodeStatus::EnforcedTrue => "darkgreen",
        NodeStatus::EnforcedFalse => "darkred",
        NodeStatus::ImpliedTrue => "lightgreen",
        NodeStatus::ImpliedFalse => "lightcoral",
        NodeStatus::Normal => "lightgray",
    }
}

/// Node identifier for an option name: a trailing `?` becomes `_q`.
pub fn node_id(name: &str) -> String {
    match name.strip_suffix('?') {
        Some(base) => {
            let mut s = String::from(base);
            s.push_str("_q");
            s
        }
        None => String::from(name),
    }
}

/// Where each option is drawn. Interfaces own a cluster; implementations sit
/// in their interface's cluster unless they are interfaces themselves (only
/// one level of enclosure is drawn).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Layout {
    /// Options drawn outside every cluster, in declaration order.
    pub loose: Vec<OptionId>,
    /// `(interface, members drawn inside it)` in declaration order.
    pub clusters: Vec<(OptionId, Vec<OptionId>)>,
    /// One `(head, target)` per dependency body member.
    pub edges: Vec<(OptionId, OptionId)>,
}

impl Layout {
    pub fn of(model: &DepsModel) -> Self {
        let clusters: Vec<(OptionId, Vec<OptionId>)> = model
            .interfaces()
            .map(|(iface, impls)| {
                let inner = impls
                    .iter()
                    .copied()
                    .filter(|i| !model.is_interface(*i))
                    .collect();
                (iface, inner)
            })
            .collect();
        let loose = model
            .options()
            .filter(|&o| !model.is_interface(o) && model.interface_of(o).is_none())
            .collect();
        let mut edges = Vec::new();
        for s in model.statements() {
            if let Statement::Dep { head, body } = s {
                edges.extend(body.iter().map(|b| (*head, *b)));
            }
        }
        Layout {
            loose,
            clusters,
            edges,
        }
    }
}

fn quote(out: &mut String, s: &str) {
    out.push('"');
    for c in s.chars() {
        if c == '"' || c == '\\' {
            out.push('\\');
        }
        out.push(c);
    }
    out.push('"');
}

fn node(out: &mut String, model: &DepsModel, statuses: &[NodeStatus], id: OptionId, indent: &str) {
    let name = model.name(id);
    let status = statuses.get(id.index()).copied().unwrap_or(NodeStatus::Normal);
    out.push_str(indent);
    quote(out, &node_id(name));
    out.push_str(" [label=");
    quote(out, name);
    if model.is_interface(id) {
        out.push_str(", shape=box");
    }
    let _ = writeln!(out, ", fillcolor={}];", status_color(status));
}

/// DOT text for `model` colored by `statuses` (indexed by option; missing
/// entries are drawn as normal). Output is deterministic.
pub fn to_dot(model: &DepsModel, statuses: &[NodeStatus]) -> String {
    let mut out = String::from("digraph {\n");
    if model.is_empty() {
        out.push_str("}\n");
        return out;
    }
    out.push_str("  node [style=filled];\n");
    let layout = Layout::of(model);
    for &o in &layout.loose {
        node(&mut out, model, statuses, o, "  ");
    }
    for (iface, members) in &layout.clusters {
        let name = model.name(*iface);
        out.push_str("  subgraph ");
        let mut cluster = String::from("cluster_");
        cluster.push_str(&node_id(name));
        quote(&mut out, &cluster);
        out.push_str(" {\n    label=");
        quote(&mut out, name);
        out.push_str(";\n");
        node(&mut out, model, statuses, *iface, "    ");
        for &m in members {
            node(&mut out, model, statuses, m, "    ");
        }
        out.push_str("  }\n");
    }
    for (from, to) in &layout.edges {
        out.push_str("  ");
        quote(&mut out, &node_id(model.name(*from)));
        out.push_str(" -> ");
        quote(&mut out, &node_id(model.name(*to)));
        out.push_str(";\n");
    }
    out.push_str("}\n");
    out
}
