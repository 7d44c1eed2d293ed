//! JSON form of the model graph, consumed by the web UI.
//!
//! ```json
//! {"nodes":[{"id":"sched","status":"enforced_true","interface":null}],
//!  "clusters":[{"iface":"clock","impls":["clock_llsc","clock_spinlock"]}],
//!  "edges":[{"from":"sched","to":"clock"}]}
//! ```
//!
//! `id` is the option name, `interface` the interface the option implements.
//! Clusters and edges carry the same content as the DOT export.

use configforge_core::dot::Layout;
use configforge_core::{DepsModel, NodeStatus};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Node {
    pub id: String,
    pub status: String,
    pub interface: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cluster {
    pub iface: String,
    pub impls: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub nodes: Vec<Node>,
    pub clusters: Vec<Cluster>,
    pub edges: Vec<Edge>,
}

impl Graph {
    pub fn new(model: &DepsModel, statuses: &[NodeStatus]) -> Self {
        let name = |id: configforge_core::OptionId| model.name(id).to_string();
        let layout = Layout::of(model);
        let nodes = model
            .options()
            .map(|id| Node {
                id: name(id),
                status: statuses
                    .get(id.index())
                    .copied()
                    .unwrap_or(NodeStatus::Normal)
                    .as_str()
                    .to_string(),
                interface: model.interface_of(id).map(name),
            })
            .collect();
        let clusters = layout
            .clusters
            .iter()
            .map(|(iface, members)| Cluster {
                iface: name(*iface),
                impls: members.iter().map(|m| name(*m)).collect(),
            })
            .collect();
        let edges = layout
            .edges
            .iter()
            .map(|(from, to)| Edge {
                from: name(*from),
                to: name(*to),
            })
            .collect();
        Graph {
            nodes,
            clusters,
            edges,
        }
    }
}

pub fn to_graph_json(model: &DepsModel, statuses: &[NodeStatus]) -> String {
    serde_json::to_string_pretty(&Graph::new(model, statuses)).expect("graph serializes")
}
