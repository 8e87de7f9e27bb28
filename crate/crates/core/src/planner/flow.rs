use std::fmt;

use petgraph::algo::ford_fulkerson;
use petgraph::graph::{DiGraph, EdgeIndex, NodeIndex};

use crate::scheme::RingParams;

use super::{Endpoint, ReconstructionPlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowNode {
    Source,
    Storage(usize),
    User(usize),
}

impl fmt::Display for FlowNode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowNode::Source => write!(f, "S"),
            FlowNode::Storage(i) => write!(f, "N{i}"),
            FlowNode::User(i) => write!(f, "U{i}"),
        }
    }
}

/// Information flow graph for one user: the source feeds every storage node
/// with capacity `α`, and the plan's hops become capacitated edges.
#[derive(Debug, Clone)]
pub struct FlowGraph {
    graph: DiGraph<FlowNode, u64>,
    chain: Vec<EdgeIndex>,
}

impl FlowGraph {
    pub fn node(&self, label: FlowNode) -> Option<NodeIndex> {
        self.graph.node_indices().find(|&i| self.graph[i] == label)
    }

    /// Edges that carry plan payloads (everything except the source edges).
    pub fn chain_edges(&self) -> &[EdgeIndex] {
        &self.chain
    }

    pub fn capacity(&self, edge: EdgeIndex) -> u64 {
        self.graph[edge]
    }

    pub fn set_capacity(&mut self, edge: EdgeIndex, capacity: u64) {
        self.graph[edge] = capacity;
    }

    pub fn endpoints(&self, edge: EdgeIndex) -> (FlowNode, FlowNode) {
        let (a, b) = self.graph.edge_endpoints(edge).expect("edge exists");
        (self.graph[a], self.graph[b])
    }

    pub fn graph(&self) -> &DiGraph<FlowNode, u64> {
        &self.graph
    }
}

pub fn build_flow_graph(params: &RingParams, plan: &ReconstructionPlan) -> FlowGraph {
    let mut graph = DiGraph::new();
    let source = graph.add_node(FlowNode::Source);
    let storage: Vec<NodeIndex> = (1..=params.n()).map(|i| graph.add_node(FlowNode::Storage(i))).collect();
    let user = graph.add_node(FlowNode::User(plan.user));
    for &s in &storage {
        graph.add_edge(source, s, params.alpha() as u64);
    }
    let locate = |e: Endpoint| match e {
        Endpoint::Node(i) => storage[i - 1],
        Endpoint::User(_) => user,
        Endpoint::Substitute(i) => storage[i - 1],
    };
    let chain = plan
        .hops
        .iter()
        .map(|h| graph.add_edge(locate(h.from), locate(h.to), h.size() as u64))
        .collect();
    FlowGraph { graph, chain }
}

/// Maximum flow (equivalently, minimum cut capacity) from `src` to `dst`.
pub fn flow_mincut(g: &FlowGraph, src: FlowNode, dst: FlowNode) -> u64 {
    match (g.node(src), g.node(dst)) {
        (Some(s), Some(t)) if s != t => ford_fulkerson(&g.graph, s, t).0,
        _ => 0,
    }
}
