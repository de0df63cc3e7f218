//! Weighted undirected graphs with a node-to-module assignment.
//!
//! Invariants held by every [`Graph`]:
//! - node ids are the dense range `0..node_count`;
//! - adjacency is symmetric and sorted by neighbor id, so construction is
//!   independent of input edge order;
//! - every weight is finite and strictly positive (absent pairs are "infinite");
//! - module indices cover `0..module_count` with no unused index.

use std::collections::HashSet;

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: NodeId,
    pub v: NodeId,
    pub weight: f64,
}

impl Edge {
    pub fn new(u: NodeId, v: NodeId, weight: f64) -> Self {
        Edge { u, v, weight }
    }

    /// Same edge with `u < v`.
    pub fn canonical(self) -> Self {
        if self.u <= self.v {
            self
        } else {
            Edge {
                u: self.v,
                v: self.u,
                weight: self.weight,
            }
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GraphError {
    #[error("duplicate edge between {u} and {v}")]
    DuplicateEdge { u: NodeId, v: NodeId },
    #[error("self-loop on node {node}")]
    SelfLoop { node: NodeId },
    #[error("edge ({u}, {v}) has non-positive or non-finite weight {weight}")]
    NonPositiveWeight { u: NodeId, v: NodeId, weight: f64 },
    #[error("node id {node} out of range for a graph with {node_count} nodes")]
    DanglingNodeId { node: NodeId, node_count: usize },
    #[error("module indices are not contiguous: index {missing} is unused")]
    NonContiguousModules { missing: usize },
    #[error("module assignment has {got} entries but the graph has {expected} nodes")]
    ModuleCountMismatch { expected: usize, got: usize },
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
}

#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    adjacency: Vec<Vec<(NodeId, f64)>>,
    module_of: Vec<usize>,
    module_count: usize,
    edges: Vec<Edge>,
}

impl Graph {
    /// Builds a graph, rejecting anything that would break the type invariants.
    pub fn build(
        node_count: usize,
        edges: &[Edge],
        module_of: Vec<usize>,
    ) -> Result<Graph, GraphError> {
        if module_of.len() != node_count {
            return Err(GraphError::ModuleCountMismatch {
                expected: node_count,
                got: module_of.len(),
            });
        }
        let module_count = module_of.iter().map(|&m| m + 1).max().unwrap_or(0);
        let mut used = vec![false; module_count];
        for &m in &module_of {
            used[m] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(GraphError::NonContiguousModules { missing });
        }

        let mut seen = HashSet::with_capacity(edges.len());
        let mut canonical = Vec::with_capacity(edges.len());
        for &e in edges {
            for node in [e.u, e.v] {
                if node >= node_count {
                    return Err(GraphError::DanglingNodeId { node, node_count });
                }
            }
            if e.u == e.v {
                return Err(GraphError::SelfLoop { node: e.u });
            }
            if !(e.weight > 0.0 && e.weight.is_finite()) {
                return Err(GraphError::NonPositiveWeight {
                    u: e.u,
                    v: e.v,
                    weight: e.weight,
                });
            }
            let c = e.canonical();
            if !seen.insert((c.u, c.v)) {
                return Err(GraphError::DuplicateEdge { u: c.u, v: c.v });
            }
            canonical.push(c);
        }
        canonical.sort_by_key(|e| (e.u, e.v));

        let mut adjacency = vec![Vec::new(); node_count];
        for e in &canonical {
            adjacency[e.u].push((e.v, e.weight));
            adjacency[e.v].push((e.u, e.weight));
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(n, _)| n);
        }

        Ok(Graph {
            adjacency,
            module_of,
            module_count,
            edges: canonical,
        })
    }

    /// Single-module convenience constructor.
    pub fn from_edges(node_count: usize, edges: &[Edge]) -> Result<Graph, GraphError> {
        Graph::build(node_count, edges, vec![0; node_count])
    }

    pub fn node_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn module_count(&self) -> usize {
        self.module_count
    }

    pub fn module_of(&self, node: NodeId) -> usize {
        self.module_of[node]
    }

    pub fn modules(&self) -> &[usize] {
        &self.module_of
    }

    pub fn neighbors(&self, node: NodeId) -> &[(NodeId, f64)] {
        &self.adjacency[node]
    }

    /// Edges with `u < v`, sorted lexicographically.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn weight(&self, u: NodeId, v: NodeId) -> Option<f64> {
        let list = &self.adjacency[u];
        list.binary_search_by_key(&v, |&(n, _)| n)
            .ok()
            .map(|i| list[i].1)
    }

    pub fn is_internal(&self, u: NodeId, v: NodeId) -> bool {
        self.module_of[u] == self.module_of[v]
    }

    /// Same topology with every weight multiplied by `factor`.
    pub fn scaled(&self, factor: f64) -> Result<Graph, GraphError> {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .map(|e| Edge::new(e.u, e.v, e.weight * factor))
            .collect();
        Graph::build(self.node_count(), &edges, self.module_of.clone())
    }

    /// Same graph with every external edge removed.
    pub fn without_external_edges(&self) -> Graph {
        let edges: Vec<Edge> = self
            .edges
            .iter()
            .copied()
            .filter(|e| self.is_internal(e.u, e.v))
            .collect();
        Graph::build(self.node_count(), &edges, self.module_of.clone())
            .expect("subset of a valid graph is valid")
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExternalEdge {
    pub edge: Edge,
    /// Modules of `edge.u` and `edge.v`, in that order.
    pub modules: (usize, usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModulePartition {
    pub module_count: usize,
    pub members: Vec<Vec<NodeId>>,
    pub internal_edges: Vec<Vec<Edge>>,
    pub external_edges: Vec<ExternalEdge>,
    /// Sorted node ids of each module having at least one external edge.
    pub external_vertices: Vec<Vec<NodeId>>,
    /// Position of each node inside `members[module_of(node)]`.
    pub local_index: Vec<usize>,
}

impl ModulePartition {
    /// Builds module `m` as a standalone graph over local ids, internal edges only.
    pub fn module_subgraph(&self, m: usize) -> Graph {
        let edges: Vec<Edge> = self.internal_edges[m]
            .iter()
            .map(|e| Edge::new(self.local_index[e.u], self.local_index[e.v], e.weight))
            .collect();
        let size = self.members[m].len();
        Graph::build(size, &edges, vec![0; size]).expect("module subgraph of a valid graph")
    }

    pub fn is_external_vertex(&self, node: NodeId, g: &Graph) -> bool {
        g.neighbors(node)
            .iter()
            .any(|&(n, _)| !g.is_internal(node, n))
    }
}

/// Splits the edge set into per-module internal edges and cross-module external edges.
pub fn classify_edges(g: &Graph) -> ModulePartition {
    let k = g.module_count();
    let mut members = vec![Vec::new(); k];
    let mut local_index = vec![0; g.node_count()];
    for (node, slot) in local_index.iter_mut().enumerate() {
        let m = g.module_of(node);
        *slot = members[m].len();
        members[m].push(node);
    }

    let mut internal_edges = vec![Vec::new(); k];
    let mut external_edges = Vec::new();
    let mut is_ext = vec![false; g.node_count()];
    for &e in g.edges() {
        let (mu, mv) = (g.module_of(e.u), g.module_of(e.v));
        if mu == mv {
            internal_edges[mu].push(e);
        } else {
            external_edges.push(ExternalEdge {
                edge: e,
                modules: (mu, mv),
            });
            is_ext[e.u] = true;
            is_ext[e.v] = true;
        }
    }

    let mut external_vertices = vec![Vec::new(); k];
    for (node, &ext) in is_ext.iter().enumerate() {
        if ext {
            external_vertices[g.module_of(node)].push(node);
        }
    }

    ModulePartition {
        module_count: k,
        members,
        internal_edges,
        external_edges,
        external_vertices,
        local_index,
    }
}

/// Module graph: one node per module, one edge per connected module pair carrying
/// the lightest external edge between them.
pub fn quotient_graph(p: &ModulePartition, g: &Graph) -> Graph {
    debug_assert_eq!(p.module_count, g.module_count());
    let mut lightest: std::collections::BTreeMap<(usize, usize), f64> = Default::default();
    for ext in &p.external_edges {
        let (a, b) = ext.modules;
        let key = (a.min(b), a.max(b));
        let w = lightest.entry(key).or_insert(f64::INFINITY);
        if ext.edge.weight < *w {
            *w = ext.edge.weight;
        }
    }
    let edges: Vec<Edge> = lightest
        .into_iter()
        .map(|((a, b), w)| Edge::new(a, b, w))
        .collect();
    Graph::build(p.module_count, &edges, vec![0; p.module_count])
        .expect("quotient of a valid partition")
}
