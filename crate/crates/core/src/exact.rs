//! Exact betweenness: Dijkstra with shortest-path counting, Brandes dependency
//! accumulation, and a brute-force path-enumeration oracle.
//!
//! All scores use the ordered-pair convention: the pair (s, t) and the pair (t, s)
//! each contribute, so undirected values are twice the textbook unordered ones.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use rayon::prelude::*;
use thiserror::Error;

use crate::centrality::{CentralityVector, Measure};
use crate::graph::{Graph, NodeId};

/// Relative tolerance for deciding that two path lengths are equal.
pub const PATH_LENGTH_TOLERANCE: f64 = 1e-12;

/// Largest graph the brute-force oracle accepts.
pub const BRUTE_FORCE_NODE_CAP: usize = 64;

/// Sources per work unit in the parallel Brandes loop. Fixed so that the order of
/// floating-point merges does not depend on the worker count.
const SOURCE_CHUNK: usize = 16;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExactError {
    #[error("brute-force oracle limited to {cap} nodes, graph has {nodes}")]
    GraphTooLarge { nodes: usize, cap: usize },
}

#[inline]
pub fn same_length(a: f64, b: f64) -> bool {
    a == b
        || (a.is_finite()
            && b.is_finite()
            && (a - b).abs() <= PATH_LENGTH_TOLERANCE * a.abs().max(b.abs()))
}

#[inline]
pub fn strictly_shorter(a: f64, b: f64) -> bool {
    a < b && !same_length(a, b)
}

#[derive(Debug, Clone, Copy)]
struct HeapItem {
    dist: f64,
    node: NodeId,
}

impl PartialEq for HeapItem {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for HeapItem {}
impl PartialOrd for HeapItem {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for HeapItem {
    // reversed: BinaryHeap is a max-heap
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| other.node.cmp(&self.node))
    }
}

/// Shortest-path record for one source.
#[derive(Debug, Clone, PartialEq)]
pub struct SsspState {
    pub source: NodeId,
    pub dist: Vec<f64>,
    /// Number of distinct shortest paths from the source.
    pub sigma: Vec<f64>,
    /// Every shortest-path predecessor, ties included.
    pub preds: Vec<Vec<NodeId>>,
    /// Dependency of the source on each node over all reachable targets.
    pub delta: Vec<f64>,
    /// Reachable nodes in non-decreasing distance order.
    pub settled_order: Vec<NodeId>,
}

/// Reusable buffers for repeated single-source runs on one graph.
pub(crate) struct Workspace {
    pub dist: Vec<f64>,
    pub sigma: Vec<f64>,
    pub delta: Vec<f64>,
    pub settled: Vec<bool>,
    pub order: Vec<NodeId>,
    heap: BinaryHeap<HeapItem>,
}

impl Workspace {
    pub fn new(n: usize) -> Self {
        Workspace {
            dist: vec![f64::INFINITY; n],
            sigma: vec![0.0; n],
            delta: vec![0.0; n],
            settled: vec![false; n],
            order: Vec::with_capacity(n),
            heap: BinaryHeap::new(),
        }
    }

    /// Dijkstra from `source` over edges admitted by `filter`, counting paths.
    pub fn forward<F>(&mut self, g: &Graph, source: NodeId, filter: &F)
    where
        F: Fn(NodeId, NodeId, f64) -> bool,
    {
        for &v in &self.order {
            self.dist[v] = f64::INFINITY;
            self.sigma[v] = 0.0;
            self.delta[v] = 0.0;
            self.settled[v] = false;
        }
        // nodes discovered but never settled cannot exist once the heap drains,
        // so resetting the previous order is enough
        self.order.clear();
        self.heap.clear();

        self.dist[source] = 0.0;
        self.sigma[source] = 1.0;
        self.heap.push(HeapItem {
            dist: 0.0,
            node: source,
        });
        while let Some(HeapItem { dist: d, node: v }) = self.heap.pop() {
            if self.settled[v] {
                continue;
            }
            self.settled[v] = true;
            self.order.push(v);
            let sigma_v = self.sigma[v];
            for &(w, wt) in g.neighbors(v) {
                if self.settled[w] || !filter(v, w, wt) {
                    continue;
                }
                let nd = d + wt;
                if strictly_shorter(nd, self.dist[w]) {
                    self.dist[w] = nd;
                    self.sigma[w] = sigma_v;
                    self.heap.push(HeapItem { dist: nd, node: w });
                } else if same_length(nd, self.dist[w]) {
                    self.sigma[w] += sigma_v;
                }
            }
        }
    }

    #[inline]
    fn is_pred(&self, v: NodeId, w: NodeId, wt: f64) -> bool {
        self.settled[v]
            && self.dist[v] < self.dist[w]
            && same_length(self.dist[v] + wt, self.dist[w])
    }

    /// Generalised dependency accumulation after [`Workspace::forward`]:
    /// `delta[v] = sum over successors w of sigma[v]/sigma[w] * (target_weight(w) + delta[w])`.
    pub fn backward<F, T>(&mut self, g: &Graph, filter: &F, target_weight: T)
    where
        F: Fn(NodeId, NodeId, f64) -> bool,
        T: Fn(NodeId) -> f64,
    {
        for i in (0..self.order.len()).rev() {
            let w = self.order[i];
            let coeff = (target_weight(w) + self.delta[w]) / self.sigma[w];
            if coeff == 0.0 {
                continue;
            }
            for &(v, wt) in g.neighbors(w) {
                if self.is_pred(v, w, wt) && filter(v, w, wt) {
                    self.delta[v] += self.sigma[v] * coeff;
                }
            }
        }
    }

    pub fn snapshot<F>(&self, g: &Graph, source: NodeId, filter: &F) -> SsspState
    where
        F: Fn(NodeId, NodeId, f64) -> bool,
    {
        let mut preds = vec![Vec::new(); g.node_count()];
        for &w in &self.order {
            for &(v, wt) in g.neighbors(w) {
                if self.is_pred(v, w, wt) && filter(v, w, wt) {
                    preds[w].push(v);
                }
            }
        }
        SsspState {
            source,
            dist: self.dist.clone(),
            sigma: self.sigma.clone(),
            preds,
            delta: self.delta.clone(),
            settled_order: self.order.clone(),
        }
    }
}

/// Single-source shortest paths with full predecessor DAG and unit-target dependencies.
pub fn sssp_dijkstra<F>(g: &Graph, source: NodeId, edge_filter: F) -> SsspState
where
    F: Fn(NodeId, NodeId, f64) -> bool,
{
    let mut ws = Workspace::new(g.node_count());
    ws.forward(g, source, &edge_filter);
    ws.backward(g, &edge_filter, |t| if t == source { 0.0 } else { 1.0 });
    ws.snapshot(g, source, &edge_filter)
}

/// Brandes betweenness over the edges admitted by `edge_filter`, counting only the
/// ordered pairs admitted by `pair_filter`.
pub fn brandes_bc<E, P>(g: &Graph, edge_filter: E, pair_filter: P) -> CentralityVector
where
    E: Fn(NodeId, NodeId, f64) -> bool + Sync,
    P: Fn(NodeId, NodeId) -> bool + Sync,
{
    let n = g.node_count();
    let sources: Vec<NodeId> = (0..n).collect();
    let partials: Vec<Vec<f64>> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| {
            let mut ws = Workspace::new(n);
            let mut partial = vec![0.0; n];
            for &s in chunk {
                ws.forward(g, s, &edge_filter);
                ws.backward(g, &edge_filter, |t| {
                    if t != s && pair_filter(s, t) {
                        1.0
                    } else {
                        0.0
                    }
                });
                for &v in &ws.order {
                    if v != s {
                        partial[v] += ws.delta[v];
                    }
                }
            }
            partial
        })
        .collect();

    let mut scores = vec![0.0; n];
    for partial in partials {
        for (acc, x) in scores.iter_mut().zip(partial) {
            *acc += x;
        }
    }
    CentralityVector::new(Measure::Bc, scores)
}

/// Exact betweenness of the whole graph.
pub fn betweenness(g: &Graph) -> CentralityVector {
    brandes_bc(g, |_, _, _| true, |_, _| true)
}

/// All-pairs shortest distances.
pub fn floyd_warshall(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let mut d = vec![vec![f64::INFINITY; n]; n];
    for (i, row) in d.iter_mut().enumerate() {
        row[i] = 0.0;
        for &(j, w) in g.neighbors(i) {
            row[j] = w;
        }
    }
    for k in 0..n {
        for i in 0..n {
            let dik = d[i][k];
            if dik.is_infinite() {
                continue;
            }
            let row_k = d[k].clone();
            for (dij, dkj) in d[i].iter_mut().zip(&row_k) {
                let cand = dik + dkj;
                if cand < *dij {
                    *dij = cand;
                }
            }
        }
    }
    d
}

/// Betweenness by explicit enumeration of every shortest path of every ordered pair.
pub fn brute_force_bc(g: &Graph) -> Result<CentralityVector, ExactError> {
    let n = g.node_count();
    if n > BRUTE_FORCE_NODE_CAP {
        return Err(ExactError::GraphTooLarge {
            nodes: n,
            cap: BRUTE_FORCE_NODE_CAP,
        });
    }
    let dist = floyd_warshall(g);
    let mut scores = vec![0.0; n];
    let mut through = vec![0u64; n];
    let mut path = Vec::with_capacity(n);
    for s in 0..n {
        for t in 0..n {
            if s == t || dist[s][t].is_infinite() {
                continue;
            }
            through.iter_mut().for_each(|c| *c = 0);
            path.clear();
            path.push(s);
            let total = enumerate_paths(g, &dist, s, t, 0.0, &mut path, &mut through);
            for v in 0..n {
                if through[v] > 0 {
                    scores[v] += through[v] as f64 / total as f64;
                }
            }
        }
    }
    Ok(CentralityVector::new(Measure::Bc, scores))
}

fn enumerate_paths(
    g: &Graph,
    dist: &[Vec<f64>],
    s: NodeId,
    t: NodeId,
    walked: f64,
    path: &mut Vec<NodeId>,
    through: &mut [u64],
) -> u64 {
    let u = *path.last().unwrap();
    if u == t {
        for &v in &path[1..path.len() - 1] {
            through[v] += 1;
        }
        return 1;
    }
    let mut count = 0;
    for &(x, w) in g.neighbors(u) {
        let so_far = walked + w;
        if same_length(so_far + dist[x][t], dist[s][t]) && same_length(so_far, dist[s][x]) {
            path.push(x);
            count += enumerate_paths(g, dist, s, t, so_far, path, through);
            path.pop();
        }
    }
    count
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::Edge;

    fn cycle(n: usize) -> Graph {
        let edges: Vec<Edge> = (0..n).map(|i| Edge::new(i, (i + 1) % n, 1.0)).collect();
        Graph::from_edges(n, &edges).unwrap()
    }

    #[test]
    fn sssp_on_path() {
        let st = sssp_dijkstra(&path(3), 0, |_, _, _| true);
        assert_eq!(st.dist, vec![0.0, 1.0, 2.0]);
        assert_eq!(st.sigma, vec![1.0, 1.0, 1.0]);
        assert_eq!(st.preds, vec![vec![], vec![0], vec![1]]);
        assert_eq!(st.settled_order, vec![0, 1, 2]);
        assert_eq!(st.delta, vec![2.0, 1.0, 0.0]);
    }

    #[test]
    fn sssp_counts_tied_paths_on_a_square() {
        let st = sssp_dijkstra(&cycle(4), 0, |_, _, _| true);
        assert_eq!(st.dist[2], 2.0);
        assert_eq!(st.sigma[2], 2.0);
        assert_eq!(st.preds[2], vec![1, 3]);
    }

    #[test]
    fn sssp_unreachable() {
        let g = Graph::from_edges(3, &[Edge::new(0, 1, 1.0)]).unwrap();
        let st = sssp_dijkstra(&g, 0, |_, _, _| true);
        assert!(st.dist[2].is_infinite());
        assert_eq!(st.sigma[2], 0.0);
        assert!(st.preds[2].is_empty());
    }

    #[test]
    fn sssp_respects_edge_filter() {
        let g = cycle(4);
        let st = sssp_dijkstra(&g, 0, |u, v, _| !(u.min(v) == 0 && u.max(v) == 3));
        assert_eq!(st.dist, vec![0.0, 1.0, 2.0, 3.0]);
    }

    #[test]
    fn brandes_small_cases() {
        assert_eq!(betweenness(&path(3)).scores, vec![0.0, 2.0, 0.0]);
        let star = Graph::from_edges(
            4,
            &[
                Edge::new(0, 1, 1.0),
                Edge::new(0, 2, 1.0),
                Edge::new(0, 3, 1.0),
            ],
        )
        .unwrap();
        assert_eq!(betweenness(&star).scores, vec![6.0, 0.0, 0.0, 0.0]);
        assert_eq!(
            betweenness(&two_triangles()).scores,
            vec![0.0, 0.0, 12.0, 12.0, 0.0, 0.0]
        );
    }

    #[test]
    fn length_comparisons_handle_infinity() {
        assert!(!same_length(1.0, f64::INFINITY));
        assert!(strictly_shorter(1.0, f64::INFINITY));
        assert!(same_length(f64::INFINITY, f64::INFINITY));
        assert!(same_length(0.1 + 0.2, 0.3));
        assert!(!same_length(1.0, 1.0 + 1e-9));
    }

    #[test]
    fn brute_force_small_cases() {
        let tri = cycle(3);
        assert_eq!(brute_force_bc(&tri).unwrap().scores, vec![0.0; 3]);
        assert_eq!(
            brute_force_bc(&path(4)).unwrap().scores,
            vec![0.0, 4.0, 4.0, 0.0]
        );
        assert_eq!(
            brute_force_bc(&two_triangles()).unwrap().scores,
            vec![0.0, 0.0, 12.0, 12.0, 0.0, 0.0]
        );
        // square: each node sits on one of two shortest paths for both ordered
        // opposite pairs
        assert_eq!(brute_force_bc(&cycle(4)).unwrap().scores, vec![1.0; 4]);
    }

    #[test]
    fn brute_force_refuses_large_graphs() {
        let g = path(BRUTE_FORCE_NODE_CAP + 1);
        assert_eq!(
            brute_force_bc(&g).unwrap_err(),
            ExactError::GraphTooLarge { nodes: 65, cap: 64 }
        );
    }

    #[test]
    fn pair_filter_restricts_counted_pairs() {
        // only (0, 2) counted, not (2, 0)
        let bc = brandes_bc(&path(3), |_, _, _| true, |s, t| s == 0 && t == 2);
        assert_eq!(bc.scores, vec![0.0, 1.0, 0.0]);
    }
}
