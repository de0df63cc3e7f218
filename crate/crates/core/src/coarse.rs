//! Coarse global centrality: modules collapse to virtual nodes, shortest routes are
//! taken over the module graph only, and external vertices that act as connectors
//! on those routes are credited `k * l` (module size times the size of the modules
//! they connect to).
//!
//! This ignores internal path costs across modules, so it does not reproduce exact
//! betweenness in general.

use std::collections::{BTreeMap, BTreeSet};

use crate::centrality::{argmax, CentralityVector, Measure};
use crate::exact::{betweenness, same_length, sssp_dijkstra};
use crate::graph::{quotient_graph, Graph, ModulePartition, NodeId};

/// One module-graph edge that lies on at least one shortest module route.
#[derive(Debug, Clone, PartialEq)]
pub struct UsedConnector {
    /// Weight of the module-graph edge (lightest external edge of the pair).
    pub weight: f64,
    /// Every module that is an endpoint of a shortest route over this edge.
    pub route_endpoints: BTreeSet<usize>,
}

/// Module-graph edges used by shortest routes, keyed by `(smaller, larger)` module.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct QuotientRoutes {
    pub used: BTreeMap<(usize, usize), UsedConnector>,
}

#[derive(Debug, Clone)]
pub struct CoarseReport {
    pub module_bc: Vec<f64>,
    pub node_ec: Vec<f64>,
    pub ic: CentralityVector,
    pub coarse_gc: CentralityVector,
    pub coarse_central_node: NodeId,
    pub coarse_central_module: usize,
}

/// Betweenness of each module over the module graph (ordered pairs).
pub fn module_graph_bc(q: &Graph) -> Vec<f64> {
    betweenness(q).scores
}

/// Which module-graph edges carry shortest routes, and between which modules.
pub fn quotient_routes(q: &Graph) -> QuotientRoutes {
    let k = q.node_count();
    let mut used: BTreeMap<(usize, usize), UsedConnector> = BTreeMap::new();
    let mut on_route = vec![false; k];
    let mut stack = Vec::new();
    for s in 0..k {
        let st = sssp_dijkstra(q, s, |_, _, _| true);
        for t in 0..k {
            if t == s || st.dist[t].is_infinite() {
                continue;
            }
            on_route.iter_mut().for_each(|b| *b = false);
            on_route[t] = true;
            stack.push(t);
            while let Some(w) = stack.pop() {
                for &p in &st.preds[w] {
                    let key = (p.min(w), p.max(w));
                    let entry = used.entry(key).or_insert_with(|| UsedConnector {
                        weight: q.weight(p, w).expect("dag edge exists"),
                        route_endpoints: BTreeSet::new(),
                    });
                    entry.route_endpoints.insert(s);
                    entry.route_endpoints.insert(t);
                    if !on_route[p] {
                        on_route[p] = true;
                        stack.push(p);
                    }
                }
            }
        }
    }
    QuotientRoutes { used }
}

/// External edges of `v` that realise a used module-graph edge, with the modules
/// whose routes cross them (excluding `v`'s own module).
fn used_edges_of<'r>(
    g: &Graph,
    routes: &'r QuotientRoutes,
    v: NodeId,
) -> Vec<(f64, &'r BTreeSet<usize>)> {
    let home = g.module_of(v);
    g.neighbors(v)
        .iter()
        .filter(|&&(u, _)| !g.is_internal(v, u))
        .filter_map(|&(u, w)| {
            let other = g.module_of(u);
            let conn = routes.used.get(&(home.min(other), home.max(other)))?;
            same_length(w, conn.weight).then_some((w, &conn.route_endpoints))
        })
        .collect()
}

fn module_mass(p: &ModulePartition, modules: impl Iterator<Item = usize>, home: usize) -> f64 {
    modules
        .filter(|&m| m != home)
        .map(|m| p.members[m].len() as f64)
        .sum()
}

/// `EC(v) = k * l`: `k` is the size of `v`'s module, `l` the total size of the
/// other modules whose shortest module routes cross one of `v`'s used external edges.
pub fn node_ec_unweighted(g: &Graph, p: &ModulePartition, routes: &QuotientRoutes) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let used = used_edges_of(g, routes, v);
            if used.is_empty() {
                return 0.0;
            }
            let home = g.module_of(v);
            let reached: BTreeSet<usize> = used
                .iter()
                .flat_map(|(_, ends)| ends.iter().copied())
                .collect();
            let k = p.members[home].len() as f64;
            k * module_mass(p, reached.into_iter(), home)
        })
        .collect()
}

/// Weighted variant: each used external edge `e` of `v` contributes
/// `k * l_e * w(e) / (sum of all external edge weights at v)`.
pub fn node_ec_weighted(g: &Graph, p: &ModulePartition, routes: &QuotientRoutes) -> Vec<f64> {
    (0..g.node_count())
        .map(|v| {
            let used = used_edges_of(g, routes, v);
            if used.is_empty() {
                return 0.0;
            }
            let home = g.module_of(v);
            let k = p.members[home].len() as f64;
            let total: f64 = g
                .neighbors(v)
                .iter()
                .filter(|&&(u, _)| !g.is_internal(v, u))
                .map(|&(_, w)| w)
                .sum();
            used.iter()
                .map(|(w, ends)| k * module_mass(p, ends.iter().copied(), home) * w / total)
                .sum()
        })
        .collect()
}

/// Coarse report from precomputed local centrality.
pub fn coarse_global(
    g: &Graph,
    p: &ModulePartition,
    lc: &CentralityVector,
    weighted: bool,
) -> CoarseReport {
    let q = quotient_graph(p, g);
    let module_bc = module_graph_bc(&q);
    let routes = quotient_routes(&q);
    let node_ec = if weighted {
        node_ec_weighted(g, p, &routes)
    } else {
        node_ec_unweighted(g, p, &routes)
    };
    let ic = CentralityVector::new(Measure::Ic, lc.scores.clone());
    let coarse_gc = CentralityVector::new(
        Measure::Gc,
        ic.scores.iter().zip(&node_ec).map(|(a, b)| a + b).collect(),
    );
    let per_module: Vec<f64> = p
        .external_vertices
        .iter()
        .map(|vs| vs.iter().map(|&v| node_ec[v]).sum())
        .collect();
    CoarseReport {
        module_bc,
        coarse_central_node: coarse_gc.argmax().unwrap_or(0),
        coarse_central_module: argmax(&per_module).unwrap_or(0),
        node_ec,
        ic,
        coarse_gc,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::brute_force_bc;
    use crate::graph::fixtures::*;
    use crate::graph::{classify_edges, Edge};
    use crate::modular::local_centrality;

    fn routes_of(g: &Graph) -> (ModulePartition, QuotientRoutes) {
        let p = classify_edges(g);
        let r = quotient_routes(&quotient_graph(&p, g));
        (p, r)
    }

    #[test]
    fn module_graph_bc_small() {
        assert_eq!(module_graph_bc(&path(3)), vec![0.0, 2.0, 0.0]);
        assert_eq!(module_graph_bc(&path(2)), vec![0.0, 0.0]);
    }

    #[test]
    fn module_graph_bc_matches_oracle_on_five_modules() {
        let edges = [
            Edge::new(0, 1, 3.0),
            Edge::new(1, 2, 1.0),
            Edge::new(2, 3, 2.0),
            Edge::new(3, 4, 1.0),
            Edge::new(0, 4, 2.0),
            Edge::new(1, 3, 3.0),
        ];
        let q = Graph::from_edges(5, &edges).unwrap();
        let bc = module_graph_bc(&q);
        let oracle = brute_force_bc(&q).unwrap().scores;
        for (a, b) in bc.iter().zip(&oracle) {
            assert!((a - b).abs() < 1e-9);
        }
    }

    #[test]
    fn two_triangles_unweighted() {
        let g = two_triangles();
        let (p, routes) = routes_of(&g);
        assert_eq!(
            node_ec_unweighted(&g, &p, &routes),
            vec![0.0, 0.0, 9.0, 9.0, 0.0, 0.0]
        );
        let (lc, _) = local_centrality(&g, &p);
        let report = coarse_global(&g, &p, &lc, false);
        assert_eq!(report.coarse_gc.scores, vec![0.0, 0.0, 9.0, 9.0, 0.0, 0.0]);
        assert_eq!(report.coarse_central_node, 2);
        assert_eq!(report.module_bc, vec![0.0, 0.0]);
    }

    #[test]
    fn single_module_is_all_zero() {
        let g = path(4);
        let (p, routes) = routes_of(&g);
        assert_eq!(node_ec_unweighted(&g, &p, &routes), vec![0.0; 4]);
        let (lc, _) = local_centrality(&g, &p);
        let report = coarse_global(&g, &p, &lc, true);
        assert_eq!(report.coarse_gc.scores, lc.scores);
    }

    #[test]
    fn module_chain_connectors() {
        // M0 {0,1} - M1 {2,3} - M2 {4,5}; m = 2
        let edges = [
            Edge::new(0, 1, 1.0),
            Edge::new(2, 3, 1.0),
            Edge::new(4, 5, 1.0),
            Edge::new(1, 2, 5.0),
            Edge::new(3, 4, 5.0),
        ];
        let g = Graph::build(6, &edges, vec![0, 0, 1, 1, 2, 2]).unwrap();
        let (p, routes) = routes_of(&g);
        let ec = node_ec_unweighted(&g, &p, &routes);
        let m = 2.0;
        assert_eq!(ec[2], m * (2.0 * m));
        assert_eq!(ec[3], m * (2.0 * m));
        assert_eq!(ec[0], 0.0);
    }

    #[test]
    fn weighted_variant() {
        // v = node 0 in A {0,1,2}; B = {3..7}, C = {8..12}.
        // A-B 10 and A-C 30 are both used; B-C 25 keeps B-C traffic off A.
        let mut edges = vec![Edge::new(0, 1, 1.0), Edge::new(1, 2, 1.0)];
        for i in 3..7 {
            edges.push(Edge::new(i, i + 1, 1.0));
        }
        for i in 8..12 {
            edges.push(Edge::new(i, i + 1, 1.0));
        }
        edges.push(Edge::new(0, 3, 10.0));
        edges.push(Edge::new(0, 8, 30.0));
        edges.push(Edge::new(7, 12, 25.0));
        let mut modules = vec![0; 3];
        modules.extend([1; 5]);
        modules.extend([2; 5]);
        let g = Graph::build(13, &edges, modules).unwrap();
        let (p, routes) = routes_of(&g);
        let weighted = node_ec_weighted(&g, &p, &routes);
        let direct = 3.0 * 5.0 * (10.0 / 40.0) + 3.0 * 5.0 * (30.0 / 40.0);
        assert_eq!(weighted[0], direct);
        assert_eq!(weighted[0], 15.0);
        assert_eq!(node_ec_unweighted(&g, &p, &routes)[0], 30.0);
        // node 3 has one used external edge: the two variants agree
        assert_eq!(weighted[3], node_ec_unweighted(&g, &p, &routes)[3]);
        assert_eq!(weighted[1], 0.0);
    }

    #[test]
    fn unused_connector_gets_nothing() {
        // A {0,1}, B {2,3}: two parallel external edges 0-2 (4) and 1-3 (9);
        // only the lighter one is a connector.
        let edges = [
            Edge::new(0, 1, 1.0),
            Edge::new(2, 3, 1.0),
            Edge::new(0, 2, 4.0),
            Edge::new(1, 3, 9.0),
        ];
        let g = Graph::build(4, &edges, vec![0, 0, 1, 1]).unwrap();
        let (p, routes) = routes_of(&g);
        assert_eq!(
            node_ec_unweighted(&g, &p, &routes),
            vec![4.0, 0.0, 4.0, 0.0]
        );
    }
}
