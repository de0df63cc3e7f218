//! Module-decomposed betweenness: local centrality inside every module, external
//! centrality from cross-module pairs, and their sum as global centrality.
//!
//! Exactness condition: for every module and every pair of its nodes, all shortest
//! paths of the full graph stay inside the module. Under that condition every
//! shortest path crosses each module in a single contiguous segment, which is what
//! lets the cross-module search run over a small skeleton:
//!
//! - skeleton states are `in(x)` (arrived at external vertex `x` over an external
//!   edge) and `out(x)` (at `x`, about to leave over an external edge);
//! - `in(x) -> out(y)` arcs follow precomputed intra-module segments between
//!   external vertices of one module, `out(x) -> in(y)` arcs are external edges;
//! - a source reaches `out(x)` of its own module through its intra-module distance
//!   to `x`.
//!
//! Credit is split three ways. Transit credit for nodes on `in -> out` segments of
//! intermediate modules is linear in the arc flow, so flows are summed over all
//! sources before being pushed into the segment. Terminal credit inside the target
//! module depends only on the relative offsets and path counts of the entries that
//! are tight there; identical entry patterns are evaluated once and weighted by how
//! often they occur. Source-side credit equals the terminal credit of the reversed
//! pair, so the terminal credit is counted twice and the source segment is never
//! walked.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::centrality::{argmax, CentralityVector, Measure};
use crate::exact::{same_length, strictly_shorter, SsspState, Workspace};
use crate::graph::{Edge, Graph, ModulePartition, NodeId};

const SOURCE_CHUNK: usize = 32;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ModularError {
    #[error(
        "nodes {s} and {t} of module {module} have a shortest path leaving the module \
         (intra-module length {local_dist} / {local_paths} paths, full graph {global_dist} / {global_paths} paths)"
    )]
    PreconditionViolated {
        module: usize,
        s: NodeId,
        t: NodeId,
        local_dist: f64,
        global_dist: f64,
        local_paths: f64,
        global_paths: f64,
    },
}

/// Intra-module shortest-path data from every node to the module's external vertices.
#[derive(Debug, Clone)]
pub struct ModuleSummary {
    pub module: usize,
    /// Global ids indexed by local id.
    pub members: Vec<NodeId>,
    /// Global ids of the external vertices.
    pub external: Vec<NodeId>,
    /// `to_ext_dist[local][e]`: distance from a member to `external[e]`.
    pub to_ext_dist: Vec<Vec<f64>>,
    pub to_ext_sigma: Vec<Vec<f64>>,
    /// Shortest-path DAG rooted at each external vertex, over local ids.
    pub local_dags: Vec<SsspState>,
}

impl ModuleSummary {
    /// Distance between external vertices `a` and `b` (indices into `external`).
    fn ext_dist(&self, a: usize, b: usize) -> f64 {
        self.to_ext_dist[self.local_dags[b].source][a]
    }

    fn ext_sigma(&self, a: usize, b: usize) -> f64 {
        self.to_ext_sigma[self.local_dags[b].source][a]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EgressChoice {
    pub node: NodeId,
    /// Intra-module distance to the exit vertex plus the exit edge weight;
    /// infinite when the module has no reachable external edge.
    pub egress_cost: f64,
    pub egress_edge: Option<Edge>,
}

#[derive(Debug, Clone)]
pub struct GlobalCentralityReport {
    pub lc: CentralityVector,
    pub ec: CentralityVector,
    pub gc: CentralityVector,
    pub ec_module: Vec<f64>,
    pub global_central_node: NodeId,
    pub global_central_module: usize,
    pub egress: Vec<EgressChoice>,
}

/// Betweenness of every module on its own internal edges, plus the summaries the
/// cross-module pass needs. Summaries are filled from the same single-source runs.
pub fn local_centrality(g: &Graph, p: &ModulePartition) -> (CentralityVector, Vec<ModuleSummary>) {
    let per_module: Vec<(Vec<f64>, ModuleSummary)> = (0..p.module_count)
        .into_par_iter()
        .map(|m| local_module(p, m))
        .collect();

    let mut lc = vec![0.0; g.node_count()];
    let mut summaries = Vec::with_capacity(per_module.len());
    for (local_scores, summary) in per_module {
        for (local, score) in local_scores.into_iter().enumerate() {
            lc[summary.members[local]] = score;
        }
        summaries.push(summary);
    }
    (CentralityVector::new(Measure::Lc, lc), summaries)
}

#[allow(clippy::needless_range_loop)]
fn local_module(p: &ModulePartition, m: usize) -> (Vec<f64>, ModuleSummary) {
    let sub = p.module_subgraph(m);
    let size = sub.node_count();
    let external = p.external_vertices[m].clone();
    let mut ext_slot = vec![None; size];
    for (e, &x) in external.iter().enumerate() {
        ext_slot[p.local_index[x]] = Some(e);
    }

    let all = |_: NodeId, _: NodeId, _: f64| true;
    let mut ws = Workspace::new(size);
    let mut scores = vec![0.0; size];
    let mut to_ext_dist = vec![vec![f64::INFINITY; external.len()]; size];
    let mut to_ext_sigma = vec![vec![0.0; external.len()]; size];
    let mut local_dags: Vec<Option<SsspState>> = vec![None; external.len()];

    for s in 0..size {
        ws.forward(&sub, s, &all);
        ws.backward(&sub, &all, |t| if t == s { 0.0 } else { 1.0 });
        for &v in &ws.order {
            if v != s {
                scores[v] += ws.delta[v];
            }
        }
        if let Some(e) = ext_slot[s] {
            for &v in &ws.order {
                to_ext_dist[v][e] = ws.dist[v];
                to_ext_sigma[v][e] = ws.sigma[v];
            }
            local_dags[e] = Some(ws.snapshot(&sub, s, &all));
        }
    }

    let summary = ModuleSummary {
        module: m,
        members: p.members[m].clone(),
        external,
        to_ext_dist,
        to_ext_sigma,
        local_dags: local_dags
            .into_iter()
            .map(|d| d.expect("every external vertex is a source"))
            .collect(),
    };
    (scores, summary)
}

/// Cheapest way out of its module for every node: intra-module path to an external
/// vertex plus one external edge.
pub fn egress_paths(
    p: &ModulePartition,
    summaries: &[ModuleSummary],
    g: &Graph,
) -> Vec<EgressChoice> {
    let mut out: Vec<EgressChoice> = (0..g.node_count())
        .map(|node| EgressChoice {
            node,
            egress_cost: f64::INFINITY,
            egress_edge: None,
        })
        .collect();
    for summary in summaries {
        for (local, &node) in summary.members.iter().enumerate() {
            let choice = &mut out[node];
            for (e, &x) in summary.external.iter().enumerate() {
                let d = summary.to_ext_dist[local][e];
                if d.is_infinite() {
                    continue;
                }
                for &(y, w) in g.neighbors(x) {
                    if g.is_internal(x, y) {
                        continue;
                    }
                    let cost = d + w;
                    if cost < choice.egress_cost {
                        choice.egress_cost = cost;
                        choice.egress_edge = Some(Edge::new(x, y, w));
                    }
                }
            }
        }
    }
    debug_assert!(out
        .iter()
        .all(|c| p.module_count > 0 || c.egress_edge.is_none()));
    out
}

/// Skeleton over all external vertices of the graph.
struct Skeleton<'a> {
    summaries: &'a [ModuleSummary],
    /// Module and index into that module's `external` for each skeleton vertex.
    module: Vec<usize>,
    slot: Vec<usize>,
    /// Skeleton ids of each module's external vertices, in summary order.
    module_ext: Vec<Vec<usize>>,
    /// External edges leaving each skeleton vertex: (target skeleton id, weight).
    crossings: Vec<Vec<(usize, f64)>>,
    /// Offset of each module's ext-by-ext transit block.
    transit_offset: Vec<usize>,
    transit_len: usize,
}

impl<'a> Skeleton<'a> {
    fn new(g: &Graph, summaries: &'a [ModuleSummary]) -> Self {
        let mut id_of = vec![usize::MAX; g.node_count()];
        let mut module = Vec::new();
        let mut slot = Vec::new();
        let mut module_ext = Vec::with_capacity(summaries.len());
        let mut transit_offset = Vec::with_capacity(summaries.len());
        let mut transit_len = 0;
        for s in summaries {
            let mut ids = Vec::with_capacity(s.external.len());
            for (e, &x) in s.external.iter().enumerate() {
                id_of[x] = module.len();
                ids.push(module.len());
                module.push(s.module);
                slot.push(e);
            }
            transit_offset.push(transit_len);
            transit_len += ids.len() * ids.len();
            module_ext.push(ids);
        }
        let mut crossings = vec![Vec::new(); module.len()];
        for s in summaries {
            for &x in &s.external {
                for &(y, w) in g.neighbors(x) {
                    if !g.is_internal(x, y) {
                        crossings[id_of[x]].push((id_of[y], w));
                    }
                }
            }
        }
        Skeleton {
            summaries,
            module,
            slot,
            module_ext,
            crossings,
            transit_offset,
            transit_len,
        }
    }

    fn len(&self) -> usize {
        self.module.len()
    }

    fn seg_dist(&self, from: usize, to: usize) -> f64 {
        self.summaries[self.module[from]].ext_dist(self.slot[from], self.slot[to])
    }

    fn seg_sigma(&self, from: usize, to: usize) -> f64 {
        self.summaries[self.module[from]].ext_sigma(self.slot[from], self.slot[to])
    }
}

/// Tight entries of one target module, normalised so that equal patterns compare
/// equal bit for bit: (entry slot, offset above the smallest entry, path count
/// relative to the first entry).
type EntryPattern = Vec<(u32, u64, u64)>;

fn decode_pattern(key: &EntryPattern) -> Vec<(usize, f64, f64)> {
    key.iter()
        .map(|&(e, off, sig)| (e as usize, f64::from_bits(off), f64::from_bits(sig)))
        .collect()
}

/// Fraction of target paths entering through each tight entry, summed over the
/// module's nodes: `weights[e][t] = sigma_e * paths(e, t) / total(t)`.
#[allow(clippy::needless_range_loop)]
fn entry_weights(summary: &ModuleSummary, entries: &[(usize, f64, f64)]) -> Vec<Vec<f64>> {
    let size = summary.members.len();
    let mut weights = vec![vec![0.0; size]; entries.len()];
    for t in 0..size {
        let row_d = &summary.to_ext_dist[t];
        let row_s = &summary.to_ext_sigma[t];
        let best = entries
            .iter()
            .map(|&(e, off, _)| off + row_d[e])
            .fold(f64::INFINITY, f64::min);
        if best.is_infinite() {
            continue;
        }
        let mut total = 0.0;
        for &(e, off, sig) in entries {
            if same_length(off + row_d[e], best) {
                total += sig * row_s[e];
            }
        }
        for (k, &(e, off, sig)) in entries.iter().enumerate() {
            if same_length(off + row_d[e], best) {
                weights[k][t] = sig * row_s[e] / total;
            }
        }
    }
    weights
}

/// Credit inside a target module for all targets reached through `entries`,
/// pushed down each entry's intra-module DAG. Entry vertices themselves are
/// interior to every path that continues past them.
fn terminal_credit(summary: &ModuleSummary, entries: &[(usize, f64, f64)]) -> Vec<f64> {
    let size = summary.members.len();
    let weights = entry_weights(summary, entries);
    let mut credit = vec![0.0; size];
    let mut delta = vec![0.0; size];
    for (k, &(e, _, _)) in entries.iter().enumerate() {
        let dag = &summary.local_dags[e];
        delta.iter_mut().for_each(|d| *d = 0.0);
        for &w in dag.settled_order.iter().rev() {
            let coeff = (weights[k][w] + delta[w]) / dag.sigma[w];
            if coeff == 0.0 {
                continue;
            }
            for &v in &dag.preds[w] {
                delta[v] += dag.sigma[v] * coeff;
            }
        }
        for (c, d) in credit.iter_mut().zip(&delta) {
            *c += d;
        }
    }
    credit
}

struct ChunkResult {
    transit: Vec<f64>,
    patterns: HashMap<(usize, EntryPattern), u64>,
}

struct SkeletonSearch {
    dist: Vec<f64>,
    sigma: Vec<f64>,
    settled: Vec<bool>,
    order: Vec<usize>,
    flow: Vec<f64>,
    heap: std::collections::BinaryHeap<SkeletonItem>,
}

#[derive(Clone, Copy, PartialEq)]
struct SkeletonItem {
    dist: f64,
    state: usize,
}

impl Eq for SkeletonItem {}
impl PartialOrd for SkeletonItem {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for SkeletonItem {
    // min-heap on (dist, in-before-out, vertex); the zero-length in(x) -> out(x)
    // arc needs in(x) settled first
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        other
            .dist
            .total_cmp(&self.dist)
            .then_with(|| (other.state & 1).cmp(&(self.state & 1)))
            .then_with(|| other.state.cmp(&self.state))
    }
}

#[inline]
fn in_state(x: usize) -> usize {
    2 * x
}
#[inline]
fn out_state(x: usize) -> usize {
    2 * x + 1
}

impl SkeletonSearch {
    fn new(states: usize) -> Self {
        SkeletonSearch {
            dist: vec![f64::INFINITY; states],
            sigma: vec![0.0; states],
            settled: vec![false; states],
            order: Vec::with_capacity(states),
            flow: vec![0.0; states],
            heap: Default::default(),
        }
    }

    fn reset(&mut self) {
        for &q in &self.order {
            self.dist[q] = f64::INFINITY;
            self.sigma[q] = 0.0;
            self.settled[q] = false;
            self.flow[q] = 0.0;
        }
        self.order.clear();
        self.heap.clear();
    }

    fn offer(&mut self, q: usize, d: f64, sigma: f64) {
        if self.settled[q] {
            return;
        }
        if strictly_shorter(d, self.dist[q]) {
            self.dist[q] = d;
            self.sigma[q] = sigma;
            self.heap.push(SkeletonItem { dist: d, state: q });
        } else if same_length(d, self.dist[q]) {
            self.sigma[q] += sigma;
        }
    }

    fn run(&mut self, sk: &Skeleton<'_>, source_module: usize, source_local: usize) {
        self.reset();
        let home = &sk.summaries[source_module];
        for &x in &sk.module_ext[source_module] {
            let d = home.to_ext_dist[source_local][sk.slot[x]];
            if d.is_finite() {
                self.offer(out_state(x), d, home.to_ext_sigma[source_local][sk.slot[x]]);
            }
        }
        while let Some(SkeletonItem { dist: d, state: q }) = self.heap.pop() {
            if self.settled[q] {
                continue;
            }
            self.settled[q] = true;
            self.order.push(q);
            let x = q / 2;
            let sigma = self.sigma[q];
            if q & 1 == 0 {
                for &y in &sk.module_ext[sk.module[x]] {
                    let seg = sk.seg_dist(x, y);
                    if seg.is_finite() {
                        self.offer(out_state(y), d + seg, sigma * sk.seg_sigma(x, y));
                    }
                }
            } else {
                for &(y, w) in &sk.crossings[x] {
                    if sk.module[y] != source_module {
                        self.offer(in_state(y), d + w, sigma);
                    }
                }
            }
        }
    }
}

fn pattern_for(sk: &Skeleton<'_>, search: &SkeletonSearch, m: usize) -> Option<EntryPattern> {
    let ids = &sk.module_ext[m];
    let mut tight: Vec<(usize, f64, f64)> = Vec::new();
    for (a, &x) in ids.iter().enumerate() {
        let dx = search.dist[in_state(x)];
        if dx.is_infinite() {
            continue;
        }
        let dominated = ids.iter().any(|&y| {
            let dy = search.dist[in_state(y)];
            y != x && dy.is_finite() && strictly_shorter(dy + sk.seg_dist(y, x), dx)
        });
        if !dominated {
            tight.push((a, dx, search.sigma[in_state(x)]));
        }
    }
    if tight.is_empty() {
        return None;
    }
    let base = tight.iter().map(|t| t.1).fold(f64::INFINITY, f64::min);
    let unit = tight[0].2;
    Some(
        tight
            .into_iter()
            .map(|(a, d, s)| (a as u32, (d - base).to_bits(), (s / unit).to_bits()))
            .collect(),
    )
}

fn process_chunk(
    sk: &Skeleton<'_>,
    p: &ModulePartition,
    g: &Graph,
    sources: &[NodeId],
) -> ChunkResult {
    let mut search = SkeletonSearch::new(2 * sk.len());
    let mut transit = vec![0.0; sk.transit_len];
    let mut patterns: HashMap<(usize, EntryPattern), u64> = HashMap::new();
    let mut entry_mass: HashMap<(usize, EntryPattern), Arc<Vec<f64>>> = HashMap::new();
    let mut terminal = vec![0.0; 2 * sk.len()];

    for &s in sources {
        let home = g.module_of(s);
        if sk.module_ext[home].is_empty() {
            continue;
        }
        search.run(sk, home, p.local_index[s]);

        for m in 0..sk.module_ext.len() {
            if m == home {
                continue;
            }
            let Some(key) = pattern_for(sk, &search, m) else {
                continue;
            };
            let mass = entry_mass
                .entry((m, key.clone()))
                .or_insert_with(|| {
                    let entries = decode_pattern(&key);
                    let weights = entry_weights(&sk.summaries[m], &entries);
                    Arc::new(weights.iter().map(|w| w.iter().sum()).collect())
                })
                .clone();
            for (&(a, _, _), f) in key.iter().zip(mass.iter()) {
                terminal[in_state(sk.module_ext[m][a as usize])] = *f;
            }
            *patterns.entry((m, key)).or_insert(0) += 1;
        }

        // push pair mass back towards the source
        for i in (0..search.order.len()).rev() {
            let q = search.order[i];
            let total = search.flow[q] + std::mem::take(&mut terminal[q]);
            if total == 0.0 {
                continue;
            }
            let x = q / 2;
            let dq = search.dist[q];
            let per_path = total / search.sigma[q];
            if q & 1 == 0 {
                for &(y, w) in &sk.crossings[x] {
                    let pq = out_state(y);
                    if search.settled[pq]
                        && search.dist[pq] < dq
                        && same_length(search.dist[pq] + w, dq)
                    {
                        search.flow[pq] += search.sigma[pq] * per_path;
                    }
                }
            } else {
                let m = sk.module[x];
                if m == home {
                    continue;
                }
                let ids = &sk.module_ext[m];
                let width = ids.len();
                for &y in ids {
                    let pq = in_state(y);
                    if !search.settled[pq] {
                        continue;
                    }
                    let seg = sk.seg_dist(y, x);
                    if (y == x || search.dist[pq] < dq) && same_length(search.dist[pq] + seg, dq) {
                        let arc = search.sigma[pq] * sk.seg_sigma(y, x) * per_path;
                        search.flow[pq] += arc;
                        transit[sk.transit_offset[m] + sk.slot[y] * width + sk.slot[x]] += arc;
                    }
                }
            }
        }
    }
    ChunkResult { transit, patterns }
}

/// External centrality: for every node, the summed fraction of shortest paths of
/// cross-module ordered pairs passing through it.
pub fn cross_module_dependencies(
    g: &Graph,
    p: &ModulePartition,
    summaries: &[ModuleSummary],
) -> CentralityVector {
    let sk = Skeleton::new(g, summaries);
    let sources: Vec<NodeId> = (0..g.node_count()).collect();
    let chunks: Vec<ChunkResult> = sources
        .par_chunks(SOURCE_CHUNK)
        .map(|chunk| process_chunk(&sk, p, g, chunk))
        .collect();

    let mut transit = vec![0.0; sk.transit_len];
    let mut patterns: BTreeMap<(usize, EntryPattern), u64> = BTreeMap::new();
    for chunk in chunks {
        for (acc, x) in transit.iter_mut().zip(&chunk.transit) {
            *acc += x;
        }
        for (key, count) in chunk.patterns {
            *patterns.entry(key).or_insert(0) += count;
        }
    }

    let patterns: Vec<((usize, EntryPattern), u64)> = patterns.into_iter().collect();
    let credits: Vec<Vec<f64>> = patterns
        .par_iter()
        .map(|((m, key), _)| terminal_credit(&summaries[*m], &decode_pattern(key)))
        .collect();

    let mut ec = vec![0.0; g.node_count()];
    for (((m, _), count), credit) in patterns.iter().zip(credits) {
        let scale = 2.0 * *count as f64;
        for (local, c) in credit.into_iter().enumerate() {
            if c != 0.0 {
                ec[summaries[*m].members[local]] += scale * c;
            }
        }
    }

    for (m, summary) in summaries.iter().enumerate() {
        let width = summary.external.len();
        let block = &transit[sk.transit_offset[m]..sk.transit_offset[m] + width * width];
        for a in 0..width {
            for b in 0..width {
                let flow = block[a * width + b];
                if flow == 0.0 {
                    continue;
                }
                let seg = summary.ext_dist(a, b);
                let seg_sigma = summary.ext_sigma(a, b);
                for (local, &node) in summary.members.iter().enumerate() {
                    let (da, db) = (summary.to_ext_dist[local][a], summary.to_ext_dist[local][b]);
                    if same_length(da + db, seg) {
                        let share = summary.to_ext_sigma[local][a] * summary.to_ext_sigma[local][b]
                            / seg_sigma;
                        ec[node] += flow * share;
                    }
                }
            }
        }
    }
    CentralityVector::new(Measure::Ec, ec)
}

/// Local, external and global centrality with the global central node and module.
pub fn global_centrality(g: &Graph, p: &ModulePartition) -> GlobalCentralityReport {
    let (lc, summaries) = local_centrality(g, p);
    let egress = egress_paths(p, &summaries, g);
    let ec = cross_module_dependencies(g, p, &summaries);
    let gc = lc.plus(&ec, Measure::Gc);
    let ec_module: Vec<f64> = p
        .external_vertices
        .iter()
        .map(|vs| vs.iter().map(|&v| ec.scores[v]).sum())
        .collect();
    let global_central_node = gc.argmax().unwrap_or(0);
    let global_central_module = argmax(&ec_module).unwrap_or(0);
    GlobalCentralityReport {
        lc,
        ec,
        gc,
        ec_module,
        global_central_node,
        global_central_module,
        egress,
    }
}

/// Checks that intra-module shortest paths never leave their module.
///
/// With `sources_per_module = None` every node is a source; otherwise up to that
/// many evenly spaced members per module are checked against every other member.
pub fn validate_precondition(
    g: &Graph,
    p: &ModulePartition,
    sources_per_module: Option<usize>,
) -> Result<(), ModularError> {
    let results: Vec<Result<(), ModularError>> = (0..p.module_count)
        .into_par_iter()
        .map(|m| validate_module(g, p, m, sources_per_module))
        .collect();
    results.into_iter().collect()
}

fn validate_module(
    g: &Graph,
    p: &ModulePartition,
    m: usize,
    sources_per_module: Option<usize>,
) -> Result<(), ModularError> {
    let members = &p.members[m];
    let size = members.len();
    let picks: Vec<usize> = match sources_per_module {
        Some(cap) if cap < size => {
            let mut v: Vec<usize> = (0..cap).map(|i| i * size / cap).collect();
            v.dedup();
            v
        }
        _ => (0..size).collect(),
    };
    let sub = p.module_subgraph(m);
    let all = |_: NodeId, _: NodeId, _: f64| true;
    let mut local = Workspace::new(size);
    let mut global = Workspace::new(g.node_count());
    for s in picks {
        local.forward(&sub, s, &all);
        global.forward(g, members[s], &all);
        for (t, &node) in members.iter().enumerate() {
            if t == s {
                continue;
            }
            let (ld, gd) = (local.dist[t], global.dist[node]);
            let (ls, gs) = (local.sigma[t], global.sigma[node]);
            if !(same_length(ld, gd) || (ld.is_infinite() && gd.is_infinite())) || ls != gs {
                return Err(ModularError::PreconditionViolated {
                    module: m,
                    s: members[s],
                    t: node,
                    local_dist: ld,
                    global_dist: gd,
                    local_paths: ls,
                    global_paths: gs,
                });
            }
        }
    }
    Ok(())
}
