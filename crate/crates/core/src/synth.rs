//! Seeded generator for modular graphs: dense, connected modules joined by a sparse
//! set of external edges that connect the module graph.
//!
//! The random stream comes from `ChaCha8Rng` (rand_chacha 0.9) seeded with
//! `seed_from_u64`, so a seed produces the same graph on every platform.
//!
//! With `enforce_p`, every external edge weighs more than the largest intra-module
//! shortest-path distance, so no shortest path between two nodes of one module can
//! leave it.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::{index, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use thiserror::Error;

use crate::exact::Workspace;
use crate::graph::{classify_edges, Edge, Graph, NodeId};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid generator config: {0}")]
    InvalidConfig(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModuleRule {
    /// `floor(sqrt(n))` modules.
    Sqrt,
    /// `max(1, floor(n / 100))` modules.
    Hundredth,
    Explicit(usize),
}

impl ModuleRule {
    pub fn module_count(self, n: usize) -> usize {
        match self {
            ModuleRule::Sqrt => n.isqrt(),
            ModuleRule::Hundredth => (n / 100).max(1),
            ModuleRule::Explicit(k) => k,
        }
    }
}

impl FromStr for ModuleRule {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "sqrt" => Ok(ModuleRule::Sqrt),
            "hundredth" => Ok(ModuleRule::Hundredth),
            other => other
                .parse::<usize>()
                .map(ModuleRule::Explicit)
                .map_err(|_| {
                    format!("expected `sqrt`, `hundredth` or a module count, got `{other}`")
                }),
        }
    }
}

impl fmt::Display for ModuleRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleRule::Sqrt => f.write_str("sqrt"),
            ModuleRule::Hundredth => f.write_str("hundredth"),
            ModuleRule::Explicit(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GenConfig {
    pub n: usize,
    pub module_rule: ModuleRule,
    /// Fraction of intra-module node pairs joined by an edge (at least a spanning tree).
    pub internal_density: f64,
    /// Mean number of extra external edges per adjacent module pair, on top of one.
    pub external_edges_per_module_pair: f64,
    /// Inclusive integer weight range.
    pub weight_range: (u32, u32),
    pub seed: u64,
    pub enforce_p: bool,
}

impl GenConfig {
    pub fn new(n: usize, module_rule: ModuleRule, seed: u64) -> Self {
        GenConfig {
            n,
            module_rule,
            internal_density: 0.5,
            external_edges_per_module_pair: 1.0,
            weight_range: (10, 50),
            seed,
            enforce_p: false,
        }
    }

    pub fn enforce_p(mut self, on: bool) -> Self {
        self.enforce_p = on;
        self
    }

    fn validate(&self) -> Result<usize, SynthError> {
        let bad = |m: String| Err(SynthError::InvalidConfig(m));
        if self.n < 4 {
            return bad(format!("need at least 4 nodes, got {}", self.n));
        }
        let (lo, hi) = self.weight_range;
        if lo < 1 || lo > hi {
            return bad(format!(
                "weight range {lo}..={hi} must satisfy 1 <= min <= max"
            ));
        }
        if !(0.0..=1.0).contains(&self.internal_density) {
            return bad(format!(
                "internal density {} outside [0, 1]",
                self.internal_density
            ));
        }
        let lambda = self.external_edges_per_module_pair;
        if !(lambda.is_finite() && lambda >= 0.0) {
            return bad(format!(
                "external edge mean {lambda} must be finite and non-negative"
            ));
        }
        let k = self.module_rule.module_count(self.n);
        if k < 1 || k > self.n {
            return bad(format!("module count {k} must be between 1 and {}", self.n));
        }
        Ok(k)
    }
}

#[derive(Debug, Clone)]
pub struct Generated {
    pub graph: Graph,
    /// Human-readable config record, written as the file's header comment.
    pub metadata: Vec<String>,
    /// Floor applied to external weights when `enforce_p` is set.
    pub external_weight_floor: Option<f64>,
}

/// Balanced module sizes: the first `n % k` modules get one extra node.
pub fn module_sizes(n: usize, k: usize) -> Vec<usize> {
    (0..k).map(|m| n / k + usize::from(m < n % k)).collect()
}

pub fn generate(cfg: &GenConfig) -> Result<Graph, SynthError> {
    generate_with_metadata(cfg).map(|g| g.graph)
}

pub fn generate_with_metadata(cfg: &GenConfig) -> Result<Generated, SynthError> {
    let k = cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (lo, hi) = cfg.weight_range;

    let sizes = module_sizes(cfg.n, k);
    let mut starts = Vec::with_capacity(k);
    let mut module_of = Vec::with_capacity(cfg.n);
    for (m, &size) in sizes.iter().enumerate() {
        starts.push(module_of.len());
        module_of.extend(std::iter::repeat_n(m, size));
    }

    let mut edges: Vec<Edge> = Vec::new();
    for (m, &size) in sizes.iter().enumerate() {
        let base = starts[m];
        let mut order: Vec<NodeId> = (base..base + size).collect();
        order.shuffle(&mut rng);
        let mut present: HashSet<(NodeId, NodeId)> = HashSet::new();
        for i in 1..size {
            let (a, b) = (order[i], order[rng.random_range(0..i)]);
            present.insert((a.min(b), a.max(b)));
            edges.push(Edge::new(a, b, rng.random_range(lo..=hi) as f64));
        }
        let pairs = size * size.saturating_sub(1) / 2;
        let target = ((cfg.internal_density * pairs as f64).round() as usize).max(size - 1);
        let extra = target - (size - 1);
        if extra > 0 {
            let candidates: Vec<(NodeId, NodeId)> = (base..base + size)
                .flat_map(|a| (a + 1..base + size).map(move |b| (a, b)))
                .filter(|pair| !present.contains(pair))
                .collect();
            for i in index::sample(&mut rng, candidates.len(), extra.min(candidates.len())) {
                let (a, b) = candidates[i];
                edges.push(Edge::new(a, b, rng.random_range(lo..=hi) as f64));
            }
        }
    }

    let mut crossing: Vec<(NodeId, NodeId)> = Vec::new();
    if k > 1 {
        let mut order: Vec<usize> = (0..k).collect();
        order.shuffle(&mut rng);
        let poisson = (cfg.external_edges_per_module_pair > 0.0)
            .then(|| Poisson::new(cfg.external_edges_per_module_pair).expect("validated mean"));
        let mut present: HashSet<(NodeId, NodeId)> = HashSet::new();
        for i in 1..k {
            let (a, b) = (order[i], order[rng.random_range(0..i)]);
            let count = 1 + poisson.as_ref().map_or(0, |p| p.sample(&mut rng) as usize);
            for _ in 0..count {
                // a few retries when the drawn node pair already has an edge
                for _ in 0..8 {
                    let u = starts[a] + rng.random_range(0..sizes[a]);
                    let v = starts[b] + rng.random_range(0..sizes[b]);
                    if present.insert((u.min(v), u.max(v))) {
                        crossing.push((u, v));
                        break;
                    }
                }
            }
        }
    }

    let mut external_weight_floor = None;
    if cfg.enforce_p {
        let internal = Graph::build(cfg.n, &edges, module_of.clone())
            .expect("generated internal edges are valid");
        let floor = max_module_diameter(&internal) + 1.0;
        external_weight_floor = Some(floor);
        for &(u, v) in &crossing {
            let offset = rng.random_range(0..=hi - lo) as f64;
            edges.push(Edge::new(u, v, floor + offset));
        }
    } else {
        for &(u, v) in &crossing {
            edges.push(Edge::new(u, v, rng.random_range(lo..=hi) as f64));
        }
    }

    let graph = Graph::build(cfg.n, &edges, module_of).expect("generator emits valid graphs");
    let mut metadata = vec![
        "modbc synthetic modular graph".to_string(),
        format!(
            "n={} modules={} rule={} sizes={}..={}",
            cfg.n,
            k,
            cfg.module_rule,
            sizes.iter().min().unwrap(),
            sizes.iter().max().unwrap()
        ),
        format!(
            "internal_density={} external_extra_mean={} weight_range={}..={}",
            cfg.internal_density, cfg.external_edges_per_module_pair, lo, hi
        ),
        format!(
            "seed={} prng=ChaCha8Rng(rand_chacha 0.9, seed_from_u64)",
            cfg.seed
        ),
    ];
    match external_weight_floor {
        Some(floor) => metadata.push(format!(
            "enforce_p=true external_weight=floor+U[0,{}] floor={floor}",
            hi - lo
        )),
        None => metadata.push("enforce_p=false".to_string()),
    }
    Ok(Generated {
        graph,
        metadata,
        external_weight_floor,
    })
}

/// Largest finite intra-module shortest-path distance over all modules.
pub fn max_module_diameter(g: &Graph) -> f64 {
    let p = classify_edges(g);
    let all = |_: NodeId, _: NodeId, _: f64| true;
    (0..p.module_count)
        .map(|m| {
            let sub = p.module_subgraph(m);
            let mut ws = Workspace::new(sub.node_count());
            let mut diameter: f64 = 0.0;
            for s in 0..sub.node_count() {
                ws.forward(&sub, s, &all);
                for &v in &ws.order {
                    diameter = diameter.max(ws.dist[v]);
                }
            }
            diameter
        })
        .fold(0.0, f64::max)
}
