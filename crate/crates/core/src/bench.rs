//! Wall-clock comparison of the exact and module-decomposed algorithms.

use std::fmt;
use std::fmt::Write as _;
use std::str::FromStr;
use std::time::{Duration, Instant};

use crate::centrality::argmax;
use crate::coarse::coarse_global;
use crate::exact::{betweenness, brute_force_bc, ExactError};
use crate::graph::{classify_edges, Graph, NodeId};
use crate::modular::{global_centrality, local_centrality};
use crate::synth::{generate, GenConfig, ModuleRule, SynthError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Algorithm {
    Exact,
    Modular,
    Coarse,
    Oracle,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Exact => "exact",
            Algorithm::Modular => "modular",
            Algorithm::Coarse => "coarse",
            Algorithm::Oracle => "oracle",
        })
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "exact" => Ok(Algorithm::Exact),
            "modular" => Ok(Algorithm::Modular),
            "coarse" => Ok(Algorithm::Coarse),
            "oracle" => Ok(Algorithm::Oracle),
            other => Err(format!("unknown algorithm `{other}`")),
        }
    }
}

/// One timed run.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchResult {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub threads: usize,
    pub wall_seconds: f64,
    pub seed: u64,
    pub argmax_node: NodeId,
    pub argmax_score: f64,
}

impl BenchResult {
    pub const CSV_HEADER: &'static str =
        "algo,n,k,threads,seed,wall_seconds,argmax_node,argmax_score";

    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{:.6},{},{}",
            self.algorithm,
            self.n,
            self.k,
            self.threads,
            self.seed,
            self.wall_seconds,
            self.argmax_node,
            crate::io::format_score(self.argmax_score)
        )
    }
}

/// Runs the full pipeline for `algo` and returns the ranking score vector (BC for
/// exact/oracle, GC for modular, coarse GC for coarse) with the elapsed time.
pub fn timed_scores(
    g: &Graph,
    algo: Algorithm,
    coarse_weighted: bool,
) -> Result<(Vec<f64>, Duration), ExactError> {
    let start = Instant::now();
    let scores = match algo {
        Algorithm::Exact => betweenness(g).scores,
        Algorithm::Oracle => brute_force_bc(g)?.scores,
        Algorithm::Modular => {
            let p = classify_edges(g);
            global_centrality(g, &p).gc.scores
        }
        Algorithm::Coarse => {
            let p = classify_edges(g);
            let (lc, _) = local_centrality(g, &p);
            coarse_global(g, &p, &lc, coarse_weighted).coarse_gc.scores
        }
    };
    Ok((scores, start.elapsed()))
}

pub fn bench_once(g: &Graph, algo: Algorithm, seed: u64) -> Result<BenchResult, ExactError> {
    let (scores, elapsed) = timed_scores(g, algo, false)?;
    let argmax_node = argmax(&scores).unwrap_or(0);
    Ok(BenchResult {
        algorithm: algo,
        n: g.node_count(),
        k: g.module_count(),
        threads: rayon::current_num_threads(),
        wall_seconds: elapsed.as_secs_f64().max(f64::MIN_POSITIVE),
        seed,
        argmax_node,
        argmax_score: scores.get(argmax_node).copied().unwrap_or(0.0),
    })
}

/// Median over repeats for one (algorithm, size, module rule) cell.
#[derive(Debug, Clone, PartialEq)]
pub struct CompareRow {
    pub algorithm: Algorithm,
    pub rule: ModuleRule,
    pub n: usize,
    pub k: usize,
    pub median_seconds: f64,
    pub argmax_node: NodeId,
}

pub fn median(values: &mut [f64]) -> f64 {
    values.sort_by(f64::total_cmp);
    let mid = values.len() / 2;
    if values.len() % 2 == 1 {
        values[mid]
    } else {
        (values[mid - 1] + values[mid]) / 2.0
    }
}

/// Generates one graph per (size, rule) and times each algorithm on it `repeats`
/// times. Generation is outside the timed region.
pub fn bench_compare(
    sizes: &[usize],
    rules: &[ModuleRule],
    algorithms: &[Algorithm],
    repeats: usize,
    seed: u64,
) -> Result<Vec<CompareRow>, BenchError> {
    if repeats < 3 {
        return Err(BenchError::TooFewRepeats(repeats));
    }
    if sizes.windows(2).any(|w| w[0] >= w[1]) {
        return Err(BenchError::UnsortedSizes);
    }
    let mut rows = Vec::new();
    for &rule in rules {
        for &n in sizes {
            let g = generate(&GenConfig::new(n, rule, seed))?;
            for &algo in algorithms {
                let mut times = Vec::with_capacity(repeats);
                let mut argmax_node = 0;
                for _ in 0..repeats {
                    let r = bench_once(&g, algo, seed)?;
                    argmax_node = r.argmax_node;
                    times.push(r.wall_seconds);
                }
                rows.push(CompareRow {
                    algorithm: algo,
                    rule,
                    n,
                    k: g.module_count(),
                    median_seconds: median(&mut times),
                    argmax_node,
                });
            }
        }
    }
    Ok(rows)
}

/// `algo,n,k,median_seconds`
pub fn compare_csv(rows: &[CompareRow]) -> String {
    let mut out = String::from("algo,n,k,median_seconds\n");
    for r in rows {
        let _ = writeln!(
            out,
            "{},{},{},{:.6}",
            r.algorithm, r.n, r.k, r.median_seconds
        );
    }
    out
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("need at least 3 repeats, got {0}")]
    TooFewRepeats(usize),
    #[error("sizes must be strictly ascending")]
    UnsortedSizes,
    #[error(transparent)]
    Synth(#[from] SynthError),
    #[error(transparent)]
    Exact(#[from] ExactError),
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn median_of_odd_and_even() {
        assert_eq!(median(&mut [3.0, 1.0, 2.0]), 2.0);
        assert_eq!(median(&mut [4.0, 1.0, 2.0, 3.0]), 2.5);
    }

    #[test]
    fn compare_shape_and_guards() {
        let rows = bench_compare(
            &[100, 200],
            &[ModuleRule::Sqrt, ModuleRule::Hundredth],
            &[Algorithm::Modular],
            3,
            1,
        )
        .unwrap();
        assert_eq!(rows.len(), 4);
        assert_eq!(rows[0].k, 10);
        assert_eq!(rows[2].k, 1);
        assert!(compare_csv(&rows).starts_with("algo,n,k,median_seconds\n"));
        assert!(matches!(
            bench_compare(&[100], &[ModuleRule::Sqrt], &[Algorithm::Exact], 2, 1),
            Err(BenchError::TooFewRepeats(2))
        ));
        assert!(matches!(
            bench_compare(&[200, 100], &[ModuleRule::Sqrt], &[Algorithm::Exact], 3, 1),
            Err(BenchError::UnsortedSizes)
        ));
    }
}
