use std::fmt;

use crate::graph::NodeId;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Measure {
    /// Exact betweenness over the whole graph.
    Bc,
    /// Local centrality: betweenness inside one module.
    Lc,
    /// External centrality: contribution of cross-module pairs.
    Ec,
    /// Intermediate centrality, seeded from LC by the coarse algorithm.
    Ic,
    /// Global centrality, LC + EC.
    Gc,
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Measure::Bc => "bc",
            Measure::Lc => "lc",
            Measure::Ec => "ec",
            Measure::Ic => "ic",
            Measure::Gc => "gc",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityVector {
    pub measure: Measure,
    pub scores: Vec<f64>,
}

impl CentralityVector {
    pub fn new(measure: Measure, scores: Vec<f64>) -> Self {
        CentralityVector { measure, scores }
    }

    pub fn zeros(measure: Measure, n: usize) -> Self {
        CentralityVector {
            measure,
            scores: vec![0.0; n],
        }
    }

    pub fn len(&self) -> usize {
        self.scores.len()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn argmax(&self) -> Option<NodeId> {
        argmax(&self.scores)
    }

    /// Componentwise sum, tagged with `measure`.
    pub fn plus(&self, other: &CentralityVector, measure: Measure) -> CentralityVector {
        assert_eq!(self.len(), other.len());
        let scores = self
            .scores
            .iter()
            .zip(&other.scores)
            .map(|(a, b)| a + b)
            .collect();
        CentralityVector { measure, scores }
    }

    /// Unordered-pair convention: every score divided by two.
    pub fn halved(&self) -> CentralityVector {
        CentralityVector {
            measure: self.measure,
            scores: self.scores.iter().map(|s| s / 2.0).collect(),
        }
    }

    pub fn max_abs_diff(&self, other: &CentralityVector) -> f64 {
        max_abs_diff(&self.scores, &other.scores)
    }
}

/// Relative slack under which two scores count as tied for the argmax.
pub const ARGMAX_TIE_TOLERANCE: f64 = 1e-9;

/// Index of the largest score; near-ties (within [`ARGMAX_TIE_TOLERANCE`] relative)
/// go to the smallest index.
pub fn argmax(scores: &[f64]) -> Option<usize> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if scores.is_empty() {
        return None;
    }
    let floor = max - ARGMAX_TIE_TOLERANCE * max.abs().max(1.0);
    scores.iter().position(|&s| s >= floor)
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn argmax_prefers_smallest_index_on_ties() {
        assert_eq!(argmax(&[0.0, 12.0, 12.0]), Some(1));
        assert_eq!(argmax(&[3.0, 12.0, 12.0 + 1e-12]), Some(1));
        assert_eq!(argmax(&[3.0, 12.0, 13.0]), Some(2));
        assert_eq!(argmax(&[]), None);
    }
}
