//! Perfect 2-matchings, perfect b-matchings and robust matchability.

pub mod bipartite;
mod bmatch;
mod flow;
mod robmat;
mod two;

pub use bmatch::{check_b_hypotheses, perfect_b_matching, BHypotheses, BMatchingConfig};
pub use robmat::{
    check_robmat, monotone_robustness, Confidence, MonotoneReport, RobmatConfig, RobmatType, RobmatVerdict,
    RobmatWitness,
};
pub use two::{has_perfect_2matching, TwoMatching};

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::SimpleGraph;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MatchingError {
    #[error("a type-2 check needs a bipartition")]
    MissingBipartition,
    #[error("bipartition has {got} entries for {n} vertices")]
    BadBipartition { got: usize, n: usize },
    #[error("degree targets have {got} entries for {n} vertices")]
    BadTargets { got: usize, n: usize },
    #[error("component containing vertex {vertex} has odd target sum {sum}")]
    OddComponent { vertex: usize, sum: u64 },
    #[error("target sums differ across the bipartition: {left} vs {right}")]
    Unbalanced { left: u64, right: u64 },
    #[error("vertex {vertex} carries {routed} path edges but its target is {target}")]
    RoutingExceedsTarget { vertex: usize, routed: u64, target: u64 },
    #[error("blow-up would have {nodes} vertices, above the cap {cap}")]
    BlowupTooLarge { nodes: u64, cap: u64 },
    #[error("the blow-up has no perfect 2-matching (independent set of {set} with {neighbours} neighbours)")]
    BlowupNotMatchable { set: usize, neighbours: usize },
    #[error("subgraph has {got} vertices, host has {n}")]
    NotSpanning { got: usize, n: usize },
    #[error("subgraph edge {0}-{1} is missing from the host")]
    ForeignEdge(usize, usize),
    #[error("vertex {vertex} lost {lost} edges, more than the allowed {allowed}")]
    DegreeLoss {
        vertex: usize,
        lost: usize,
        allowed: String,
    },
}

/// Nonnegative integer weights on edges together with the degree targets.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct EdgeWeighting {
    /// Positive weights keyed by `(u, v)` with `u < v`.
    pub weights: BTreeMap<(usize, usize), u64>,
    pub degree_target: Vec<u64>,
}

impl EdgeWeighting {
    pub fn new(degree_target: Vec<u64>) -> Self {
        Self {
            weights: BTreeMap::new(),
            degree_target,
        }
    }

    pub fn add(&mut self, u: usize, v: usize, w: u64) {
        if w > 0 {
            *self.weights.entry((u.min(v), u.max(v))).or_insert(0) += w;
        }
    }

    pub fn get(&self, u: usize, v: usize) -> u64 {
        self.weights.get(&(u.min(v), u.max(v))).copied().unwrap_or(0)
    }

    pub fn weighted_degrees(&self) -> Vec<u64> {
        let mut deg = vec![0; self.degree_target.len()];
        for (&(u, v), &w) in &self.weights {
            deg[u] += w;
            deg[v] += w;
        }
        deg
    }

    /// First problem found: a weighted non-edge or a vertex whose weighted
    /// degree misses its target.
    pub fn violation(&self, h: &SimpleGraph) -> Option<String> {
        for &(u, v) in self.weights.keys() {
            if !h.has_edge(u, v) {
                return Some(format!("weight on non-edge {u}-{v}"));
            }
        }
        let deg = self.weighted_degrees();
        (0..deg.len()).find(|&v| deg[v] != self.degree_target[v]).map(|v| {
            format!(
                "vertex {v} has weighted degree {} but target {}",
                deg[v], self.degree_target[v]
            )
        })
    }

    pub fn is_perfect(&self, h: &SimpleGraph) -> bool {
        self.degree_target.len() == h.order() && self.violation(h).is_none()
    }
}

#[derive(Serialize, Deserialize)]
struct WeightingWire {
    weights: BTreeMap<String, u64>,
    degree_target: Vec<u64>,
}

impl Serialize for EdgeWeighting {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        WeightingWire {
            weights: self
                .weights
                .iter()
                .map(|(&(u, v), &w)| (format!("{u}-{v}"), w))
                .collect(),
            degree_target: self.degree_target.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for EdgeWeighting {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let wire = WeightingWire::deserialize(d)?;
        let mut out = EdgeWeighting::new(wire.degree_target);
        for (key, w) in wire.weights {
            let (u, v) = key
                .split_once('-')
                .ok_or_else(|| serde::de::Error::custom(format!("bad edge key {key}")))?;
            let u: usize = u.parse().map_err(serde::de::Error::custom)?;
            let v: usize = v.parse().map_err(serde::de::Error::custom)?;
            out.add(u, v, w);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weighting_json_uses_edge_keys() {
        let mut w = EdgeWeighting::new(vec![2, 2]);
        w.add(1, 0, 2);
        let s = serde_json::to_string(&w).unwrap();
        assert_eq!(s, r#"{"weights":{"0-1":2},"degree_target":[2,2]}"#);
        let back: EdgeWeighting = serde_json::from_str(&s).unwrap();
        assert_eq!(back, w);
        assert!(w.is_perfect(&SimpleGraph::complete(2)));
    }
}
