//! Cluster partitions, reduced graphs, and paths through dense pairs.

mod connect;
mod inherit;
mod pair_path;
mod refute;

pub use connect::{connecting_path, ConnectConfig};
pub use inherit::{reduced_inheritance_checks, InheritanceReport, InheritanceViolation};
pub use pair_path::{path_hypotheses, path_in_pair, PairPathConfig, PathHypotheses};
pub use refute::{eps_regular_refuter, Refutation};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, ColouredGraph};
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RegularityError {
    #[error("vertex {0} is missing from the partition or listed twice")]
    NotAPartition(usize),
    #[error("cluster {index} has {size} vertices, expected {expected}")]
    UnequalClusters { index: usize, size: usize, expected: usize },
    #[error("pair sides of size {left} and {right} are below 1/eps")]
    PairTooSmall { left: usize, right: usize },
    #[error("reduced graph has no colour-{colour} edge between clusters {i} and {j}")]
    MissingReducedEdge { i: usize, j: usize, colour: Colour },
    #[error("no colour-{colour} route in the reduced graph from cluster {from} to cluster {to}")]
    NoRoute { from: usize, to: usize, colour: Colour },
    #[error("search exhausted: {0}")]
    Exhausted(String),
    #[error("invalid input: {0}")]
    Invalid(String),
}

/// `V_0` plus equal-sized clusters `V_1..V_m` (stored 0-based).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClusterPartition {
    pub n: usize,
    pub v0: Vec<usize>,
    pub clusters: Vec<Vec<usize>>,
    #[serde(with = "crate::rational::text")]
    pub eps: Rational,
    #[serde(with = "crate::rational::text")]
    pub d: Rational,
}

/// Size bounds a regularity partition would satisfy, evaluated exactly.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SizeReport {
    pub v0: usize,
    pub cluster_size: usize,
    pub bound: Rational,
    pub v0_within: bool,
    pub clusters_within: bool,
}

impl ClusterPartition {
    pub fn new(
        n: usize,
        v0: Vec<usize>,
        clusters: Vec<Vec<usize>>,
        eps: Rational,
        d: Rational,
    ) -> Result<Self, RegularityError> {
        let cp = Self {
            n,
            v0,
            clusters,
            eps,
            d,
        };
        cp.validate()?;
        Ok(cp)
    }

    pub fn validate(&self) -> Result<(), RegularityError> {
        let mut seen = vec![false; self.n];
        for &v in self.v0.iter().chain(self.clusters.iter().flatten()) {
            if v >= self.n || seen[v] {
                return Err(RegularityError::NotAPartition(v));
            }
            seen[v] = true;
        }
        if let Some(v) = seen.iter().position(|&s| !s) {
            return Err(RegularityError::NotAPartition(v));
        }
        if let Some(first) = self.clusters.first() {
            for (i, c) in self.clusters.iter().enumerate() {
                if c.len() != first.len() {
                    return Err(RegularityError::UnequalClusters {
                        index: i,
                        size: c.len(),
                        expected: first.len(),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn m(&self) -> usize {
        self.clusters.len()
    }

    pub fn cluster_size(&self) -> usize {
        self.clusters.first().map_or(0, Vec::len)
    }

    /// Cluster index per vertex, `None` for `V_0`.
    pub fn membership(&self) -> Vec<Option<usize>> {
        let mut out = vec![None; self.n];
        for (i, c) in self.clusters.iter().enumerate() {
            for &v in c {
                out[v] = Some(i);
            }
        }
        out
    }

    pub fn size_report(&self) -> SizeReport {
        let bound = self.eps * int(self.n);
        SizeReport {
            v0: self.v0.len(),
            cluster_size: self.cluster_size(),
            bound,
            v0_within: int(self.v0.len()) <= bound,
            clusters_within: int(self.cluster_size()) <= bound,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("partition serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, RegularityError> {
        let cp: Self = serde_json::from_str(s).map_err(|e| RegularityError::Invalid(e.to_string()))?;
        cp.validate()?;
        Ok(cp)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedEdge {
    pub i: usize,
    pub j: usize,
    pub colour: Colour,
    pub density: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedGraph {
    pub m: usize,
    pub r: Colour,
    /// Edges with `i < j`, sorted.
    pub edges: Vec<ReducedEdge>,
    pub bipartition: Option<Vec<bool>>,
}

impl ReducedGraph {
    pub fn edge(&self, i: usize, j: usize) -> Option<&ReducedEdge> {
        let key = (i.min(j), i.max(j));
        self.edges
            .binary_search_by(|e| (e.i, e.j).cmp(&key))
            .ok()
            .map(|k| &self.edges[k])
    }

    pub fn as_coloured(&self) -> ColouredGraph {
        ColouredGraph::from_edges(self.m, self.r, self.edges.iter().map(|e| (e.i, e.j, e.colour)))
            .expect("reduced edges are simple")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RegularityMode {
    /// Pairs are taken as regular (generator-made partitions).
    Trusted,
    /// Every dense pair is probed by the refuter first.
    Sampled { samples: usize, seed: u64 },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RefutedPair {
    pub i: usize,
    pub j: usize,
    pub colour: Colour,
    pub witness: Refutation,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReducedBuild {
    pub graph: ReducedGraph,
    pub refuted: Vec<RefutedPair>,
}

/// Exact per-colour densities `d_c(V_i, V_j)`, indexed `[c-1][i][j]`.
pub fn pair_densities(g: &ColouredGraph, cp: &ClusterPartition) -> Vec<Vec<Vec<Rational>>> {
    let m = cp.m();
    let r = g.colours() as usize;
    let member = cp.membership();
    let mut count = vec![vec![vec![0u64; m]; m]; r];
    for (u, v, c) in g.edges() {
        if let (Some(i), Some(j)) = (member[u], member[v]) {
            if i != j {
                count[c as usize - 1][i][j] += 1;
                count[c as usize - 1][j][i] += 1;
            }
        }
    }
    let s = cp.cluster_size() as i128;
    count
        .into_iter()
        .map(|rows| {
            rows.into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|e| if s == 0 { ratio(0, 1) } else { ratio(e as i128, s * s) })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Builds the reduced graph: `x_i x_j` gets the lowest colour whose density
/// reaches `d` and which the refuter (in sampled mode) does not reject.
#[allow(clippy::needless_range_loop)]
pub fn build_reduced(
    g: &ColouredGraph,
    cp: &ClusterPartition,
    mode: RegularityMode,
    bipartition: Option<Vec<bool>>,
) -> Result<ReducedBuild, RegularityError> {
    if cp.n != g.order() {
        return Err(RegularityError::Invalid(format!(
            "partition covers {} vertices, graph has {}",
            cp.n,
            g.order()
        )));
    }
    let dens = pair_densities(g, cp);
    let m = cp.m();
    let mut edges = Vec::new();
    let mut refuted = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            for c in 1..=g.colours() {
                let dc = dens[c as usize - 1][i][j];
                if dc < cp.d {
                    continue;
                }
                if let RegularityMode::Sampled { samples, seed } = mode {
                    let pair_seed = crate::derive_seed(seed, ((i * m + j) * 64 + c as usize) as u64);
                    if let Some(w) = eps_regular_refuter(
                        g,
                        Some(c),
                        &cp.clusters[i],
                        &cp.clusters[j],
                        &cp.eps,
                        samples,
                        pair_seed,
                    )? {
                        refuted.push(RefutedPair {
                            i,
                            j,
                            colour: c,
                            witness: w,
                        });
                        continue;
                    }
                }
                edges.push(ReducedEdge {
                    i,
                    j,
                    colour: c,
                    density: dc,
                });
                break;
            }
        }
    }
    Ok(ReducedBuild {
        graph: ReducedGraph {
            m,
            r: g.colours(),
            edges,
            bipartition,
        },
        refuted,
    })
}

/// Number of colour-`c` neighbours of `v` inside `set` (given as a mask).
pub(crate) fn colour_degree_into(g: &ColouredGraph, v: usize, c: Option<Colour>, mask: &[bool]) -> usize {
    g.neighbours(v)
        .filter(|&(u, col)| mask[u] && c.is_none_or(|c| c == col))
        .count()
}

pub(crate) fn mask_of(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    set.iter().for_each(|&v| m[v] = true);
    m
}

/// Vertices of `a` whose colour-`c` degree into `b` is at least
/// `(d_c(a, b) - eps) |b|`.
pub fn typical_in(g: &ColouredGraph, c: Colour, a: &[usize], b: &[usize], eps: &Rational) -> Vec<usize> {
    let mask = mask_of(g.order(), b);
    let degs: Vec<usize> = a.iter().map(|&v| colour_degree_into(g, v, Some(c), &mask)).collect();
    if a.is_empty() || b.is_empty() {
        return a.to_vec();
    }
    let total: usize = degs.iter().sum();
    let density = ratio(total as i128, (a.len() * b.len()) as i128);
    let bar = (density - eps) * int(b.len());
    a.iter()
        .zip(&degs)
        .filter(|(_, &d)| int(d) >= bar)
        .map(|(&v, _)| v)
        .collect()
}

/// Vertices of `V_i` with typical colour-`c` degree into `V_j`.
pub fn typical_vertices(
    g: &ColouredGraph,
    cp: &ClusterPartition,
    rg: &ReducedGraph,
    i: usize,
    j: usize,
    colour: Colour,
) -> Result<Vec<usize>, RegularityError> {
    match rg.edge(i, j) {
        Some(e) if e.colour == colour => {}
        _ => return Err(RegularityError::MissingReducedEdge { i, j, colour }),
    }
    Ok(typical_in(g, colour, &cp.clusters[i], &cp.clusters[j], &cp.eps))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_clusters(edges: Vec<(usize, usize, Colour)>) -> (ColouredGraph, ClusterPartition) {
        let g = ColouredGraph::from_edges(8, 2, edges).unwrap();
        let cp = ClusterPartition::new(
            8,
            vec![],
            vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]],
            ratio(1, 4),
            ratio(1, 10),
        )
        .unwrap();
        (g, cp)
    }

    #[test]
    fn complete_pair_gives_density_one() {
        let edges = (0..4).flat_map(|u| (4..8).map(move |v| (u, v, 1))).collect();
        let (g, cp) = two_clusters(edges);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        assert_eq!(rg.edges.len(), 1);
        assert_eq!(rg.edges[0].colour, 1);
        assert_eq!(rg.edges[0].density, ratio(1, 1));
        assert_eq!(typical_vertices(&g, &cp, &rg, 0, 1, 1).unwrap(), vec![0, 1, 2, 3]);
    }

    #[test]
    fn empty_pair_has_no_reduced_edge() {
        let (g, cp) = two_clusters(vec![]);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        assert!(rg.edges.is_empty());
        assert!(typical_vertices(&g, &cp, &rg, 0, 1, 1).is_err());
    }

    #[test]
    fn isolated_vertex_is_not_typical() {
        let edges = (1..4).flat_map(|u| (4..8).map(move |v| (u, v, 1))).collect();
        let (g, cp) = two_clusters(edges);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        assert_eq!(typical_vertices(&g, &cp, &rg, 0, 1, 1).unwrap(), vec![1, 2, 3]);
    }

    #[test]
    fn partition_errors() {
        assert_eq!(
            ClusterPartition::new(3, vec![0], vec![vec![1]], ratio(1, 4), ratio(1, 4)),
            Err(RegularityError::NotAPartition(2))
        );
        assert!(matches!(
            ClusterPartition::new(3, vec![], vec![vec![0], vec![1, 2]], ratio(1, 4), ratio(1, 4)),
            Err(RegularityError::UnequalClusters { .. })
        ));
    }

    #[test]
    fn lowest_colour_wins_ties() {
        // colours 1 and 2 each fill half of the pair
        let edges = (0..4)
            .flat_map(|u| (4..8).map(move |v| (u, v, if (u + v) % 2 == 0 { 1 } else { 2 })))
            .collect();
        let (g, cp) = two_clusters(edges);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        assert_eq!(rg.edges[0].colour, 1);
        assert_eq!(rg.edges[0].density, ratio(1, 2));
    }
}
