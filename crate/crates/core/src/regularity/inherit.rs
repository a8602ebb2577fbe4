//! Degree and density inheritance from the host to the reduced graph.
//!
//! The host side is measured in the cleaned graph: edges between distinct
//! clusters whose colour reaches density `d` in that pair.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::{pair_densities, ClusterPartition, ReducedGraph};
use crate::graph::ColouredGraph;
use crate::rational::{int, ratio, Rational};
use crate::rng_from_seed;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum InheritanceViolation {
    /// A host vertex of degree `c n` in cluster `i`, but `x_i` has lower reduced degree.
    Degree {
        cluster: usize,
        host_degree: usize,
        reduced_degree: usize,
        bar: Rational,
    },
    /// Too many reduced vertices below the degree bar for threshold `c`.
    MostDegrees {
        c: Rational,
        exceptions: usize,
        allowed: Rational,
    },
    /// A cluster set spanning `c n^2` host edges but too few reduced edges.
    Density {
        clusters: Vec<usize>,
        host_edges: usize,
        reduced_edges: usize,
        bar: Rational,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct InheritanceReport {
    pub violations: Vec<InheritanceViolation>,
    pub degree_checks: usize,
    pub threshold_checks: usize,
    pub set_checks: usize,
    /// True when every cluster set was checked (`m <= 16`).
    pub sets_exhaustive: bool,
}

impl InheritanceReport {
    pub fn clean(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Evaluates the three inheritance clauses on `(cp, rg)`.
pub fn reduced_inheritance_checks(
    g: &ColouredGraph,
    cp: &ClusterPartition,
    rg: &ReducedGraph,
    seed: u64,
) -> InheritanceReport {
    let n = g.order();
    let m = cp.m();
    let r = int(g.colours() as usize);
    let slack = r * cp.d + cp.eps;
    let member = cp.membership();
    let dens = pair_densities(g, cp);
    let kept = |u: usize, v: usize, c: u16| -> Option<(usize, usize)> {
        match (member[u], member[v]) {
            (Some(i), Some(j)) if i != j && dens[c as usize - 1][i][j] >= cp.d => Some((i, j)),
            _ => None,
        }
    };
    let mut host_deg = vec![0usize; n];
    let mut pair_edges = vec![vec![0usize; m]; m];
    for (u, v, c) in g.edges() {
        if let Some((i, j)) = kept(u, v, c) {
            host_deg[u] += 1;
            host_deg[v] += 1;
            pair_edges[i][j] += 1;
            pair_edges[j][i] += 1;
        }
    }
    let mut red_adj = vec![vec![false; m]; m];
    let mut red_deg = vec![0usize; m];
    for e in &rg.edges {
        red_adj[e.i][e.j] = true;
        red_adj[e.j][e.i] = true;
        red_deg[e.i] += 1;
        red_deg[e.j] += 1;
    }
    let nn = int(n.max(1));
    let mm = int(m);
    let mut violations = Vec::new();

    // (a): the best host degree per cluster
    for (i, (cluster, &reduced)) in cp.clusters.iter().zip(&red_deg).enumerate() {
        let best = cluster.iter().map(|&v| host_deg[v]).max().unwrap_or(0);
        let c = int(best) / nn;
        let bar = (c - slack) * mm;
        if int(reduced) < bar {
            violations.push(InheritanceViolation::Degree {
                cluster: i,
                host_degree: best,
                reduced_degree: reduced,
                bar,
            });
        }
    }

    // (b): thresholds c = k/20
    let mut threshold_checks = 0;
    for k in 1..20 {
        let c = ratio(k, 20);
        let below_host = (0..n).filter(|&v| int(host_deg[v]) < c * nn).count();
        let eta = int(below_host) / nn;
        let bar = (c - slack) * mm;
        let exceptions = (0..m).filter(|&i| int(red_deg[i]) < bar).count();
        let allowed = (eta + cp.eps) * mm;
        threshold_checks += 1;
        if int(exceptions) > allowed {
            violations.push(InheritanceViolation::MostDegrees { c, exceptions, allowed });
        }
    }

    // (c): cluster sets, all of them when m is small
    let sets: Vec<Vec<usize>> = if m <= 16 {
        (1u32..(1 << m))
            .map(|mask| (0..m).filter(|&i| mask >> i & 1 == 1).collect())
            .collect()
    } else {
        let mut rng = rng_from_seed(seed);
        (0..2000)
            .map(|t| {
                let size = 2 + t % (m - 1);
                let mut s = sample(&mut rng, m, size).into_vec();
                s.sort_unstable();
                s
            })
            .collect()
    };
    let set_checks = sets.len();
    for set in sets {
        let mut host = 0;
        let mut red = 0;
        for (a, &i) in set.iter().enumerate() {
            for &j in &set[a + 1..] {
                host += pair_edges[i][j];
                red += usize::from(red_adj[i][j]);
            }
        }
        let c = int(host) / (nn * nn);
        let bar = (c - slack) * mm * mm;
        if int(red) < bar {
            violations.push(InheritanceViolation::Density {
                clusters: set,
                host_edges: host,
                reduced_edges: red,
                bar,
            });
        }
    }
    InheritanceReport {
        violations,
        degree_checks: m,
        threshold_checks,
        set_checks,
        sets_exhaustive: m <= 16,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::regularity::{build_reduced, RegularityMode};

    fn complete_host(m: usize, s: usize) -> (ColouredGraph, ClusterPartition) {
        let g = ColouredGraph::complete(m * s, 2, 1);
        let clusters = (0..m).map(|i| (i * s..(i + 1) * s).collect()).collect();
        let cp = ClusterPartition::new(m * s, vec![], clusters, ratio(1, 100), ratio(1, 100)).unwrap();
        (g, cp)
    }

    #[test]
    fn complete_host_is_clean() {
        let (g, cp) = complete_host(6, 5);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        let rep = reduced_inheritance_checks(&g, &cp, &rg, 0);
        assert!(rep.clean(), "{:?}", rep.violations);
        assert!(rep.sets_exhaustive);
    }

    #[test]
    fn corrupted_reduced_graph_is_caught() {
        let (g, cp) = complete_host(6, 5);
        let mut rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        rg.edges.retain(|e| e.i != 0 && e.j != 0 && (e.i, e.j) != (1, 2));
        let rep = reduced_inheritance_checks(&g, &cp, &rg, 0);
        assert!(rep
            .violations
            .iter()
            .any(|v| matches!(v, InheritanceViolation::Density { .. })));
    }
}
