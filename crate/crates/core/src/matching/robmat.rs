use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::MatchingError;
use crate::graph::SimpleGraph;
use crate::rational::{at_least, floor_nonneg, int, ratio, Rational};
use crate::{rng_from_seed, Rng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum RobmatType {
    #[serde(rename = "type1")]
    One,
    #[serde(rename = "type2")]
    Two,
}

/// How much an acceptance can be trusted. Rejections always carry a
/// re-checkable witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Confidence {
    /// Every clause checked exhaustively.
    Exact,
    /// The sparse-set clause follows from a degree-counting lower bound.
    Certified,
    /// The sparse-set clause survived a randomized search only.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "clause", rename_all = "snake_case")]
pub enum RobmatWitness {
    LowDegree {
        vertex: usize,
        degree: usize,
        bar: Rational,
    },
    SparseSet {
        set: Vec<usize>,
        edges: usize,
        bar: Rational,
    },
    NotBalanced {
        left: usize,
        right: usize,
    },
    EdgeInsideSide {
        u: usize,
        v: usize,
    },
    ManyLowDegree {
        vertices: Vec<usize>,
        allowed: Rational,
        bar: Rational,
    },
}

impl RobmatWitness {
    /// Re-checks the witness against `h` from scratch.
    pub fn violates(&self, h: &SimpleGraph, bipartition: Option<&[bool]>) -> bool {
        match self {
            RobmatWitness::LowDegree { vertex, bar, .. } => !at_least(h.degree(*vertex), bar),
            RobmatWitness::SparseSet { set, bar, .. } => {
                let mut mask = vec![false; h.order()];
                set.iter().for_each(|&v| mask[v] = true);
                let e: usize = set.iter().map(|&v| h.degree_into(v, &mask)).sum::<usize>() / 2;
                !at_least(e, bar)
            }
            RobmatWitness::NotBalanced { .. } => bipartition.is_some_and(|side| {
                let a = side.iter().filter(|&&s| s).count();
                2 * a != side.len()
            }),
            RobmatWitness::EdgeInsideSide { u, v } => {
                bipartition.is_some_and(|side| h.has_edge(*u, *v) && side[*u] == side[*v])
            }
            RobmatWitness::ManyLowDegree { vertices, allowed, bar } => {
                vertices.iter().all(|&v| !at_least(h.degree(v), bar)) && int(vertices.len()) > *allowed
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RobmatVerdict {
    pub accepted: bool,
    pub robmat_type: RobmatType,
    pub mu: Rational,
    pub nu: Rational,
    pub witness: Option<RobmatWitness>,
    pub confidence: Confidence,
}

#[derive(Debug, Clone, Copy)]
pub struct RobmatConfig {
    /// Largest order for which the sparse-set clause is checked exhaustively.
    pub exhaustive_cap: usize,
    /// Upper limit on restarts of the randomized sparse-set minimizer.
    pub max_restarts: usize,
    pub seed: u64,
}

impl Default for RobmatConfig {
    fn default() -> Self {
        Self {
            exhaustive_cap: 22,
            max_restarts: 64,
            seed: 0,
        }
    }
}

fn verdict(
    ty: RobmatType,
    mu: &Rational,
    nu: &Rational,
    witness: Option<RobmatWitness>,
    confidence: Confidence,
) -> RobmatVerdict {
    RobmatVerdict {
        accepted: witness.is_none(),
        robmat_type: ty,
        mu: *mu,
        nu: *nu,
        witness,
        confidence,
    }
}

/// Checks the (mu, nu)-robust matchability clauses of the claimed type.
pub fn check_robmat(
    h: &SimpleGraph,
    mu: &Rational,
    nu: &Rational,
    claimed: RobmatType,
    bipartition: Option<&[bool]>,
    cfg: &RobmatConfig,
) -> Result<RobmatVerdict, MatchingError> {
    let n = h.order();
    match claimed {
        RobmatType::One => Ok(check_type1(h, mu, nu, cfg)),
        RobmatType::Two => {
            let side = bipartition.ok_or(MatchingError::MissingBipartition)?;
            if side.len() != n {
                return Err(MatchingError::BadBipartition { got: side.len(), n });
            }
            Ok(check_type2(h, mu, nu, side))
        }
    }
}

fn min_degree_vertex(h: &SimpleGraph) -> Option<usize> {
    (0..h.order()).min_by_key(|&v| (h.degree(v), v))
}

fn check_type1(h: &SimpleGraph, mu: &Rational, nu: &Rational, cfg: &RobmatConfig) -> RobmatVerdict {
    let n = h.order();
    let nn = int(n);
    let deg_bar = (ratio(1, 2) - mu) * nn;
    if let Some(v) = min_degree_vertex(h) {
        if !at_least(h.degree(v), &deg_bar) {
            let w = RobmatWitness::LowDegree {
                vertex: v,
                degree: h.degree(v),
                bar: deg_bar,
            };
            return verdict(RobmatType::One, mu, nu, Some(w), Confidence::Exact);
        }
    }
    let s = floor_nonneg(&((ratio(1, 2) - nu) * nn));
    let edge_bar = nu * nn * nn;
    let (found, confidence) = sparse_search(h, s, &edge_bar, cfg);
    let witness = found.map(|(set, edges)| RobmatWitness::SparseSet {
        set,
        edges,
        bar: edge_bar,
    });
    let confidence = if witness.is_some() {
        Confidence::Exact
    } else {
        confidence
    };
    verdict(RobmatType::One, mu, nu, witness, confidence)
}

fn check_type2(h: &SimpleGraph, mu: &Rational, nu: &Rational, side: &[bool]) -> RobmatVerdict {
    let n = h.order();
    let nn = int(n);
    let a = side.iter().filter(|&&s| s).count();
    let fail = |w| verdict(RobmatType::Two, mu, nu, Some(w), Confidence::Exact);
    if 2 * a != n {
        return fail(RobmatWitness::NotBalanced { left: a, right: n - a });
    }
    if let Some((u, v)) = h.edges().find(|&(u, v)| side[u] == side[v]) {
        return fail(RobmatWitness::EdgeInsideSide { u, v });
    }
    let deg_bar = (ratio(1, 32) - mu) * nn;
    if let Some(v) = min_degree_vertex(h) {
        if !at_least(h.degree(v), &deg_bar) {
            return fail(RobmatWitness::LowDegree {
                vertex: v,
                degree: h.degree(v),
                bar: deg_bar,
            });
        }
    }
    let high_bar = (ratio(1, 3) - mu) * nn;
    let allowed = (ratio(1, 64) + mu) * nn;
    let low: Vec<usize> = (0..n).filter(|&v| !at_least(h.degree(v), &high_bar)).collect();
    if int(low.len()) > allowed {
        return fail(RobmatWitness::ManyLowDegree {
            vertices: low,
            allowed,
            bar: high_bar,
        });
    }
    verdict(RobmatType::Two, mu, nu, None, Confidence::Exact)
}

/// Lower bound on the edges spanned by any `s`-set: the `s` smallest degrees
/// minus the most edges that can leave the set.
fn sparse_lower_bound(h: &SimpleGraph, s: usize) -> i128 {
    let n = h.order();
    let mut deg: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    deg.sort_unstable();
    let inside: i128 = deg[..s].iter().map(|&d| d as i128).sum();
    let leaving_by_outside: i128 = deg[s..].iter().rev().map(|&d| d.min(s) as i128).sum();
    let leaving = leaving_by_outside.min((s * (n - s)) as i128);
    ((inside - leaving) / 2).max(0)
}

/// Looks for an `s`-set spanning fewer than `bar` edges.
fn sparse_search(
    h: &SimpleGraph,
    s: usize,
    bar: &Rational,
    cfg: &RobmatConfig,
) -> (Option<(Vec<usize>, usize)>, Confidence) {
    let n = h.order();
    if s > n {
        return (None, Confidence::Exact);
    }
    if *bar <= Rational::zero() {
        return (None, Confidence::Exact);
    }
    if n <= cfg.exhaustive_cap.min(30) {
        return (exhaustive_sparse(h, s, bar), Confidence::Exact);
    }
    if at_least(sparse_lower_bound(h, s) as usize, bar) {
        return (None, Confidence::Certified);
    }
    let mut rng = rng_from_seed(cfg.seed);
    let restarts = cfg.max_restarts.min(10 * n * n).max(1);
    for attempt in 0..restarts {
        let start = if attempt == 0 {
            greedy_peel(h, s)
        } else {
            let mut all: Vec<usize> = (0..n).collect();
            all.shuffle(&mut rng);
            all.truncate(s);
            all
        };
        let (set, edges) = local_search(h, start, &mut rng);
        if !at_least(edges, bar) {
            return (Some((set, edges)), Confidence::Exact);
        }
    }
    (None, Confidence::Heuristic)
}

fn exhaustive_sparse(h: &SimpleGraph, s: usize, bar: &Rational) -> Option<(Vec<usize>, usize)> {
    let n = h.order();
    let adj: Vec<u32> = (0..n)
        .map(|v| h.neighbours(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    struct Search<'a> {
        adj: &'a [u32],
        n: usize,
        s: usize,
        bar: &'a Rational,
        found: Option<(u32, usize)>,
    }
    impl Search<'_> {
        fn go(&mut self, v: usize, chosen: u32, size: usize, edges: usize) {
            if self.found.is_some() || at_least(edges, self.bar) {
                return;
            }
            if size == self.s {
                self.found = Some((chosen, edges));
                return;
            }
            if self.n - v < self.s - size {
                return;
            }
            let added = (self.adj[v] & chosen).count_ones() as usize;
            self.go(v + 1, chosen | (1 << v), size + 1, edges + added);
            self.go(v + 1, chosen, size, edges);
        }
    }
    let mut search = Search {
        adj: &adj,
        n,
        s,
        bar,
        found: None,
    };
    search.go(0, 0, 0, 0);
    search
        .found
        .map(|(mask, e)| ((0..n).filter(|&v| mask >> v & 1 == 1).collect(), e))
}

/// Removes the vertex of largest internal degree until `s` remain.
fn greedy_peel(h: &SimpleGraph, s: usize) -> Vec<usize> {
    let n = h.order();
    let mut alive = vec![true; n];
    let mut inner: Vec<usize> = (0..n).map(|v| h.degree(v)).collect();
    for _ in s..n {
        let v = (0..n)
            .filter(|&v| alive[v])
            .max_by_key(|&v| (inner[v], std::cmp::Reverse(v)))
            .expect("vertices remain");
        alive[v] = false;
        for u in h.neighbours(v) {
            inner[u] -= 1;
        }
    }
    (0..n).filter(|&v| alive[v]).collect()
}

/// Swap-based descent on the number of spanned edges.
fn local_search(h: &SimpleGraph, start: Vec<usize>, rng: &mut Rng) -> (Vec<usize>, usize) {
    let n = h.order();
    let mut member = vec![false; n];
    start.iter().for_each(|&v| member[v] = true);
    let mut d_in: Vec<i64> = (0..n).map(|v| h.degree_into(v, &member) as i64).collect();
    let mut edges: i64 = start.iter().map(|&v| d_in[v]).sum::<i64>() / 2;
    if start.is_empty() || start.len() == n {
        return (start, edges as usize);
    }
    loop {
        let jitter = rng.gen_range(0..n);
        let pick = |inside: bool, best_high: bool| {
            (0..n)
                .map(|i| (i + jitter) % n)
                .filter(|&v| member[v] == inside)
                .max_by_key(|&v| if best_high { d_in[v] } else { -d_in[v] })
                .expect("both sides nonempty")
        };
        let out_v = pick(true, true);
        let in_v = pick(false, false);
        let gain = d_in[out_v] - d_in[in_v] + i64::from(h.has_edge(out_v, in_v));
        if gain <= 0 {
            break;
        }
        member[out_v] = false;
        for u in h.neighbours(out_v) {
            d_in[u] -= 1;
        }
        member[in_v] = true;
        for u in h.neighbours(in_v) {
            d_in[u] += 1;
        }
        edges -= gain;
    }
    let set: Vec<usize> = (0..n).filter(|&v| member[v]).collect();
    (set, edges as usize)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MonotoneReport {
    pub original: RobmatVerdict,
    pub subgraph: RobmatVerdict,
    /// False only if the original is accepted and the subgraph is not.
    pub implication_holds: bool,
}

/// Re-checks `h_sub` at (mu + eps, nu - eps) after validating that it is a
/// spanning subgraph losing at most `eps n` edges at each vertex.
#[allow(clippy::too_many_arguments)]
pub fn monotone_robustness(
    h: &SimpleGraph,
    h_sub: &SimpleGraph,
    eps: &Rational,
    mu: &Rational,
    nu: &Rational,
    ty: RobmatType,
    bipartition: Option<&[bool]>,
    cfg: &RobmatConfig,
) -> Result<MonotoneReport, MatchingError> {
    let n = h.order();
    if h_sub.order() != n {
        return Err(MatchingError::NotSpanning { got: h_sub.order(), n });
    }
    if let Some((u, v)) = h_sub.edges().find(|&(u, v)| !h.has_edge(u, v)) {
        return Err(MatchingError::ForeignEdge(u, v));
    }
    let allowed = eps * int(n);
    for v in 0..n {
        let lost = h.degree(v) - h_sub.degree(v);
        if int(lost) > allowed {
            return Err(MatchingError::DegreeLoss {
                vertex: v,
                lost,
                allowed: allowed.to_string(),
            });
        }
    }
    let original = check_robmat(h, mu, nu, ty, bipartition, cfg)?;
    let subgraph = check_robmat(h_sub, &(mu + eps), &(nu - eps), ty, bipartition, cfg)?;
    let implication_holds = !original.accepted || subgraph.accepted;
    Ok(MonotoneReport {
        original,
        subgraph,
        implication_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> Rational {
        ratio(1, 2000)
    }

    fn bipartite(n: usize) -> (SimpleGraph, Vec<bool>) {
        let half = n / 2;
        let g = SimpleGraph::from_edges(n, (0..half).flat_map(|u| (half..n).map(move |v| (u, v))));
        let side = (0..n).map(|v| v < half).collect();
        (g, side)
    }

    #[test]
    fn complete_graph_is_type1() {
        for n in [10, 40] {
            let v = check_robmat(
                &SimpleGraph::complete(n),
                &tiny(),
                &tiny(),
                RobmatType::One,
                None,
                &RobmatConfig::default(),
            )
            .unwrap();
            assert!(v.accepted, "n = {n}");
        }
    }

    #[test]
    fn complete_bipartite_fails_type1_with_sparse_side() {
        for n in [12, 60] {
            let (g, _) = bipartite(n);
            let v = check_robmat(&g, &tiny(), &tiny(), RobmatType::One, None, &RobmatConfig::default()).unwrap();
            assert!(!v.accepted);
            let w = v.witness.unwrap();
            assert!(matches!(w, RobmatWitness::SparseSet { edges: 0, .. }), "{w:?}");
            assert!(w.violates(&g, None));
        }
    }

    #[test]
    fn complete_bipartite_is_type2() {
        let (g, side) = bipartite(40);
        let v = check_robmat(
            &g,
            &tiny(),
            &tiny(),
            RobmatType::Two,
            Some(&side),
            &RobmatConfig::default(),
        )
        .unwrap();
        assert!(v.accepted);
    }

    #[test]
    fn type2_needs_bipartition() {
        assert_eq!(
            check_robmat(
                &SimpleGraph::complete(4),
                &tiny(),
                &tiny(),
                RobmatType::Two,
                None,
                &RobmatConfig::default()
            ),
            Err(MatchingError::MissingBipartition)
        );
    }

    #[test]
    fn identity_subgraph_keeps_verdict() {
        let g = SimpleGraph::complete(30);
        let r = monotone_robustness(
            &g,
            &g,
            &ratio(1, 100),
            &tiny(),
            &tiny(),
            RobmatType::One,
            None,
            &RobmatConfig::default(),
        )
        .unwrap();
        assert!(r.original.accepted && r.subgraph.accepted);
    }
}
