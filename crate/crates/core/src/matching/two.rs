use serde::{Deserialize, Serialize};

use super::bipartite::{hopcroft_karp, BipartiteAdjacency, Csr};
use super::EdgeWeighting;
use crate::graph::SimpleGraph;

/// Outcome of the perfect 2-matching decision.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum TwoMatching {
    Found {
        weighting: EdgeWeighting,
    },
    /// An independent set whose neighbourhood is strictly smaller.
    Obstruction {
        set: Vec<usize>,
        neighbourhood: Vec<usize>,
    },
}

impl TwoMatching {
    pub fn is_found(&self) -> bool {
        matches!(self, TwoMatching::Found { .. })
    }
}

/// Double cover of `g`: left copy `u` is joined to right copy `v` for every edge `uv`.
pub(crate) fn double_cover(g: &SimpleGraph) -> Csr {
    let lists: Vec<Vec<usize>> = (0..g.order()).map(|v| g.neighbours(v).collect()).collect();
    Csr::from_lists(g.order(), &lists)
}

/// Turns a perfect matching `sigma` of a double cover into the 2-matching
/// `w(uv) = [sigma(u) = v] + [sigma(v) = u]`.
pub(crate) fn weighting_from_permutation(sigma: &[usize]) -> EdgeWeighting {
    let mut w = EdgeWeighting::new(vec![2; sigma.len()]);
    for (u, &v) in sigma.iter().enumerate() {
        w.add(u, v, 1);
    }
    w
}

/// Decides whether `g` has a perfect 2-matching. On failure the returned set
/// `S` is independent with `|N(S)| < |S|`.
pub fn has_perfect_2matching(g: &SimpleGraph) -> TwoMatching {
    let cover = double_cover(g);
    let m = hopcroft_karp(&cover);
    if m.size() == g.order() {
        let sigma: Vec<usize> = m.left.iter().map(|p| p.expect("perfect")).collect();
        return TwoMatching::Found {
            weighting: weighting_from_permutation(&sigma),
        };
    }
    let (set, neighbourhood) = obstruction(&cover, &m);
    TwoMatching::Obstruction { set, neighbourhood }
}

/// With `T` the alternating-reachable left copies and `U` the reachable right
/// copies, `S = T \ U` is independent and `N(S)` lies in `U \ T`, which is
/// smaller than `S`.
pub(crate) fn obstruction<A: BipartiteAdjacency>(g: &A, m: &super::bipartite::Matching) -> (Vec<usize>, Vec<usize>) {
    let (t, u) = m.alternating_reach(g);
    let set: Vec<usize> = (0..g.left()).filter(|&v| t[v] && !u[v]).collect();
    let mut nbr = vec![false; g.right()];
    for &s in &set {
        for k in 0..g.degree(s) {
            nbr[g.neighbour(s, k)] = true;
        }
    }
    let neighbourhood = (0..g.right()).filter(|&v| nbr[v]).collect();
    (set, neighbourhood)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_gets_weight_two() {
        match has_perfect_2matching(&SimpleGraph::complete(2)) {
            TwoMatching::Found { weighting } => assert_eq!(weighting.get(0, 1), 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn star_is_obstructed_by_its_leaves() {
        let star = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        match has_perfect_2matching(&star) {
            TwoMatching::Obstruction { set, neighbourhood } => {
                assert_eq!(set, vec![1, 2, 3]);
                assert_eq!(neighbourhood, vec![0]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn odd_cycle_is_covered_with_unit_weights() {
        let c = SimpleGraph::cycle(5);
        match has_perfect_2matching(&c) {
            TwoMatching::Found { weighting } => {
                assert!(weighting.is_perfect(&c));
                assert!(weighting.weights.values().all(|&w| w == 1));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn empty_graph_trivially_matches() {
        assert!(has_perfect_2matching(&SimpleGraph::empty(0)).is_found());
        assert!(!has_perfect_2matching(&SimpleGraph::empty(1)).is_found());
    }
}
