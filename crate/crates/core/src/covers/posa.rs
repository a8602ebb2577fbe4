//! Cycle covers of uncoloured graphs with at most `alpha(G)` pieces.

use serde::{Deserialize, Serialize};

use crate::graph::{Colour, CycleFamily, CyclePiece, SimpleGraph};

/// One removal: the closed endpoint, its neighbourhood in the remaining
/// graph at that moment, and whether the removed piece contains all of it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosaStep {
    pub endpoint: usize,
    pub neighbourhood: Vec<usize>,
    pub contained: bool,
}

/// Vertex sequences of the pieces (singletons, edges, cycles in order)
/// together with the removal trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosaCover {
    pub pieces: Vec<Vec<usize>>,
    pub trace: Vec<PosaStep>,
}

impl PosaCover {
    pub fn count(&self) -> usize {
        self.pieces.len()
    }

    pub fn into_family(self, colour: Colour) -> CycleFamily {
        CycleFamily::new(
            self.pieces
                .into_iter()
                .map(|p| CyclePiece::from_sequence(p, colour))
                .collect(),
        )
    }

    pub fn trace_holds(&self) -> bool {
        self.trace.iter().all(|s| s.contained)
    }
}

/// Repeatedly grows a maximal path, closes it at the endpoint's farthest
/// path neighbour and removes the resulting piece.
pub fn posa_cover(g: &SimpleGraph) -> PosaCover {
    let n = g.order();
    let mut removed = vec![false; n];
    let mut pos = vec![usize::MAX; n];
    let mut live_deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut pieces = Vec::new();
    let mut trace = Vec::new();
    let mut left = n;
    while left > 0 {
        let start = (0..n)
            .filter(|&v| !removed[v])
            .min_by_key(|&v| (live_deg[v], v))
            .expect("vertices remain");
        let mut path = vec![start];
        pos[start] = 0;
        loop {
            let end = *path.last().expect("nonempty");
            // prefer the neighbour with fewest live neighbours
            let next = g
                .neighbours(end)
                .filter(|&u| !removed[u] && pos[u] == usize::MAX)
                .min_by_key(|&u| (live_deg[u], u));
            match next {
                Some(u) => {
                    pos[u] = path.len();
                    path.push(u);
                }
                None => break,
            }
        }
        let end = *path.last().expect("nonempty");
        let neighbourhood: Vec<usize> = g.neighbours(end).filter(|&u| !removed[u]).collect();
        let far = neighbourhood.iter().map(|&u| pos[u]).min().unwrap_or(path.len() - 1);
        let piece: Vec<usize> = path[far..].to_vec();
        for &v in &path {
            pos[v] = usize::MAX;
        }
        let contained = neighbourhood.iter().all(|u| piece.contains(u));
        for &v in &piece {
            removed[v] = true;
            for u in g.neighbours(v) {
                live_deg[u] -= 1;
            }
        }
        left -= piece.len();
        trace.push(PosaStep {
            endpoint: end,
            neighbourhood,
            contained,
        });
        pieces.push(piece);
    }
    PosaCover { pieces, trace }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::oracles::independence_number;
    use crate::graph::{validate_family, ColouredGraph};
    use rand::Rng as _;

    fn check(g: &SimpleGraph) -> PosaCover {
        let cover = posa_cover(g);
        assert!(cover.trace_holds());
        let f = cover.clone().into_family(1);
        let cg = ColouredGraph::from_simple(g, 1, 1);
        let verdict = validate_family(&cg, &f, true);
        assert!(verdict.accepted, "{:?}", verdict.violation);
        cover
    }

    #[test]
    fn complete_graph_is_one_cycle() {
        let cover = check(&SimpleGraph::complete(9));
        assert_eq!(cover.count(), 1);
        assert_eq!(cover.pieces[0].len(), 9);
    }

    #[test]
    fn perfect_matching_gives_edges() {
        let g = SimpleGraph::from_edges(10, (0..5).map(|i| (2 * i, 2 * i + 1)));
        let cover = check(&g);
        assert_eq!(cover.count(), 5);
        assert!(cover.pieces.iter().all(|p| p.len() == 2));
    }

    #[test]
    fn empty_graph_gives_singletons() {
        assert_eq!(check(&SimpleGraph::empty(4)).count(), 4);
        assert_eq!(check(&SimpleGraph::empty(0)).count(), 0);
    }

    #[test]
    fn random_graphs_respect_alpha() {
        let mut rng = crate::rng_from_seed(17);
        for _ in 0..200 {
            let n = rng.gen_range(1..=20);
            let p: f64 = rng.gen_range(0.05..0.9);
            let edges: Vec<(usize, usize)> = (0..n)
                .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
                .filter(|_| rng.gen_bool(p))
                .collect();
            let g = SimpleGraph::from_edges(n, edges);
            let alpha = independence_number(&g).unwrap();
            assert!(check(&g).count() <= alpha);
        }
    }
}
