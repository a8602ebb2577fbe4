use serde::{Deserialize, Serialize};

use super::flow::FlowNetwork;
use super::robmat::{check_robmat, RobmatConfig, RobmatType, RobmatVerdict};
use super::{EdgeWeighting, MatchingError};
use crate::graph::SimpleGraph;
use crate::rational::{int, ratio, Rational};

#[derive(Debug, Clone, Copy)]
pub struct BMatchingConfig {
    /// Largest admissible number of blow-up vertices.
    pub node_cap: u64,
}

impl Default for BMatchingConfig {
    fn default() -> Self {
        Self { node_cap: 200_000 }
    }
}

/// Joins odd-target vertices in pairs by shortest paths inside their
/// component; returns the path weights and `(b - routed) / 2` per vertex.
fn route_odd_pairs(h: &SimpleGraph, b: &[u64]) -> Result<(EdgeWeighting, Vec<usize>), MatchingError> {
    let n = h.order();
    let mut paths = EdgeWeighting::new(vec![0; n]);
    for comp in h.components() {
        let sum: u64 = comp.iter().map(|&v| b[v]).sum();
        if sum % 2 == 1 {
            return Err(MatchingError::OddComponent { vertex: comp[0], sum });
        }
        let odd: Vec<usize> = comp.iter().copied().filter(|&v| b[v] % 2 == 1).collect();
        for pair in odd.chunks(2) {
            let path = h.shortest_path(pair[0], pair[1]).expect("same component");
            for e in path.windows(2) {
                paths.add(e[0], e[1], 1);
            }
        }
    }
    let routed = paths.weighted_degrees();
    let mut copies = vec![0usize; n];
    for v in 0..n {
        if routed[v] > b[v] {
            return Err(MatchingError::RoutingExceedsTarget {
                vertex: v,
                routed: routed[v],
                target: b[v],
            });
        }
        copies[v] = ((b[v] - routed[v]) / 2) as usize;
    }
    Ok((paths, copies))
}

/// Perfect b-matching by routing odd-parity pairs along shortest paths and
/// taking a perfect 2-matching of the blow-up of the remaining demand.
pub fn perfect_b_matching(
    h: &SimpleGraph,
    b: &[u64],
    bipartition: Option<&[bool]>,
    cfg: &BMatchingConfig,
) -> Result<EdgeWeighting, MatchingError> {
    let n = h.order();
    if b.len() != n {
        return Err(MatchingError::BadTargets { got: b.len(), n });
    }
    if let Some(side) = bipartition {
        if side.len() != n {
            return Err(MatchingError::BadBipartition { got: side.len(), n });
        }
        let left: u64 = (0..n).filter(|&v| side[v]).map(|v| b[v]).sum();
        let right: u64 = (0..n).filter(|&v| !side[v]).map(|v| b[v]).sum();
        if left != right {
            return Err(MatchingError::Unbalanced { left, right });
        }
    }
    let (paths, copies) = route_odd_pairs(h, b)?;
    let nodes: u64 = copies.iter().map(|&c| c as u64).sum();
    if nodes > cfg.node_cap {
        return Err(MatchingError::BlowupTooLarge {
            nodes,
            cap: cfg.node_cap,
        });
    }
    // Copies of one vertex share their neighbourhood, so a perfect matching
    // of the blow-up's double cover is an integer transportation between
    // left and right classes: flow `x -> y'` counts copies of `x` matched
    // to copies of `y`.
    let (source, sink) = (2 * n, 2 * n + 1);
    let mut net = FlowNetwork::new(2 * n + 2);
    let mut arcs = Vec::new();
    for x in 0..n {
        net.add(source, x, copies[x] as u64);
        net.add(n + x, sink, copies[x] as u64);
        for y in h.neighbours(x) {
            arcs.push((x, y, net.add(x, n + y, copies[x].min(copies[y]) as u64)));
        }
    }
    if net.max_flow(source, sink) != nodes {
        // reached left classes not reached on the right form an independent
        // set whose neighbourhood lies in the reached right classes that are
        // not reached on the left
        let reach = net.residual_reach(source);
        let set = (0..n).filter(|&x| reach[x] && !reach[n + x]).map(|x| copies[x]).sum();
        let neighbours = (0..n).filter(|&y| reach[n + y] && !reach[y]).map(|y| copies[y]).sum();
        return Err(MatchingError::BlowupNotMatchable { set, neighbours });
    }
    let mut out = paths;
    out.degree_target = b.to_vec();
    for (x, y, id) in arcs {
        out.add(x, y, net.flow(id));
    }
    debug_assert_eq!(out.violation(h), None);
    Ok(out)
}

/// Hypotheses that guarantee a perfect b-matching, evaluated on concrete inputs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BHypotheses {
    pub robmat: RobmatVerdict,
    /// `gamma <= mu <= nu/4 < 1/4000`.
    pub parameter_chain: bool,
    /// First vertex outside `[(1 - gamma) b_max, b_max]`, if any.
    pub out_of_range: Option<usize>,
    pub components_even: bool,
    pub balanced: bool,
}

impl BHypotheses {
    pub fn all_hold(&self) -> bool {
        self.robmat.accepted
            && self.parameter_chain
            && self.out_of_range.is_none()
            && self.components_even
            && self.balanced
    }
}

#[allow(clippy::too_many_arguments)]
pub fn check_b_hypotheses(
    h: &SimpleGraph,
    b: &[u64],
    mu: &Rational,
    nu: &Rational,
    gamma: &Rational,
    b_max: u64,
    ty: RobmatType,
    bipartition: Option<&[bool]>,
    cfg: &RobmatConfig,
) -> Result<BHypotheses, MatchingError> {
    let n = h.order();
    if b.len() != n {
        return Err(MatchingError::BadTargets { got: b.len(), n });
    }
    let robmat = check_robmat(h, mu, nu, ty, bipartition, cfg)?;
    let parameter_chain = gamma <= mu && *mu <= nu / int(4) && nu / int(4) < ratio(1, 4000);
    let low = (ratio(1, 1) - gamma) * Rational::from_integer(b_max as i128);
    let out_of_range = (0..n).find(|&v| b[v] > b_max || Rational::from_integer(b[v] as i128) < low);
    let components_even = h
        .components()
        .iter()
        .all(|c| c.iter().map(|&v| b[v]).sum::<u64>() % 2 == 0);
    let balanced = match (ty, bipartition) {
        (RobmatType::Two, Some(side)) => {
            let l: u64 = (0..n).filter(|&v| side[v]).map(|v| b[v]).sum();
            let r: u64 = (0..n).filter(|&v| !side[v]).map(|v| b[v]).sum();
            l == r
        }
        _ => true,
    };
    Ok(BHypotheses {
        robmat,
        parameter_chain,
        out_of_range,
        components_even,
        balanced,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::bipartite::{hopcroft_karp, BipartiteAdjacency};
    use crate::rng_from_seed;
    use rand::Rng as _;

    /// Blow-up replacing `x` by `size[x]` copies, with complete bipartite
    /// gadgets on edges. Adjacency is implicit.
    struct Blowup {
        owner: Vec<u32>,
        start: Vec<usize>,
        /// Per host vertex: `(neighbour, cumulative copies before it)`.
        prefix: Vec<Vec<(usize, usize)>>,
        total: Vec<usize>,
    }

    impl Blowup {
        fn new(h: &SimpleGraph, size: &[usize]) -> Self {
            let mut start = Vec::with_capacity(size.len());
            let mut owner = Vec::new();
            for (x, &s) in size.iter().enumerate() {
                start.push(owner.len());
                owner.extend(std::iter::repeat_n(x as u32, s));
            }
            let mut prefix = Vec::with_capacity(size.len());
            let mut total = Vec::with_capacity(size.len());
            for x in 0..size.len() {
                let mut acc = 0;
                let mut list = Vec::new();
                for y in h.neighbours(x) {
                    if size[y] > 0 {
                        list.push((y, acc));
                        acc += size[y];
                    }
                }
                prefix.push(list);
                total.push(acc);
            }
            Self {
                owner,
                start,
                prefix,
                total,
            }
        }
    }

    impl BipartiteAdjacency for Blowup {
        fn left(&self) -> usize {
            self.owner.len()
        }
        fn right(&self) -> usize {
            self.owner.len()
        }
        fn degree(&self, u: usize) -> usize {
            self.total[self.owner[u] as usize]
        }
        fn neighbour(&self, u: usize, k: usize) -> usize {
            let list = &self.prefix[self.owner[u] as usize];
            let i = list.partition_point(|&(_, cum)| cum <= k) - 1;
            let (y, cum) = list[i];
            self.start[y] + (k - cum)
        }
    }

    #[test]
    fn transportation_agrees_with_the_explicit_blow_up() {
        let mut rng = rng_from_seed(17);
        let mut both = [0usize; 2];
        for _ in 0..300 {
            let n = rng.gen_range(2..8);
            let p = rng.gen_range(0.2..0.9);
            let h = SimpleGraph::from_edges(
                n,
                (0..n)
                    .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
                    .filter(|_| rng.gen_bool(p))
                    .collect::<Vec<_>>(),
            );
            let mut b: Vec<u64> = (0..n).map(|_| rng.gen_range(0..7)).collect();
            for comp in h.components() {
                if comp.iter().map(|&v| b[v]).sum::<u64>() % 2 == 1 {
                    b[comp[0]] += 1;
                }
            }
            let Ok((_, copies)) = route_odd_pairs(&h, &b) else {
                continue;
            };
            let blow = Blowup::new(&h, &copies);
            let explicit = hopcroft_karp(&blow).size() == blow.left();
            match perfect_b_matching(&h, &b, None, &BMatchingConfig::default()) {
                Ok(w) => {
                    assert!(explicit, "flow found a matching the blow-up lacks: {b:?}");
                    assert!(w.is_perfect(&h));
                    both[0] += 1;
                }
                Err(MatchingError::BlowupNotMatchable { set, neighbours }) => {
                    assert!(!explicit);
                    assert!(neighbours < set);
                    both[1] += 1;
                }
                Err(e) => panic!("{e}"),
            }
        }
        assert!(both[0] > 0 && both[1] > 0, "{both:?}");
    }

    #[test]
    fn constant_two_on_a_matching_graph() {
        let g = SimpleGraph::from_edges(4, [(0, 1), (2, 3), (1, 2)]);
        let w = perfect_b_matching(&g, &[2, 2, 2, 2], None, &BMatchingConfig::default()).unwrap();
        assert!(w.is_perfect(&g));
    }

    #[test]
    fn zero_targets_give_zero_weights() {
        let g = SimpleGraph::complete(5);
        let w = perfect_b_matching(&g, &[0; 5], None, &BMatchingConfig::default()).unwrap();
        assert!(w.weights.is_empty());
    }

    #[test]
    fn odd_targets_are_routed() {
        let g = SimpleGraph::complete(6);
        let b = [5, 3, 4, 4, 6, 4];
        let w = perfect_b_matching(&g, &b, None, &BMatchingConfig::default()).unwrap();
        assert!(w.is_perfect(&g));
    }

    #[test]
    fn parity_and_balance_errors() {
        let g = SimpleGraph::complete(3);
        assert!(matches!(
            perfect_b_matching(&g, &[1, 2, 2], None, &BMatchingConfig::default()),
            Err(MatchingError::OddComponent { .. })
        ));
        let g = SimpleGraph::complete(2);
        assert!(matches!(
            perfect_b_matching(&g, &[2, 4], Some(&[true, false]), &BMatchingConfig::default()),
            Err(MatchingError::Unbalanced { left: 2, right: 4 })
        ));
    }

    #[test]
    fn blowup_cap_is_enforced() {
        let g = SimpleGraph::complete(2);
        let cfg = BMatchingConfig { node_cap: 3 };
        assert!(matches!(
            perfect_b_matching(&g, &[4, 4], None, &cfg),
            Err(MatchingError::BlowupTooLarge { nodes: 4, cap: 3 })
        ));
    }
}
