//! Monochromatic connecting paths routed through the reduced graph.

use std::collections::{HashMap, VecDeque};

use rand::seq::SliceRandom;

use super::{mask_of, typical_in, ClusterPartition, ReducedGraph, RegularityError};
use crate::graph::{Colour, ColouredGraph};
use crate::{derive_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy)]
pub struct ConnectConfig {
    pub seed: u64,
    /// Independent greedy attempts before giving up.
    pub attempts: usize,
}

impl Default for ConnectConfig {
    fn default() -> Self {
        Self { seed: 0, attempts: 20 }
    }
}

/// Shortest colour-`c` walk between clusters in the reduced graph.
fn route(rg: &ReducedGraph, c: Colour, from: usize, to: usize) -> Option<Vec<usize>> {
    let mut adj = vec![Vec::new(); rg.m];
    for e in rg.edges.iter().filter(|e| e.colour == c) {
        adj[e.i].push(e.j);
        adj[e.j].push(e.i);
    }
    let mut parent = vec![usize::MAX; rg.m];
    parent[from] = from;
    let mut queue = VecDeque::from([from]);
    while let Some(x) = queue.pop_front() {
        for &y in &adj[x] {
            if parent[y] == usize::MAX {
                parent[y] = x;
                queue.push_back(y);
            }
        }
    }
    if parent[to] == usize::MAX {
        return None;
    }
    let mut walk = vec![to];
    let mut x = to;
    while x != from {
        x = parent[x];
        walk.push(x);
    }
    walk.reverse();
    Some(walk)
}

struct Ctx<'a> {
    g: &'a ColouredGraph,
    cp: &'a ClusterPartition,
    c: Colour,
    typical: HashMap<(usize, usize), Vec<bool>>,
}

impl Ctx<'_> {
    fn typical_mask(&mut self, a: usize, b: usize) -> &Vec<bool> {
        let (g, cp, c) = (self.g, self.cp, self.c);
        self.typical.entry((a, b)).or_insert_with(|| {
            let t = typical_in(g, c, &cp.clusters[a], &cp.clusters[b], &cp.eps);
            mask_of(g.order(), &t)
        })
    }

    fn neighbours_in(&self, v: usize, cluster: usize, blocked: &[bool]) -> Vec<usize> {
        let member = &self.cp.clusters[cluster];
        let mask = mask_of(self.g.order(), member);
        self.g
            .neighbours(v)
            .filter(|&(u, col)| col == self.c && mask[u] && !blocked[u])
            .map(|(u, _)| u)
            .collect()
    }

    /// Vertices `a` in cluster `ca` next to `prev` and `b` in cluster `cb`
    /// next to `last` with `ab` a colour-`c` edge.
    fn complete_pair(
        &self,
        prev: usize,
        ca: usize,
        cb: usize,
        last: usize,
        blocked: &[bool],
        rng: &mut Rng,
    ) -> Option<(usize, usize)> {
        let mut a_side = self.neighbours_in(prev, ca, blocked);
        let b_mask = mask_of(self.g.order(), &self.neighbours_in(last, cb, blocked));
        a_side.shuffle(rng);
        for a in a_side {
            if let Some((b, _)) = self
                .g
                .neighbours(a)
                .find(|&(b, col)| col == self.c && b_mask[b] && b != a)
            {
                return Some((a, b));
            }
        }
        None
    }
}

/// A colour-`c` path from `v` (typical in the pair `from.1`) to `w` (typical
/// in the pair `to.1`) of order at most `2m`, avoiding `forbidden`.
#[allow(clippy::too_many_arguments)]
pub fn connecting_path(
    g: &ColouredGraph,
    cp: &ClusterPartition,
    rg: &ReducedGraph,
    c: Colour,
    from: (usize, (usize, usize)),
    to: (usize, (usize, usize)),
    forbidden: &[usize],
    cfg: &ConnectConfig,
) -> Result<Vec<usize>, RegularityError> {
    let (v, (i, j)) = from;
    let (w, (i2, j2)) = to;
    for (a, b) in [(i, j), (i2, j2)] {
        match rg.edge(a, b) {
            Some(e) if e.colour == c => {}
            _ => return Err(RegularityError::MissingReducedEdge { i: a, j: b, colour: c }),
        }
    }
    let member = cp.membership();
    if member[v] != Some(i) || member[w] != Some(j2) || v == w {
        return Err(RegularityError::Invalid(
            "endpoints must be distinct and lie in the outer clusters of the two pairs".into(),
        ));
    }
    let middle = route(rg, c, j, i2).ok_or(RegularityError::NoRoute {
        from: j,
        to: i2,
        colour: c,
    })?;
    let m = cp.m();
    let mut seq = vec![i];
    seq.extend(middle);
    seq.push(j2);
    while seq.len() < 5 && seq.len() + 2 <= 2 * m {
        seq.splice(2..2, [i, j]);
    }
    let ell = seq.len();
    let mut ctx = Ctx {
        g,
        cp,
        c,
        typical: HashMap::new(),
    };
    let base_blocked = {
        let mut b = mask_of(g.order(), forbidden);
        b[v] = true;
        b[w] = true;
        b
    };
    for attempt in 0..cfg.attempts.max(1) {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, attempt as u64));
        let mut blocked = base_blocked.clone();
        let mut path = vec![v];
        let mut ok = true;
        // greedy typical picks up to position ell - 3 (0-based ell - 4)
        for s in 1..ell.saturating_sub(3) {
            let prev = *path.last().expect("nonempty");
            let next_cluster = seq[s + 1];
            let mut options = ctx.neighbours_in(prev, seq[s], &blocked);
            options.shuffle(&mut rng);
            let typical = ctx.typical_mask(seq[s], next_cluster).clone();
            match options.into_iter().find(|&u| typical[u]) {
                Some(u) => {
                    blocked[u] = true;
                    path.push(u);
                }
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if !ok {
            continue;
        }
        let prev = *path.last().expect("nonempty");
        match ell {
            3 => {
                let wn = mask_of(g.order(), &ctx.neighbours_in(w, seq[1], &blocked));
                let mut options = ctx.neighbours_in(prev, seq[1], &blocked);
                options.shuffle(&mut rng);
                match options.into_iter().find(|&x| wn[x]) {
                    Some(x) => path.push(x),
                    None => continue,
                }
            }
            _ => match ctx.complete_pair(prev, seq[ell - 3], seq[ell - 2], w, &blocked, &mut rng) {
                Some((a, b)) => {
                    path.push(a);
                    path.push(b);
                }
                None => continue,
            },
        }
        path.push(w);
        debug_assert!(path.len() <= 2 * m);
        return Ok(path);
    }
    Err(RegularityError::Exhausted(format!(
        "no colour-{c} connecting path after {} attempts",
        cfg.attempts
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::regularity::{build_reduced, RegularityMode};

    /// Clusters of size `s` arranged on a path of reduced edges, each pair complete in colour 1.
    fn chain(m: usize, s: usize) -> (ColouredGraph, ClusterPartition) {
        let mut edges = Vec::new();
        for i in 0..m - 1 {
            for a in 0..s {
                for b in 0..s {
                    edges.push((i * s + a, (i + 1) * s + b, 1));
                }
            }
        }
        let g = ColouredGraph::from_edges(m * s, 2, edges).unwrap();
        let clusters = (0..m).map(|i| (i * s..(i + 1) * s).collect()).collect();
        let cp = ClusterPartition::new(m * s, vec![], clusters, ratio(1, 20), ratio(1, 10)).unwrap();
        (g, cp)
    }

    fn valid(g: &ColouredGraph, p: &[usize], avoid: &[usize]) {
        assert!(p.windows(2).all(|e| g.colour(e[0], e[1]) == Some(1)));
        let set: std::collections::HashSet<_> = p.iter().collect();
        assert_eq!(set.len(), p.len());
        assert!(p.iter().all(|v| !avoid.contains(v)));
    }

    #[test]
    fn same_edge_is_padded() {
        let (g, cp) = chain(3, 10);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        let p = connecting_path(
            &g,
            &cp,
            &rg,
            1,
            (0, (0, 1)),
            (15, (0, 1)),
            &[],
            &ConnectConfig::default(),
        )
        .unwrap();
        valid(&g, &p, &[]);
        assert!(p.len() >= 5 && p.len() <= 6);
    }

    #[test]
    fn two_clusters_use_short_routes() {
        let (g, cp) = chain(2, 10);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        let p = connecting_path(
            &g,
            &cp,
            &rg,
            1,
            (0, (0, 1)),
            (15, (0, 1)),
            &[],
            &ConnectConfig::default(),
        )
        .unwrap();
        valid(&g, &p, &[]);
        assert!(p.len() <= 4);
    }

    #[test]
    fn long_route_avoids_forbidden() {
        let (g, cp) = chain(6, 12);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        let avoid: Vec<usize> = (0..72).filter(|v| v % 12 == 1).collect();
        let p = connecting_path(
            &g,
            &cp,
            &rg,
            1,
            (0, (0, 1)),
            (70, (4, 5)),
            &avoid,
            &ConnectConfig::default(),
        )
        .unwrap();
        valid(&g, &p, &avoid);
        assert!(p.len() <= 12);
    }

    #[test]
    fn missing_edge_is_an_error() {
        let (g, cp) = chain(3, 10);
        let rg = build_reduced(&g, &cp, RegularityMode::Trusted, None).unwrap().graph;
        assert!(matches!(
            connecting_path(
                &g,
                &cp,
                &rg,
                1,
                (0, (0, 2)),
                (25, (1, 2)),
                &[],
                &ConnectConfig::default()
            ),
            Err(RegularityError::MissingReducedEdge { .. })
        ));
    }
}
