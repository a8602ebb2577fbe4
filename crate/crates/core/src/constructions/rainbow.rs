//! Proper colourings of complete graphs and rainbow matchings in them.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::graph::{Colour, ColouredGraph};
use crate::rational::{int, ratio, Rational};
use crate::{derive_seed, rng_from_seed};

const EXACT_CAP: usize = 16;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RainbowMatching {
    pub edges: Vec<(usize, usize)>,
    pub colours: Vec<Colour>,
}

impl RainbowMatching {
    pub fn size(&self) -> usize {
        self.edges.len()
    }

    /// Disjoint edges of `g` with pairwise distinct recorded colours.
    pub fn is_valid(&self, g: &ColouredGraph) -> bool {
        let mut seen_v = std::collections::HashSet::new();
        let mut seen_c = std::collections::HashSet::new();
        self.edges.len() == self.colours.len()
            && self.edges.iter().zip(&self.colours).all(|(&(u, v), &c)| {
                g.colour(u, v) == Some(c) && seen_v.insert(u) && seen_v.insert(v) && seen_c.insert(c)
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RainbowMode {
    /// Branch and bound; a negative answer is a proof. At most 16 vertices.
    Exact,
    /// Randomised greedy plus one-out-two-in swaps.
    Heuristic { seed: u64, restarts: usize },
}

/// Circle-method one-factorisation of `K_k`: `k - 1` colours for even `k`,
/// `k` colours for odd `k`.
pub fn proper_colouring_k(k: usize) -> Result<ColouredGraph, ConstructionError> {
    if k < 2 {
        return Err(ConstructionError::Parameters(format!("K_{k} needs k >= 2")));
    }
    let even = k + k % 2;
    let rounds = even - 1;
    let mut edges = Vec::with_capacity(k * (k - 1) / 2);
    for c in 0..rounds {
        let mut pairs = vec![(even - 1, c)];
        for i in 1..even / 2 {
            pairs.push(((c + i) % rounds, (c + rounds - i) % rounds));
        }
        for (u, v) in pairs {
            if u < k && v < k {
                edges.push((u, v, c as Colour + 1));
            }
        }
    }
    Ok(ColouredGraph::from_edges(k, rounds as Colour, edges)?)
}

pub(crate) fn check_proper(g: &ColouredGraph) -> Result<(), ConstructionError> {
    let mut seen = vec![false; g.colours() as usize + 1];
    for v in 0..g.order() {
        for (_, c) in g.neighbours(v) {
            if std::mem::replace(&mut seen[c as usize], true) {
                return Err(ConstructionError::ImproperColouring { vertex: v, colour: c });
            }
        }
        for (_, c) in g.neighbours(v) {
            seen[c as usize] = false;
        }
    }
    Ok(())
}

/// All rainbow matchings with exactly `size` edges, as sorted edge lists.
pub fn enumerate_rainbow_matchings(
    g: &ColouredGraph,
    size: usize,
    cap: usize,
) -> Result<Vec<RainbowMatching>, ConstructionError> {
    struct Walk<'a> {
        edges: &'a [(usize, usize, Colour)],
        size: usize,
        cap: usize,
        used_v: Vec<bool>,
        used_c: Vec<bool>,
        stack: Vec<usize>,
        out: Vec<RainbowMatching>,
    }
    impl Walk<'_> {
        fn go(&mut self, from: usize) -> Result<(), ConstructionError> {
            if self.stack.len() == self.size {
                if self.out.len() == self.cap {
                    return Err(ConstructionError::EnumerationCap { cap: self.cap });
                }
                self.out.push(RainbowMatching {
                    edges: self.stack.iter().map(|&i| (self.edges[i].0, self.edges[i].1)).collect(),
                    colours: self.stack.iter().map(|&i| self.edges[i].2).collect(),
                });
                return Ok(());
            }
            let need = self.size - self.stack.len();
            for i in from..self.edges.len() {
                if self.edges.len() - i < need {
                    break;
                }
                let (u, v, c) = self.edges[i];
                if self.used_v[u] || self.used_v[v] || self.used_c[c as usize] {
                    continue;
                }
                self.used_v[u] = true;
                self.used_v[v] = true;
                self.used_c[c as usize] = true;
                self.stack.push(i);
                self.go(i + 1)?;
                self.stack.pop();
                self.used_v[u] = false;
                self.used_v[v] = false;
                self.used_c[c as usize] = false;
            }
            Ok(())
        }
    }
    check_proper(g)?;
    let edges: Vec<(usize, usize, Colour)> = g.edges().collect();
    let mut walk = Walk {
        edges: &edges,
        size,
        cap,
        used_v: vec![false; g.order()],
        used_c: vec![false; g.colours() as usize + 1],
        stack: Vec::new(),
        out: Vec::new(),
    };
    walk.go(0)?;
    Ok(walk.out)
}

struct Exact {
    /// Per vertex: (neighbour, dense colour index).
    adj: Vec<Vec<(usize, usize)>>,
    target: usize,
    chosen: Vec<(usize, usize)>,
}

impl Exact {
    fn available(&self, v: usize, used_v: u32, used_c: u128) -> bool {
        self.adj[v]
            .iter()
            .any(|&(u, c)| used_v >> u & 1 == 0 && used_c >> c & 1 == 0)
    }

    fn search(&mut self, used_v: u32, used_c: u128) -> bool {
        if self.chosen.len() >= self.target {
            return true;
        }
        let n = self.adj.len();
        let live: Vec<usize> = (0..n)
            .filter(|&v| used_v >> v & 1 == 0 && self.available(v, used_v, used_c))
            .collect();
        let colours_left = self
            .adj
            .iter()
            .flatten()
            .filter(|&&(_, c)| used_c >> c & 1 == 0)
            .map(|&(_, c)| c)
            .collect::<std::collections::BTreeSet<_>>()
            .len();
        let room = (live.len() / 2).min(colours_left);
        if self.chosen.len() + room < self.target {
            return false;
        }
        let v = live[0];
        for k in 0..self.adj[v].len() {
            let (u, c) = self.adj[v][k];
            if used_v >> u & 1 == 0 && used_c >> c & 1 == 0 {
                self.chosen.push((v, u));
                if self.search(used_v | 1 << v | 1 << u, used_c | 1 << c) {
                    return true;
                }
                self.chosen.pop();
            }
        }
        self.search(used_v | 1 << v, used_c)
    }
}

fn exact(g: &ColouredGraph, target: usize) -> Result<Option<Vec<(usize, usize)>>, ConstructionError> {
    let n = g.order();
    if n > EXACT_CAP {
        return Err(ConstructionError::TooLargeForExact { n, cap: EXACT_CAP });
    }
    let mut dense = std::collections::HashMap::new();
    for (_, _, c) in g.edges() {
        let next = dense.len();
        dense.entry(c).or_insert(next);
    }
    let adj = (0..n)
        .map(|v| g.neighbours(v).map(|(u, c)| (u, dense[&c])).collect())
        .collect();
    let mut search = Exact {
        adj,
        target,
        chosen: Vec::new(),
    };
    Ok(search.search(0, 0).then_some(search.chosen))
}

fn heuristic(g: &ColouredGraph, target: usize, seed: u64, restarts: usize) -> Option<Vec<(usize, usize)>> {
    let n = g.order();
    let r = g.colours() as usize;
    let all: Vec<(usize, usize, Colour)> = g.edges().collect();
    let mut best: Vec<(usize, usize)> = Vec::new();
    for attempt in 0..restarts.max(1) {
        let mut rng = rng_from_seed(derive_seed(seed, attempt as u64));
        let mut order = all.clone();
        order.shuffle(&mut rng);
        let mut used_v = vec![false; n];
        let mut used_c = vec![false; r + 1];
        let mut m: Vec<(usize, usize, Colour)> = Vec::new();
        for &(u, v, c) in &order {
            if !used_v[u] && !used_v[v] && !used_c[c as usize] {
                used_v[u] = true;
                used_v[v] = true;
                used_c[c as usize] = true;
                m.push((u, v, c));
            }
        }
        // remove one edge, insert two
        let mut improved = true;
        while improved && m.len() < target {
            improved = false;
            for k in 0..m.len() {
                let (a, b, c) = m[k];
                used_v[a] = false;
                used_v[b] = false;
                used_c[c as usize] = false;
                let mut found = None;
                'outer: for &(x, y, c1) in order.iter().filter(|e| e.0 == a || e.1 == a || e.0 == b || e.1 == b) {
                    if used_v[x] || used_v[y] || used_c[c1 as usize] {
                        continue;
                    }
                    for &(p, q, c2) in &order {
                        if !used_v[p]
                            && !used_v[q]
                            && !used_c[c2 as usize]
                            && c2 != c1
                            && p != x
                            && p != y
                            && q != x
                            && q != y
                        {
                            found = Some([(x, y, c1), (p, q, c2)]);
                            break 'outer;
                        }
                    }
                }
                match found {
                    Some(pair) => {
                        m.swap_remove(k);
                        for (x, y, c) in pair {
                            used_v[x] = true;
                            used_v[y] = true;
                            used_c[c as usize] = true;
                            m.push((x, y, c));
                        }
                        improved = true;
                        break;
                    }
                    None => {
                        used_v[a] = true;
                        used_v[b] = true;
                        used_c[c as usize] = true;
                    }
                }
            }
        }
        if m.len() > best.len() {
            best = m.iter().map(|&(u, v, _)| (u, v)).collect();
        }
        if best.len() >= target {
            return Some(best);
        }
    }
    None
}

fn with_colours(g: &ColouredGraph, edges: Vec<(usize, usize)>) -> RainbowMatching {
    let colours = edges.iter().map(|&(u, v)| g.colour(u, v).expect("edge of g")).collect();
    RainbowMatching { edges, colours }
}

/// A rainbow matching with at least `target` edges, or `None`.
pub fn rainbow_matching(
    g: &ColouredGraph,
    target: usize,
    mode: RainbowMode,
) -> Result<Option<RainbowMatching>, ConstructionError> {
    check_proper(g)?;
    let found = match mode {
        RainbowMode::Exact => exact(g, target)?,
        RainbowMode::Heuristic { seed, restarts } => heuristic(g, target, seed, restarts),
    };
    Ok(found.map(|edges| with_colours(g, edges)))
}

/// Deletes `deleted` from `k`, drops vertices of degree at most
/// `(1 - eps) r` and looks for a rainbow matching of size `target` in what
/// is left; if that fails the whole surviving graph is searched.
pub fn rainbow_survives_deletion(
    k: &ColouredGraph,
    deleted: &[(usize, usize)],
    target: usize,
    eps: &Rational,
    mode: RainbowMode,
) -> Result<Option<RainbowMatching>, ConstructionError> {
    let r = k.order();
    if int(deleted.len()) > eps * eps * int(r * r) / int(4) {
        return Err(ConstructionError::TooManyDeletions { deleted: deleted.len() });
    }
    let gone: std::collections::HashSet<(usize, usize)> = deleted.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let h = ColouredGraph::from_edges(r, k.colours(), k.edges().filter(|&(u, v, _)| !gone.contains(&(u, v))))?;
    let low = (ratio(1, 1) - eps) * int(r);
    let keep: Vec<usize> = (0..r).filter(|&v| int(h.degree(v)) > low).collect();
    if keep.len() < r {
        let sub = h.induced(&keep);
        if let Some(m) = rainbow_matching(&sub.graph, target, mode)? {
            let edges = m.edges.iter().map(|&(u, v)| (sub.host[u], sub.host[v])).collect();
            return Ok(Some(with_colours(&h, edges)));
        }
    }
    rainbow_matching(&h, target, mode)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_factorisations() {
        let k2 = proper_colouring_k(2).unwrap();
        assert_eq!(k2.edges().collect::<Vec<_>>(), vec![(0, 1, 1)]);
        let k4 = proper_colouring_k(4).unwrap();
        assert_eq!(k4.colours(), 3);
        assert_eq!(k4.size(), 6);
        for c in 1..=3 {
            assert_eq!(k4.colour_class(c).size(), 2);
        }
        for k in 2..12 {
            let g = proper_colouring_k(k).unwrap();
            assert_eq!(g.size(), k * (k - 1) / 2);
            check_proper(&g).unwrap();
        }
    }

    #[test]
    fn k4_perfect_matchings_are_monochromatic() {
        // the colour classes are exactly the three perfect matchings of K_4
        let g = proper_colouring_k(4).unwrap();
        let m = rainbow_matching(&g, 1, RainbowMode::Exact).unwrap().unwrap();
        assert!(m.is_valid(&g));
        assert_eq!(rainbow_matching(&g, 2, RainbowMode::Exact).unwrap(), None);
        assert!(enumerate_rainbow_matchings(&g, 2, 100).unwrap().is_empty());
    }

    #[test]
    fn improper_colouring_is_rejected() {
        let g = ColouredGraph::from_edges(3, 1, [(0, 1, 1), (1, 2, 1)]).unwrap();
        assert!(matches!(
            rainbow_matching(&g, 1, RainbowMode::Exact),
            Err(ConstructionError::ImproperColouring { vertex: 1, colour: 1 })
        ));
    }

    #[test]
    fn exact_agrees_with_enumeration() {
        let g = proper_colouring_k(10).unwrap();
        for size in 1..=5 {
            let listed = !enumerate_rainbow_matchings(&g, size, 1_000_000).unwrap().is_empty();
            let found = rainbow_matching(&g, size, RainbowMode::Exact).unwrap();
            assert_eq!(listed, found.is_some(), "size {size}");
        }
    }

    #[test]
    fn heuristic_finds_large_matchings() {
        let g = proper_colouring_k(20).unwrap();
        let m = rainbow_matching(&g, 8, RainbowMode::Heuristic { seed: 1, restarts: 20 })
            .unwrap()
            .unwrap();
        assert!(m.is_valid(&g) && m.size() >= 8);
    }

    #[test]
    fn one_deletion_from_k8() {
        let g = proper_colouring_k(8).unwrap();
        let m = rainbow_survives_deletion(&g, &[(0, 1)], 1, &ratio(1, 4), RainbowMode::Exact)
            .unwrap()
            .unwrap();
        assert!(m.is_valid(&g) && !m.edges.contains(&(0, 1)));
    }
}
