//! Cycles of a prescribed even length in dense graphs, and the one-round
//! minimum-degree clean-up.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::CoverError;
use crate::graph::{Colour, ColouredGraph, SimpleGraph};
use crate::rational::{int, ratio, Rational};
use crate::{derive_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy)]
pub struct ExactLengthConfig {
    pub seed: u64,
    pub restarts: usize,
    /// Rotations per restart, as a multiple of the core order.
    pub budget_factor: usize,
    /// Largest order handled by the exhaustive fallback.
    pub exhaustive_cap: usize,
}

impl Default for ExactLengthConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            restarts: 20,
            budget_factor: 20,
            exhaustive_cap: 50,
        }
    }
}

/// Vertices surviving iterated removal of degree below `avg / 2`.
fn dense_core(g: &SimpleGraph) -> Vec<usize> {
    let n = g.order();
    if n == 0 {
        return Vec::new();
    }
    // deg < avg/2  <=>  deg * n < e
    let e = g.size();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut gone = vec![false; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| deg[v] * n < e).collect();
    for &v in &stack {
        gone[v] = true;
    }
    while let Some(v) = stack.pop() {
        for u in g.neighbours(v) {
            deg[u] -= 1;
            if !gone[u] && deg[u] * n < e {
                gone[u] = true;
                stack.push(u);
            }
        }
    }
    (0..n).filter(|&v| !gone[v]).collect()
}

/// Rotation–extension with a chord check at distance `len - 1` from the
/// endpoint after every move.
fn rotation_search(g: &SimpleGraph, len: usize, cfg: &ExactLengthConfig) -> Option<Vec<usize>> {
    let n = g.order();
    if n < len {
        return None;
    }
    let mut pos = vec![usize::MAX; n];
    let budget = cfg.budget_factor * n;
    for attempt in 0..cfg.restarts.max(1) {
        let mut rng: Rng = rng_from_seed(derive_seed(cfg.seed, attempt as u64));
        let start = rng.gen_range(0..n);
        let mut path = vec![start];
        pos.iter_mut().for_each(|p| *p = usize::MAX);
        pos[start] = 0;
        let mut moves = 0;
        while moves < budget {
            let end = *path.last().expect("nonempty");
            if path.len() >= len && g.has_edge(end, path[path.len() - len]) {
                return Some(path[path.len() - len..].to_vec());
            }
            let fresh: Vec<usize> = g.neighbours(end).filter(|&u| pos[u] == usize::MAX).collect();
            if let Some(&u) = fresh.choose(&mut rng) {
                pos[u] = path.len();
                path.push(u);
                continue;
            }
            let pivots: Vec<usize> = g
                .neighbours(end)
                .map(|u| pos[u])
                .filter(|&i| i + 2 < path.len())
                .collect();
            let Some(&i) = pivots.choose(&mut rng) else {
                break;
            };
            path[i + 1..].reverse();
            for (k, &v) in path.iter().enumerate().skip(i + 1) {
                pos[v] = k;
            }
            moves += 1;
        }
    }
    None
}

/// Exhaustive search: the cycle's smallest vertex is the root.
fn exhaustive(g: &SimpleGraph, len: usize) -> Option<Vec<usize>> {
    fn grow(g: &SimpleGraph, len: usize, root: usize, path: &mut Vec<usize>, used: &mut [bool]) -> bool {
        let end = *path.last().expect("nonempty");
        if path.len() == len {
            return g.has_edge(end, root);
        }
        for u in g.neighbours(end) {
            if u > root && !used[u] {
                used[u] = true;
                path.push(u);
                if grow(g, len, root, path, used) {
                    return true;
                }
                path.pop();
                used[u] = false;
            }
        }
        false
    }
    let n = g.order();
    let mut used = vec![false; n];
    for root in 0..n {
        let mut path = vec![root];
        used[root] = true;
        if grow(g, len, root, &mut path, &mut used) {
            return Some(path);
        }
        used[root] = false;
    }
    None
}

/// A cycle of length exactly `len` in colour `colour` (any colour when
/// `None`). `Ok(None)` means the search gave up, not that no such cycle exists.
pub fn exact_length_cycle(
    g: &ColouredGraph,
    colour: Option<Colour>,
    len: usize,
    cfg: &ExactLengthConfig,
) -> Result<Option<Vec<usize>>, CoverError> {
    if len < 4 || len % 2 == 1 {
        return Err(CoverError::BadLength(len));
    }
    let h = match colour {
        Some(c) => g.colour_class(c),
        None => g.underlying(),
    };
    let core = dense_core(&h);
    let sub = h.induced(&core);
    if let Some(cycle) = rotation_search(&sub, len, cfg) {
        return Ok(Some(cycle.into_iter().map(|v| core[v]).collect()));
    }
    if h.order() <= cfg.exhaustive_cap {
        return Ok(exhaustive(&h, len));
    }
    Ok(None)
}

/// `V \ S` where `S` holds the vertices of degree at most `(1 - eps) n`.
pub fn min_degree_subgraph(g: &SimpleGraph, eps: &Rational) -> Result<Vec<usize>, CoverError> {
    let n = g.order();
    let nn = int(n);
    let one = ratio(1, 1);
    let bar = (one - eps * eps) * nn * nn / int(2);
    if int(g.size()) < bar {
        return Err(CoverError::TooSparse { edges: g.size(), bar });
    }
    let low = (one - eps) * nn;
    let (s, keep): (Vec<usize>, Vec<usize>) = (0..n).partition(|&v| int(g.degree(v)) <= low);
    assert!(int(s.len()) <= eps * nn, "|S| = {} exceeds eps n", s.len());
    let mut mask = vec![false; n];
    for &v in &keep {
        mask[v] = true;
    }
    let floor = (one - int(2) * eps) * nn;
    for &v in &keep {
        assert!(int(g.degree_into(v, &mask)) >= floor, "vertex {v} below (1 - 2 eps) n");
    }
    Ok(keep)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn is_cycle(g: &ColouredGraph, c: &[usize], len: usize) -> bool {
        let set: std::collections::HashSet<_> = c.iter().collect();
        c.len() == len && set.len() == len && (0..len).all(|i| g.has_edge(c[i], c[(i + 1) % len]))
    }

    #[test]
    fn six_cycle() {
        let g = ColouredGraph::from_simple(&SimpleGraph::cycle(6), 1, 1);
        let cfg = ExactLengthConfig::default();
        let c = exact_length_cycle(&g, Some(1), 6, &cfg).unwrap().unwrap();
        assert!(is_cycle(&g, &c, 6));
        assert_eq!(exact_length_cycle(&g, Some(1), 4, &cfg).unwrap(), None);
        assert!(exact_length_cycle(&g, None, 5, &cfg).is_err());
    }

    #[test]
    fn wrong_colour_is_not_used() {
        let g = ColouredGraph::from_simple(&SimpleGraph::complete(8), 2, 2);
        assert_eq!(
            exact_length_cycle(&g, Some(1), 4, &ExactLengthConfig::default()).unwrap(),
            None
        );
        let c = exact_length_cycle(&g, Some(2), 8, &ExactLengthConfig::default())
            .unwrap()
            .unwrap();
        assert!(is_cycle(&g, &c, 8));
    }

    #[test]
    fn complete_graph_keeps_everything() {
        let g = SimpleGraph::complete(120);
        assert_eq!(min_degree_subgraph(&g, &ratio(1, 10)).unwrap().len(), 120);
    }

    #[test]
    fn matching_removed_keeps_everything() {
        let n = 200;
        let full = SimpleGraph::complete(n);
        let g = full.without_edges(&(0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect::<Vec<_>>());
        assert_eq!(min_degree_subgraph(&g, &ratio(1, 10)).unwrap().len(), n);
    }

    #[test]
    fn sparse_input_is_rejected() {
        let g = SimpleGraph::cycle(30);
        assert!(matches!(
            min_degree_subgraph(&g, &ratio(1, 10)),
            Err(CoverError::TooSparse { .. })
        ));
    }
}
