//! Paths of prescribed even order inside a dense pair.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::{colour_degree_into, mask_of, RegularityError};
use crate::graph::{Colour, ColouredGraph};
use crate::rational::{int, ratio, Rational};
use crate::{derive_seed, rng_from_seed, Rng};

#[derive(Debug, Clone, Copy)]
pub struct PairPathConfig {
    pub seed: u64,
    /// Rotations allowed per attempt, as a multiple of the pair order.
    pub budget_factor: usize,
    pub restarts: usize,
}

impl Default for PairPathConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            budget_factor: 50,
            restarts: 20,
        }
    }
}

/// The hypotheses of the pair-path statement on concrete input.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathHypotheses {
    /// `|U_i| >= n/6` for both sides.
    pub large_sets: bool,
    /// `U_i` holds at least `2 eps n` neighbours of the opposite endpoint.
    pub endpoint_neighbours: bool,
    /// `2 <= k <= (1 - 24 eps) min |U_i|`.
    pub basic_range: bool,
    /// `k <= min |U_i + v_i|` together with `delta(G[U_1, U_2]) >= 5 eps n`.
    pub extended_range: bool,
}

impl PathHypotheses {
    pub fn hold(&self) -> bool {
        self.large_sets && self.endpoint_neighbours && (self.basic_range || self.extended_range)
    }
}

/// Evaluates the hypotheses for a pair whose sides have `n` vertices each.
#[allow(clippy::too_many_arguments)]
pub fn path_hypotheses(
    g: &ColouredGraph,
    colour: Option<Colour>,
    n: usize,
    v1: usize,
    v2: usize,
    u1: &[usize],
    u2: &[usize],
    k: usize,
    eps: &Rational,
) -> PathHypotheses {
    let nn = int(n);
    let m1 = mask_of(g.order(), u1);
    let m2 = mask_of(g.order(), u2);
    let large_sets = int(6 * u1.len()) >= nn && int(6 * u2.len()) >= nn;
    let need = int(2) * eps * nn;
    let endpoint_neighbours =
        int(colour_degree_into(g, v2, colour, &m1)) >= need && int(colour_degree_into(g, v1, colour, &m2)) >= need;
    let small = u1.len().min(u2.len());
    let basic_range = k >= 2 && int(k) <= (ratio(1, 1) - int(24) * eps) * int(small);
    let with_ends = (u1.len() + usize::from(!u1.contains(&v1))).min(u2.len() + usize::from(!u2.contains(&v2)));
    let five = int(5) * eps * nn;
    let min_deg_ok = u1.iter().all(|&v| int(colour_degree_into(g, v, colour, &m2)) >= five)
        && u2.iter().all(|&v| int(colour_degree_into(g, v, colour, &m1)) >= five);
    let extended_range = k >= 2 && k <= with_ends && min_deg_ok;
    PathHypotheses {
        large_sets,
        endpoint_neighbours,
        basic_range,
        extended_range,
    }
}

struct Search<'a> {
    g: &'a ColouredGraph,
    colour: Option<Colour>,
    left: Vec<bool>,
    right: Vec<bool>,
    on_path: Vec<bool>,
    pos: Vec<usize>,
    path: Vec<usize>,
}

impl Search<'_> {
    fn allowed(&self, from: usize, to: usize, col: Colour) -> bool {
        self.colour.is_none_or(|c| c == col) && if self.left[from] { self.right[to] } else { self.left[to] }
    }

    fn push(&mut self, v: usize) {
        self.on_path[v] = true;
        self.pos[v] = self.path.len();
        self.path.push(v);
    }

    fn reset(&mut self, start: usize) {
        for &v in &self.path {
            self.on_path[v] = false;
        }
        self.path.clear();
        self.push(start);
    }

    fn extension(&self, rng: &mut Rng) -> Option<usize> {
        let end = *self.path.last().expect("nonempty");
        let options: Vec<usize> = self
            .g
            .neighbours(end)
            .filter(|&(u, col)| !self.on_path[u] && self.allowed(end, u, col))
            .map(|(u, _)| u)
            .collect();
        (!options.is_empty()).then(|| options[rng.gen_range(0..options.len())])
    }

    /// Pósa rotation at a random path neighbour of the endpoint.
    fn rotate(&mut self, rng: &mut Rng) -> bool {
        let len = self.path.len();
        if len < 3 {
            return false;
        }
        let end = self.path[len - 1];
        let pivots: Vec<usize> = self
            .g
            .neighbours(end)
            .filter(|&(u, col)| self.on_path[u] && self.allowed(end, u, col))
            .map(|(u, _)| self.pos[u])
            .filter(|&i| i + 2 < len)
            .collect();
        if pivots.is_empty() {
            return false;
        }
        let i = pivots[rng.gen_range(0..pivots.len())];
        self.path[i + 1..].reverse();
        for k in i + 1..len {
            self.pos[self.path[k]] = k;
        }
        true
    }
}

/// A `v1`-`v2` path of order exactly `2k` alternating between the sides,
/// with its interior in `U_1 \cup U_2`. Built by rotation and extension from
/// `v1` until order `2k - 1`, then rotated until the endpoint sees `v2`.
#[allow(clippy::too_many_arguments)]
pub fn path_in_pair(
    g: &ColouredGraph,
    colour: Option<Colour>,
    v1: usize,
    v2: usize,
    u1: &[usize],
    u2: &[usize],
    k: usize,
    cfg: &PairPathConfig,
) -> Result<Vec<usize>, RegularityError> {
    let n = g.order();
    if v1 == v2 || k == 0 {
        return Err(RegularityError::Invalid("endpoints must differ and k >= 1".into()));
    }
    let mut left = mask_of(n, u1);
    left[v1] = true;
    left[v2] = false;
    let mut right = mask_of(n, u2);
    right[v1] = false;
    right[v2] = false;
    if (0..n).any(|v| left[v] && right[v]) || u1.contains(&v2) || u2.contains(&v1) {
        return Err(RegularityError::Invalid("the two sides overlap".into()));
    }
    let joins_v2 = |v: usize| g.colour(v, v2).is_some_and(|c| colour.is_none_or(|x| x == c));
    if k == 1 {
        return if joins_v2(v1) {
            Ok(vec![v1, v2])
        } else {
            Err(RegularityError::Exhausted("endpoints are not adjacent".into()))
        };
    }
    let target = 2 * k - 1;
    let left_count = left.iter().filter(|&&b| b).count();
    let right_count = right.iter().filter(|&&b| b).count();
    if left_count < k || right_count < k - 1 {
        return Err(RegularityError::Exhausted(format!(
            "order {} exceeds the available vertices",
            2 * k
        )));
    }
    let budget = cfg.budget_factor * (left_count + right_count + 1);
    let mut search = Search {
        g,
        colour,
        left,
        right,
        on_path: vec![false; n],
        pos: vec![0; n],
        path: Vec::with_capacity(target + 1),
    };
    for attempt in 0..cfg.restarts.max(1) {
        let mut rng = rng_from_seed(derive_seed(cfg.seed, attempt as u64));
        search.reset(v1);
        let mut rotations = 0;
        while rotations <= budget {
            if search.path.len() == target {
                if joins_v2(*search.path.last().expect("nonempty")) {
                    let mut path = search.path.clone();
                    path.push(v2);
                    return Ok(path);
                }
            } else if let Some(u) = search.extension(&mut rng) {
                search.push(u);
                continue;
            }
            if !search.rotate(&mut rng) {
                break;
            }
            rotations += 1;
        }
    }
    Err(RegularityError::Exhausted(format!(
        "no path of order {} after {} restarts",
        2 * k,
        cfg.restarts
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn complete_pair(n: usize) -> ColouredGraph {
        ColouredGraph::from_edges(2 * n, 1, (0..n).flat_map(|a| (n..2 * n).map(move |b| (a, b, 1)))).unwrap()
    }

    fn check(g: &ColouredGraph, p: &[usize], v1: usize, v2: usize, k: usize, n: usize) {
        assert_eq!(p.len(), 2 * k);
        assert_eq!((p[0], p[p.len() - 1]), (v1, v2));
        let mut seen = std::collections::HashSet::new();
        for (i, &v) in p.iter().enumerate() {
            assert!(seen.insert(v));
            assert_eq!(v < n, i % 2 == 0);
        }
        assert!(p.windows(2).all(|w| g.has_edge(w[0], w[1])));
    }

    #[test]
    fn complete_pair_all_orders() {
        let n = 12;
        let g = complete_pair(n);
        let u1: Vec<usize> = (1..n).collect();
        let u2: Vec<usize> = (n..2 * n - 1).collect();
        for k in 2..=n {
            let p = path_in_pair(&g, Some(1), 0, 2 * n - 1, &u1, &u2, k, &PairPathConfig::default()).unwrap();
            check(&g, &p, 0, 2 * n - 1, k, n);
        }
    }

    #[test]
    fn order_four_uses_one_middle_edge() {
        let n = 6;
        let g = complete_pair(n);
        let u1: Vec<usize> = (1..n).collect();
        let u2: Vec<usize> = (n + 1..2 * n).collect();
        let p = path_in_pair(&g, None, 0, n, &u1, &u2, 2, &PairPathConfig::default()).unwrap();
        check(&g, &p, 0, n, 2, n);
    }

    #[test]
    fn too_long_is_reported() {
        let n = 5;
        let g = complete_pair(n);
        let u1: Vec<usize> = (1..n).collect();
        let u2: Vec<usize> = (n + 1..2 * n).collect();
        assert!(path_in_pair(&g, None, 0, n, &u1, &u2, n + 1, &PairPathConfig::default()).is_err());
    }
}
