//! Two-coloured graphs just above half minimum degree that need many cycles.
//!
//! Vertices `0..a_size` form the independent side `A`, the rest form `B`.
//! All `A`-`B` pairs are red (colour 1) and stay implicit; `G[B]` is a blue
//! (colour 2) graph of large minimum degree and no short cycles.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::ConstructionError;
use crate::graph::{Colour, ColouredGraph, CycleFamily, CyclePiece, SimpleGraph};
use crate::{derive_seed, rng_from_seed, Rng};

pub const RED: Colour = 1;
pub const BLUE: Colour = 2;

#[derive(Debug, Clone, Copy)]
pub struct DegreeConfig {
    pub min_n: usize,
    /// Resamples allowed after the first attempt.
    pub retries: usize,
}

impl Default for DegreeConfig {
    fn default() -> Self {
        Self {
            min_n: 1 << 14,
            retries: 5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DegreeCertificate {
    pub a_size: usize,
    pub b_size: usize,
    pub min_degree: usize,
    /// `n/2 + ln n / (16 ln ln n)`.
    pub degree_bar: f64,
    pub degree_ok: bool,
    pub blue_min_degree: usize,
    /// `ln |B|`.
    pub blue_degree_bar: f64,
    pub blue_degree_ok: bool,
    /// Exact girth of the blue graph, `None` for a forest.
    pub girth: Option<usize>,
    /// `ln |B| / (4 ln ln |B|)`.
    pub girth_bar: f64,
    pub girth_ok: bool,
    pub removed_cycles: usize,
    pub resamples: usize,
}

impl DegreeCertificate {
    pub fn holds(&self) -> bool {
        self.degree_ok && self.blue_degree_ok && self.girth_ok
    }
}

#[derive(Debug, Clone)]
pub struct DegreeLowerBound {
    pub n: usize,
    pub a_size: usize,
    /// Blue graph on `B`, local ids `0..b_size` (global id `a_size + i`).
    pub blue: SimpleGraph,
    pub certificate: DegreeCertificate,
}

impl DegreeLowerBound {
    pub fn b_size(&self) -> usize {
        self.n - self.a_size
    }

    pub fn colour(&self, u: usize, v: usize) -> Option<Colour> {
        let a = self.a_size;
        match (u < a, v < a) {
            (true, true) => None,
            (true, false) | (false, true) => Some(RED),
            (false, false) => self.blue.has_edge(u - a, v - a).then_some(BLUE),
        }
    }

    /// Materialises the graph; `|A| |B|` red edges.
    pub fn to_coloured(&self) -> ColouredGraph {
        let a = self.a_size;
        let red = (0..a).flat_map(|x| (a..self.n).map(move |y| (x, y, RED)));
        let blue = self.blue.edges().map(|(u, v)| (u + a, v + a, BLUE));
        ColouredGraph::from_edges(self.n, 2, red.chain(blue)).expect("valid construction")
    }

    /// Every red proper piece (edge or cycle) meets `A` and `B` equally.
    pub fn red_pieces_balanced(&self, f: &CycleFamily) -> bool {
        f.pieces.iter().all(|p| match p {
            CyclePiece::Edge { colour, .. } | CyclePiece::Cycle { colour, .. } if *colour == RED => {
                let vs = p.vertices();
                let in_a = vs.iter().filter(|&&v| v < self.a_size).count();
                2 * in_a == vs.len()
            }
            _ => true,
        })
    }
}

fn ln_ratio(x: f64, div: f64) -> f64 {
    x.ln() / (div * x.ln().ln())
}

/// `G(n, p)` by geometric skipping over the pairs.
fn gnp(n: usize, p: f64, rng: &mut Rng) -> SimpleGraph {
    let mut edges = Vec::new();
    if p >= 1.0 {
        return SimpleGraph::complete(n);
    }
    let log_q = (1.0 - p).ln();
    let (mut v, mut w) = (1usize, -1i64);
    while v < n {
        let u: f64 = rng.gen();
        w += 1 + ((1.0 - u).ln() / log_q).floor() as i64;
        while w >= v as i64 && v < n {
            w -= v as i64;
            v += 1;
        }
        if v < n {
            edges.push((w as usize, v));
        }
    }
    SimpleGraph::from_edges(n, edges)
}

/// Removes a maximal family of edge-disjoint cycles shorter than `k`,
/// shortest first.
fn strip_short_cycles(mut g: SimpleGraph, k: f64) -> (SimpleGraph, usize) {
    let limit = k.ceil() as usize;
    let mut removed = 0;
    while let Some(cycle) = g.short_cycle_below(limit) {
        let len = cycle.len();
        let edges: Vec<(usize, usize)> = (0..len).map(|i| (cycle[i], cycle[(i + 1) % len])).collect();
        g = g.without_edges(&edges);
        removed += 1;
    }
    (g, removed)
}

fn certify(n: usize, a_size: usize, blue: &SimpleGraph, removed: usize, resamples: usize) -> DegreeCertificate {
    let b_size = n - a_size;
    let nf = n as f64;
    let bf = b_size as f64;
    let blue_min_degree = blue.min_degree();
    let min_degree = if a_size == 0 {
        blue_min_degree
    } else {
        b_size.min(a_size + blue_min_degree)
    };
    let degree_bar = nf / 2.0 + ln_ratio(nf, 16.0);
    let girth = blue.girth();
    let girth_bar = ln_ratio(bf, 4.0);
    DegreeCertificate {
        a_size,
        b_size,
        min_degree,
        degree_bar,
        degree_ok: min_degree as f64 >= degree_bar,
        blue_min_degree,
        blue_degree_bar: bf.ln(),
        blue_degree_ok: blue_min_degree as f64 >= bf.ln(),
        girth,
        girth_bar,
        girth_ok: girth.is_none_or(|g| g as f64 >= girth_bar),
        removed_cycles: removed,
        resamples,
    }
}

/// `|B| = n/2 + ceil(ln n / (16 ln ln n))`.
fn b_size_for(n: usize) -> usize {
    n / 2 + ln_ratio(n as f64, 16.0).ceil() as usize
}

pub fn build_degree_lower_bound(
    n: usize,
    seed: u64,
    cfg: &DegreeConfig,
) -> Result<DegreeLowerBound, ConstructionError> {
    if n < cfg.min_n || n < 16 {
        return Err(ConstructionError::Parameters(format!(
            "n = {n} is below the minimum {}",
            cfg.min_n
        )));
    }
    let b_size = b_size_for(n);
    let a_size = n - b_size;
    let bf = b_size as f64;
    let p = 8.0 * bf.ln() / bf;
    let k = ln_ratio(bf, 4.0);
    for attempt in 0..=cfg.retries {
        let mut rng = rng_from_seed(derive_seed(seed, attempt as u64));
        let (blue, removed) = strip_short_cycles(gnp(b_size, p, &mut rng), k);
        let certificate = certify(n, a_size, &blue, removed, attempt);
        if certificate.holds() {
            return Ok(DegreeLowerBound {
                n,
                a_size,
                blue,
                certificate,
            });
        }
    }
    Err(ConstructionError::RetriesExhausted(cfg.retries + 1))
}

/// The `n = 12` variant with a hand-planted blue graph of girth 5 on `B`.
pub fn degree_miniature() -> DegreeLowerBound {
    let n = 12;
    let b_size = b_size_for(n);
    let a_size = n - b_size;
    let blue = SimpleGraph::from_edges(b_size, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0), (0, 5), (5, 6), (6, 2)]);
    let certificate = certify(n, a_size, &blue, 0, 0);
    DegreeLowerBound {
        n,
        a_size,
        blue,
        certificate,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::oracles::{exact_min_cycle_partition, PartitionCaps};

    #[test]
    fn gnp_has_roughly_the_right_size() {
        let mut rng = rng_from_seed(3);
        let g = gnp(2000, 0.01, &mut rng);
        let expected = 0.01 * 2000.0 * 1999.0 / 2.0;
        assert!((g.size() as f64 - expected).abs() < 0.1 * expected);
    }

    #[test]
    fn stripping_leaves_no_short_cycles() {
        let mut rng = rng_from_seed(9);
        let (g, removed) = strip_short_cycles(gnp(200, 0.05, &mut rng), 6.0);
        assert!(removed > 0);
        assert!(g.girth().is_none_or(|l| l >= 6));
    }

    #[test]
    fn miniature_needs_two_cycles() {
        let mini = degree_miniature();
        assert_eq!((mini.a_size, mini.b_size()), (5, 7));
        assert_eq!(mini.certificate.girth, Some(5));
        assert!(mini.certificate.degree_ok);
        let g = mini.to_coloured();
        let (count, family) = exact_min_cycle_partition(&g, PartitionCaps::default()).unwrap();
        assert!(count >= 2);
        assert!(mini.red_pieces_balanced(&family));
    }

    #[test]
    fn implicit_colours_match_materialised() {
        let mini = degree_miniature();
        let g = mini.to_coloured();
        for u in 0..12 {
            for v in 0..12 {
                if u != v {
                    assert_eq!(mini.colour(u, v), g.colour(u, v));
                }
            }
        }
    }
}
