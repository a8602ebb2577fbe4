//! One-sided probe for epsilon-irregular pairs.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use super::RegularityError;
use crate::graph::{Colour, ColouredGraph};
use crate::rational::{ceil_nonneg, int, ratio, Rational};
use crate::rng_from_seed;

/// Subsets `X`, `Y` whose density deviates from the pair density by more than eps.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub x: Vec<usize>,
    pub y: Vec<usize>,
    pub pair_density: Rational,
    pub subset_density: Rational,
}

struct PairBits {
    words: usize,
    /// Row per vertex of `U`: bitset over positions in `W`.
    rows: Vec<Vec<u64>>,
}

impl PairBits {
    fn new(g: &ColouredGraph, c: Option<Colour>, u: &[usize], w: &[usize]) -> Self {
        let mut pos = vec![u32::MAX; g.order()];
        for (k, &v) in w.iter().enumerate() {
            pos[v] = k as u32;
        }
        let words = w.len().div_ceil(64);
        let rows = u
            .iter()
            .map(|&v| {
                let mut row = vec![0u64; words];
                for (x, col) in g.neighbours(v) {
                    let p = pos[x];
                    if p != u32::MAX && c.is_none_or(|c| c == col) {
                        row[p as usize / 64] |= 1 << (p % 64);
                    }
                }
                row
            })
            .collect();
        Self { words, rows }
    }

    fn row_count(&self, i: usize) -> usize {
        self.rows[i].iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Degree of every `W` position into the rows `xs`.
    fn column_degrees(&self, xs: &[usize], wlen: usize) -> Vec<usize> {
        let mut deg = vec![0usize; wlen];
        for &i in xs {
            for (k, &word) in self.rows[i].iter().enumerate() {
                let mut b = word;
                while b != 0 {
                    let t = b.trailing_zeros() as usize;
                    b &= b - 1;
                    deg[k * 64 + t] += 1;
                }
            }
        }
        deg
    }

    fn edges(&self, xs: &[usize], ys: &[usize]) -> usize {
        let mut mask = vec![0u64; self.words];
        for &y in ys {
            mask[y / 64] |= 1 << (y % 64);
        }
        xs.iter()
            .map(|&i| {
                self.rows[i]
                    .iter()
                    .zip(&mask)
                    .map(|(a, b)| (a & b).count_ones() as usize)
                    .sum::<usize>()
            })
            .sum()
    }
}

fn extreme(values: &[usize], k: usize, high: bool) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..values.len()).collect();
    if high {
        idx.sort_by_key(|&i| (std::cmp::Reverse(values[i]), i));
    } else {
        idx.sort_by_key(|&i| (values[i], i));
    }
    idx.truncate(k);
    idx
}

/// Probes the pair `(U, W)` in colour `c` (all colours when `None`) with
/// subsets of sizes `ceil(eps|U|)` and `ceil(eps|W|)`. Returns a witness only
/// when one is found; `None` is not a proof of regularity.
///
/// The first probes take `X` among the highest and lowest `U`-degrees; every
/// probe then tries a random `Y` and the `Y`s of highest and lowest degree
/// into `X`.
pub fn eps_regular_refuter(
    g: &ColouredGraph,
    c: Option<Colour>,
    u: &[usize],
    w: &[usize],
    eps: &Rational,
    samples: usize,
    seed: u64,
) -> Result<Option<Refutation>, RegularityError> {
    let inv = ratio(1, 1) / eps;
    if int(u.len()) < inv || int(w.len()) < inv {
        return Err(RegularityError::PairTooSmall {
            left: u.len(),
            right: w.len(),
        });
    }
    let bits = PairBits::new(g, c, u, w);
    let total: usize = (0..u.len()).map(|i| bits.row_count(i)).sum();
    let pair_density = ratio(total as i128, (u.len() * w.len()) as i128);
    let kx = ceil_nonneg(&(eps * int(u.len()))).max(1);
    let ky = ceil_nonneg(&(eps * int(w.len()))).max(1);
    let mut rng = rng_from_seed(seed);
    let row_deg: Vec<usize> = (0..u.len()).map(|i| bits.row_count(i)).collect();
    for s in 0..samples.max(2) {
        let xs: Vec<usize> = match s {
            0 => extreme(&row_deg, kx, true),
            1 => extreme(&row_deg, kx, false),
            _ => sample(&mut rng, u.len(), kx).into_vec(),
        };
        let col = bits.column_degrees(&xs, w.len());
        let candidates = [
            sample(&mut rng, w.len(), ky).into_vec(),
            extreme(&col, ky, true),
            extreme(&col, ky, false),
        ];
        for ys in candidates {
            let e = bits.edges(&xs, &ys);
            let sub = ratio(e as i128, (xs.len() * ys.len()) as i128);
            let gap = if sub > pair_density {
                sub - pair_density
            } else {
                pair_density - sub
            };
            if gap > *eps {
                return Ok(Some(Refutation {
                    x: xs.iter().map(|&i| u[i]).collect(),
                    y: ys.iter().map(|&k| w[k]).collect(),
                    pair_density,
                    subset_density: sub,
                }));
            }
        }
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: usize, edge: impl Fn(usize, usize) -> bool) -> (ColouredGraph, Vec<usize>, Vec<usize>) {
        let mut edges = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if edge(a, b) {
                    edges.push((a, n + b, 1));
                }
            }
        }
        let g = ColouredGraph::from_edges(2 * n, 1, edges).unwrap();
        (g, (0..n).collect(), (n..2 * n).collect())
    }

    #[test]
    fn complete_pair_is_never_refuted() {
        let (g, u, w) = pair(40, |_, _| true);
        assert!(eps_regular_refuter(&g, Some(1), &u, &w, &ratio(1, 10), 50, 3)
            .unwrap()
            .is_none());
    }

    #[test]
    fn half_split_pair_is_refuted() {
        let n = 40;
        let (g, u, w) = pair(n, |a, b| a < n / 2 && b < n / 2);
        let r = eps_regular_refuter(&g, Some(1), &u, &w, &ratio(1, 4), 10, 1)
            .unwrap()
            .expect("planted irregularity");
        let gap = r.subset_density - r.pair_density;
        assert!(gap > ratio(1, 4) || -gap > ratio(1, 4));
    }

    #[test]
    fn tiny_pairs_are_rejected() {
        let (g, u, w) = pair(3, |_, _| true);
        assert!(eps_regular_refuter(&g, None, &u, &w, &ratio(1, 10), 5, 0).is_err());
    }
}
