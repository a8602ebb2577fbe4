//! Monochromatic cover of the small side of an unbalanced bipartite graph.

use serde::{Deserialize, Serialize};

use super::posa::posa_cover;
use super::CoverError;
use crate::graph::{Colour, ColouredGraph, CycleFamily, CyclePiece, SimpleGraph};
use crate::matching::bipartite::{hopcroft_karp, Csr};
use crate::rational::{int, Rational};

/// `|A| >= k1 |B|`, every `B`-vertex has `|A| / k2` neighbours in `A`, and
/// two vertices are joined in the auxiliary graph when they share
/// `|A| / codegree_divisor` neighbours.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EgpConstants {
    pub k1: Rational,
    pub k2: Rational,
    pub codegree_divisor: Rational,
}

impl EgpConstants {
    pub fn full_scale(r: Colour) -> Self {
        let c = int(100 * r as usize);
        let big = c * c * c;
        Self {
            k1: big,
            k2: int(100),
            codegree_divisor: big,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EgpCover {
    pub family: CycleFamily,
    /// Size of the colour class `B_i` per colour.
    pub class_sizes: Vec<usize>,
    /// Pósa pieces per colour before expansion.
    pub aux_pieces: Vec<usize>,
    /// The `100 r^2` budget.
    pub budget: usize,
}

struct Bits(Vec<u64>);

impl Bits {
    fn and_count(&self, other: &Bits) -> usize {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    fn members(&self) -> Vec<usize> {
        self.and_members(self)
    }

    fn and_members(&self, other: &Bits) -> Vec<usize> {
        let mut out = Vec::new();
        for (k, (a, b)) in self.0.iter().zip(&other.0).enumerate() {
            let mut w = a & b;
            while w != 0 {
                out.push(k * 64 + w.trailing_zeros() as usize);
                w &= w - 1;
            }
        }
        out
    }
}

/// Pieces covering `b`, built from Pósa covers of per-colour codegree graphs
/// whose edges are then routed through distinct common neighbours in `a`.
pub fn egp_cover(h: &ColouredGraph, a: &[usize], b: &[usize], k: &EgpConstants) -> Result<EgpCover, CoverError> {
    let n = h.order();
    let r = h.colours() as usize;
    let mut a_pos = vec![usize::MAX; n];
    for (i, &v) in a.iter().enumerate() {
        a_pos[v] = i;
    }
    if let Some(&v) = b.iter().find(|&&v| a_pos[v] != usize::MAX) {
        return Err(CoverError::Overlap(v));
    }
    let budget = 100 * r * r;
    if b.is_empty() {
        return Ok(EgpCover {
            family: CycleFamily::default(),
            class_sizes: vec![0; r],
            aux_pieces: vec![0; r],
            budget,
        });
    }
    let size_a = int(a.len());
    if size_a < k.k1 * int(b.len()) {
        return Err(CoverError::Unbalanced {
            a: a.len(),
            b: b.len(),
            factor: k.k1,
        });
    }
    let words = a.len().div_ceil(64);
    let need = size_a / k.k2;
    let heavy = need / int(r);
    // colour neighbourhoods N_c(x) as bitsets over positions in A
    let mut classes: Vec<Vec<(usize, Bits)>> = (0..r).map(|_| Vec::new()).collect();
    for &x in b {
        let mut bits: Vec<Bits> = (0..r).map(|_| Bits(vec![0; words])).collect();
        let mut counts = vec![0usize; r];
        let mut total = 0;
        for (y, c) in h.neighbours(x) {
            let p = a_pos[y];
            if p != usize::MAX {
                bits[c as usize - 1].0[p / 64] |= 1 << (p % 64);
                counts[c as usize - 1] += 1;
                total += 1;
            }
        }
        if int(total) < need {
            return Err(CoverError::LowDegree {
                vertex: x,
                found: total,
                needed: need,
            });
        }
        let best = (0..r)
            .max_by_key(|&c| (counts[c], std::cmp::Reverse(c)))
            .expect("r >= 1");
        if int(counts[best]) < heavy {
            return Err(CoverError::NoHeavyColour { vertex: x });
        }
        classes[best].push((x, bits.swap_remove(best)));
    }

    let codegree = size_a / k.codegree_divisor;
    // expansion slots: (x, y, allowed positions in A); y == x for singletons
    let mut slots: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    let mut shapes: Vec<(Colour, usize, Vec<usize>)> = Vec::new();
    let mut aux_pieces = vec![0; r];
    for (c, class) in classes.iter().enumerate() {
        let mut aux_edges = Vec::new();
        for s in 0..class.len() {
            for t in s + 1..class.len() {
                if int(class[s].1.and_count(&class[t].1)) >= codegree {
                    aux_edges.push((s, t));
                }
            }
        }
        let aux = SimpleGraph::from_edges(class.len(), aux_edges);
        let cover = posa_cover(&aux);
        aux_pieces[c] = cover.count();
        for piece in cover.pieces {
            let first_slot = slots.len();
            match piece.len() {
                1 => {
                    let (x, ref nx) = class[piece[0]];
                    slots.push((x, x, nx.members()));
                }
                2 => {
                    let (s, t) = (piece[0], piece[1]);
                    let common = class[s].1.and_members(&class[t].1);
                    for _ in 0..2 {
                        slots.push((class[s].0, class[t].0, common.clone()));
                    }
                }
                len => {
                    for j in 0..len {
                        let (s, t) = (piece[j], piece[(j + 1) % len]);
                        slots.push((class[s].0, class[t].0, class[s].1.and_members(&class[t].1)));
                    }
                }
            }
            let xs = piece.iter().map(|&s| class[s].0).collect();
            shapes.push((c as Colour + 1, first_slot, xs));
        }
    }

    let lists: Vec<Vec<usize>> = slots.iter().map(|s| s.2.clone()).collect();
    let csr = Csr::from_lists(a.len(), &lists);
    let matching = hopcroft_karp(&csr);
    if let Some(i) = matching.left.iter().position(|m| m.is_none()) {
        return Err(CoverError::FreshNeighbours {
            x: slots[i].0,
            y: slots[i].1,
        });
    }
    let w = |i: usize| a[matching.left[i].expect("perfect on slots")];

    let mut pieces = Vec::with_capacity(shapes.len());
    for (colour, slot, xs) in shapes {
        let seq = match xs.len() {
            1 => vec![xs[0], w(slot)],
            2 => vec![xs[0], w(slot), xs[1], w(slot + 1)],
            len => (0..len).flat_map(|j| [xs[j], w(slot + j)]).collect(),
        };
        pieces.push(CyclePiece::from_sequence(seq, colour));
    }
    Ok(EgpCover {
        family: CycleFamily::new(pieces),
        class_sizes: classes.iter().map(Vec::len).collect(),
        aux_pieces,
        budget,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::validate_family;
    use crate::rational::ratio;

    #[test]
    fn empty_b_gives_empty_family() {
        let h = ColouredGraph::empty(5, 2);
        let cover = egp_cover(&h, &[0, 1, 2], &[], &EgpConstants::full_scale(2)).unwrap();
        assert_eq!(cover.family.count(), 0);
    }

    #[test]
    fn single_vertex_becomes_an_edge() {
        let h = ColouredGraph::from_edges(4, 1, [(3, 0, 1), (3, 1, 1)]).unwrap();
        let k = EgpConstants {
            k1: int(1),
            k2: int(100),
            codegree_divisor: int(100),
        };
        let cover = egp_cover(&h, &[0, 1, 2], &[3], &k).unwrap();
        assert_eq!(cover.family.pieces.len(), 1);
        assert!(matches!(cover.family.pieces[0], CyclePiece::Edge { .. }));
        assert!(validate_family(&h, &cover.family, false).accepted);
    }

    #[test]
    fn low_degree_is_reported() {
        let h = ColouredGraph::from_edges(5, 1, [(4, 0, 1)]).unwrap();
        let k = EgpConstants {
            k1: int(1),
            k2: ratio(2, 1),
            codegree_divisor: int(4),
        };
        assert!(matches!(
            egp_cover(&h, &[0, 1, 2, 3], &[4], &k),
            Err(CoverError::LowDegree { vertex: 4, .. })
        ));
    }
}
