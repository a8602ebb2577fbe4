//! Small graphs, one per isomorphism class.

use std::collections::BTreeMap;

use super::{GraphError, SimpleGraph};

const MAX_CLASSES_N: usize = 8;

fn masks(g: &SimpleGraph) -> Vec<u16> {
    (0..g.order())
        .map(|v| g.neighbours(v).fold(0u16, |m, u| m | (1 << u)))
        .collect()
}

fn from_masks(adj: &[u16]) -> SimpleGraph {
    let n = adj.len();
    SimpleGraph::from_edges(
        n,
        (0..n).flat_map(|u| (u + 1..n).filter(move |&v| adj[u] >> v & 1 == 1).map(move |v| (u, v))),
    )
}

/// Smallest upper-triangle code over all vertex orders that list vertices
/// by a refined degree invariant.
fn canonical_code(adj: &[u16]) -> u64 {
    let n = adj.len();
    let deg: Vec<u32> = adj.iter().map(|m| m.count_ones()).collect();
    let invariant: Vec<(u32, Vec<u32>)> = (0..n)
        .map(|v| {
            let mut nd: Vec<u32> = (0..n).filter(|&u| adj[v] >> u & 1 == 1).map(|u| deg[u]).collect();
            nd.sort_unstable();
            (deg[v], nd)
        })
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| invariant[a].cmp(&invariant[b]));
    // cell[p]: the invariant class expected at position p
    let mut cell = vec![0usize; n];
    for p in 1..n {
        cell[p] = cell[p - 1] + usize::from(invariant[order[p]] != invariant[order[p - 1]]);
    }
    let class_of: Vec<usize> = {
        let mut c = vec![0; n];
        for p in 0..n {
            c[order[p]] = cell[p];
        }
        c
    };
    let mut best = u64::MAX;
    let mut perm = Vec::with_capacity(n);
    search(adj, &cell, &class_of, &mut perm, 0, 0, &mut best);
    best
}

fn search(
    adj: &[u16],
    cell: &[usize],
    class_of: &[usize],
    perm: &mut Vec<usize>,
    used: u16,
    code: u64,
    best: &mut u64,
) {
    let p = perm.len();
    if p == adj.len() {
        *best = (*best).min(code);
        return;
    }
    for v in 0..adj.len() {
        if used >> v & 1 == 1 || class_of[v] != cell[p] {
            continue;
        }
        // earlier positions fill higher bits, so the integer order is the
        // lexicographic order of the filled prefix
        let total = adj.len() * (adj.len() - 1) / 2;
        let mut c = code;
        for (q, &u) in perm.iter().enumerate() {
            if adj[v] >> u & 1 == 1 {
                c |= 1 << (total - 1 - (p * (p - 1) / 2 + q));
            }
        }
        let shift = total - (p + 1) * p / 2;
        if shift < 64 && c >> shift > *best >> shift {
            continue;
        }
        perm.push(v);
        search(adj, cell, class_of, perm, used | 1 << v, c, best);
        perm.pop();
    }
}

/// Every graph obtained from a graph in `reps` by adding one vertex with an
/// arbitrary neighbourhood. If `reps` meets every isomorphism class on `n`
/// vertices, the result meets every class on `n + 1`.
pub fn one_vertex_extensions(reps: &[SimpleGraph]) -> impl Iterator<Item = SimpleGraph> + '_ {
    reps.iter().flat_map(|g| {
        let base = masks(g);
        let n = base.len();
        (0u16..1 << n).map(move |nb| {
            let mut adj = base.clone();
            for (u, m) in adj.iter_mut().enumerate() {
                if nb >> u & 1 == 1 {
                    *m |= 1 << n;
                }
            }
            adj.push(nb);
            from_masks(&adj)
        })
    })
}

/// One graph per isomorphism class on `n <= 8` vertices, ordered by
/// canonical code.
pub fn nonisomorphic_graphs(n: usize) -> Result<Vec<SimpleGraph>, GraphError> {
    if n > MAX_CLASSES_N {
        return Err(GraphError::CapExceeded {
            what: "isomorphism class enumeration",
            size: n,
            cap: MAX_CLASSES_N,
        });
    }
    let mut reps = vec![SimpleGraph::empty(0)];
    for _ in 0..n {
        let mut next = BTreeMap::new();
        for g in one_vertex_extensions(&reps) {
            next.entry(canonical_code(&masks(&g))).or_insert(g);
        }
        reps = next.into_values().collect();
    }
    Ok(reps)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn class_counts_match_the_known_sequence() {
        let known = [1, 1, 2, 4, 11, 34, 156, 1044, 12346];
        for (n, &count) in known.iter().enumerate() {
            assert_eq!(nonisomorphic_graphs(n).unwrap().len(), count, "n = {n}");
        }
    }

    #[test]
    fn relabelling_keeps_the_code() {
        let g = SimpleGraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]);
        let adj = masks(&g);
        let perm = [4, 2, 5, 0, 1, 3];
        let mut moved = vec![0u16; 6];
        for u in 0..6 {
            for v in 0..6 {
                if adj[u] >> v & 1 == 1 {
                    moved[perm[u]] |= 1 << perm[v];
                }
            }
        }
        assert_eq!(canonical_code(&adj), canonical_code(&moved));
    }
}
