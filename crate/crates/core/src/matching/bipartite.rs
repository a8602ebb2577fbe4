//! Hopcroft–Karp maximum matching over an abstract bipartite adjacency.

use std::collections::VecDeque;

/// Left vertices `0..left()`, right vertices `0..right()`, and random access
/// to the `k`-th neighbour of a left vertex.
pub trait BipartiteAdjacency {
    fn left(&self) -> usize;
    fn right(&self) -> usize;
    fn degree(&self, u: usize) -> usize;
    fn neighbour(&self, u: usize, k: usize) -> usize;
}

/// Compressed adjacency lists.
#[derive(Debug, Clone)]
pub struct Csr {
    right: usize,
    offsets: Vec<usize>,
    targets: Vec<u32>,
}

impl Csr {
    pub fn from_lists(right: usize, lists: &[Vec<usize>]) -> Self {
        let mut offsets = Vec::with_capacity(lists.len() + 1);
        let mut targets = Vec::new();
        offsets.push(0);
        for list in lists {
            targets.extend(list.iter().map(|&v| v as u32));
            offsets.push(targets.len());
        }
        Self {
            right,
            offsets,
            targets,
        }
    }
}

impl BipartiteAdjacency for Csr {
    fn left(&self) -> usize {
        self.offsets.len() - 1
    }
    fn right(&self) -> usize {
        self.right
    }
    fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }
    fn neighbour(&self, u: usize, k: usize) -> usize {
        self.targets[self.offsets[u] + k] as usize
    }
}

const FREE: usize = usize::MAX;

#[derive(Debug, Clone)]
pub struct Matching {
    /// Partner of each left vertex, or `None`.
    pub left: Vec<Option<usize>>,
    /// Partner of each right vertex, or `None`.
    pub right: Vec<Option<usize>>,
}

impl Matching {
    pub fn size(&self) -> usize {
        self.left.iter().filter(|m| m.is_some()).count()
    }

    /// Vertices reachable by alternating paths from unmatched left vertices:
    /// `(left_reached, right_reached)`. With a maximum matching this is the
    /// König construction.
    pub fn alternating_reach<A: BipartiteAdjacency>(&self, g: &A) -> (Vec<bool>, Vec<bool>) {
        let mut lseen = vec![false; g.left()];
        let mut rseen = vec![false; g.right()];
        let mut queue: VecDeque<usize> = VecDeque::new();
        for u in (0..g.left()).filter(|&u| self.left[u].is_none()) {
            lseen[u] = true;
            queue.push_back(u);
        }
        while let Some(u) = queue.pop_front() {
            for k in 0..g.degree(u) {
                let v = g.neighbour(u, k);
                if rseen[v] {
                    continue;
                }
                rseen[v] = true;
                if let Some(w) = self.right[v] {
                    if !lseen[w] {
                        lseen[w] = true;
                        queue.push_back(w);
                    }
                }
            }
        }
        (lseen, rseen)
    }
}

/// Maximum matching by Hopcroft–Karp (iterative DFS, so deep augmenting
/// paths do not exhaust the stack).
pub fn hopcroft_karp<A: BipartiteAdjacency>(g: &A) -> Matching {
    let (nl, nr) = (g.left(), g.right());
    let mut ml = vec![FREE; nl];
    let mut mr = vec![FREE; nr];
    let mut dist = vec![u32::MAX; nl];
    let mut it = vec![0usize; nl];
    let mut queue = VecDeque::new();
    // cheap greedy start
    for (u, slot) in ml.iter_mut().enumerate() {
        for k in 0..g.degree(u) {
            let v = g.neighbour(u, k);
            if mr[v] == FREE {
                *slot = v;
                mr[v] = u;
                break;
            }
        }
    }
    loop {
        queue.clear();
        for u in 0..nl {
            if ml[u] == FREE {
                dist[u] = 0;
                queue.push_back(u);
            } else {
                dist[u] = u32::MAX;
            }
        }
        let mut found = false;
        while let Some(u) = queue.pop_front() {
            for k in 0..g.degree(u) {
                let v = g.neighbour(u, k);
                let w = mr[v];
                if w == FREE {
                    found = true;
                } else if dist[w] == u32::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        if !found {
            break;
        }
        it.iter_mut().for_each(|x| *x = 0);
        let mut stack: Vec<usize> = Vec::new();
        for root in 0..nl {
            if ml[root] != FREE {
                continue;
            }
            stack.clear();
            stack.push(root);
            while let Some(&u) = stack.last() {
                let mut advanced = false;
                while it[u] < g.degree(u) {
                    let v = g.neighbour(u, it[u]);
                    it[u] += 1;
                    let w = mr[v];
                    if w == FREE {
                        // augment along the stack
                        let mut v = v;
                        while let Some(x) = stack.pop() {
                            let prev = ml[x];
                            ml[x] = v;
                            mr[v] = x;
                            v = prev;
                        }
                        advanced = true;
                        break;
                    }
                    if dist[w] == dist[u] + 1 {
                        stack.push(w);
                        advanced = true;
                        break;
                    }
                }
                if !advanced {
                    dist[u] = u32::MAX;
                    stack.pop();
                }
            }
        }
    }
    Matching {
        left: ml.into_iter().map(|v| (v != FREE).then_some(v)).collect(),
        right: mr.into_iter().map(|u| (u != FREE).then_some(u)).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn brute_max(lists: &[Vec<usize>], right: usize) -> usize {
        fn go(u: usize, lists: &[Vec<usize>], used: &mut Vec<bool>) -> usize {
            if u == lists.len() {
                return 0;
            }
            let mut best = go(u + 1, lists, used);
            for &v in &lists[u] {
                if !used[v] {
                    used[v] = true;
                    best = best.max(1 + go(u + 1, lists, used));
                    used[v] = false;
                }
            }
            best
        }
        go(0, lists, &mut vec![false; right])
    }

    #[test]
    fn matches_brute_force_on_small_graphs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..300 {
            let nl = rng.gen_range(0..7);
            let nr = rng.gen_range(1..7);
            let lists: Vec<Vec<usize>> = (0..nl)
                .map(|_| (0..nr).filter(|_| rng.gen_bool(0.35)).collect())
                .collect();
            let m = hopcroft_karp(&Csr::from_lists(nr, &lists));
            assert_eq!(m.size(), brute_max(&lists, nr));
            for (u, v) in m.left.iter().enumerate() {
                if let Some(v) = v {
                    assert!(lists[u].contains(v));
                    assert_eq!(m.right[*v], Some(u));
                }
            }
        }
    }
}
