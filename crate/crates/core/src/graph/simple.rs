use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::GraphError;

/// Uncoloured simple graph with sorted adjacency lists.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimpleGraph {
    adj: Vec<Vec<u32>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self {
            adj: vec![Vec::new(); n],
        }
    }

    /// Builds a graph from an edge list, silently dropping loops and repeated pairs.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(u < n && v < n, "edge {u}-{v} out of range for n={n}");
            if u == v {
                continue;
            }
            adj[u].push(v as u32);
            adj[v].push(u as u32);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Self { adj }
    }

    /// Strict constructor rejecting loops, duplicates and out-of-range endpoints.
    pub fn try_from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self, GraphError> {
        let edges: Vec<_> = edges.into_iter().collect();
        for &(u, v) in &edges {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
        }
        let g = Self::from_edges(n, edges.iter().copied());
        if g.size() != edges.len() {
            let mut seen = std::collections::HashSet::new();
            for &(u, v) in &edges {
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
                }
            }
        }
        Ok(g)
    }

    pub(crate) fn from_sorted_adjacency(adj: Vec<Vec<u32>>) -> Self {
        Self { adj }
    }

    pub fn complete(n: usize) -> Self {
        let adj = (0..n)
            .map(|v| (0..n as u32).filter(|&u| u as usize != v).collect())
            .collect();
        Self { adj }
    }

    pub fn cycle(n: usize) -> Self {
        Self::from_edges(n, (0..n).map(|i| (i, (i + 1) % n)))
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn neighbours(&self, v: usize) -> impl ExactSizeIterator<Item = usize> + '_ {
        self.adj[v].iter().map(|&u| u as usize)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.adj.len() && self.adj[u].binary_search(&(v as u32)).is_ok()
    }

    /// Edges `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .map(|&v| v as usize)
                .filter(move |&v| v > u)
                .map(move |v| (u, v))
        })
    }

    /// Number of neighbours of `v` inside `mask`.
    pub fn degree_into(&self, v: usize, mask: &[bool]) -> usize {
        self.adj[v].iter().filter(|&&u| mask[u as usize]).count()
    }

    /// Subgraph induced by `vertices`; vertex `i` of the result is `vertices[i]`.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let mut index = vec![u32::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<u32> = self.adj[v]
                    .iter()
                    .map(|&u| index[u as usize])
                    .filter(|&i| i != u32::MAX)
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        SimpleGraph { adj }
    }

    /// Removes the given edges (missing ones are ignored).
    pub fn without_edges(&self, edges: &[(usize, usize)]) -> SimpleGraph {
        let mut adj = self.adj.clone();
        for &(u, v) in edges {
            if let Ok(i) = adj[u].binary_search(&(v as u32)) {
                adj[u].remove(i);
            }
            if let Ok(i) = adj[v].binary_search(&(u as u32)) {
                adj[v].remove(i);
            }
        }
        SimpleGraph { adj }
    }

    /// Connected components, each sorted, ordered by smallest vertex.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.order();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        let mut queue = VecDeque::new();
        for s in 0..n {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            queue.push_back(s);
            let mut comp = Vec::new();
            while let Some(v) = queue.pop_front() {
                comp.push(v);
                for u in self.neighbours(v) {
                    if !seen[u] {
                        seen[u] = true;
                        queue.push_back(u);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Shortest path from `s` to `t` by BFS (both endpoints included).
    pub fn shortest_path(&self, s: usize, t: usize) -> Option<Vec<usize>> {
        let n = self.order();
        let mut parent = vec![usize::MAX; n];
        parent[s] = s;
        let mut queue = VecDeque::from([s]);
        while let Some(v) = queue.pop_front() {
            if v == t {
                break;
            }
            for u in self.neighbours(v) {
                if parent[u] == usize::MAX {
                    parent[u] = v;
                    queue.push_back(u);
                }
            }
        }
        if parent[t] == usize::MAX {
            return None;
        }
        let mut path = vec![t];
        let mut v = t;
        while v != s {
            v = parent[v];
            path.push(v);
        }
        path.reverse();
        Some(path)
    }

    /// Exact girth (length of a shortest cycle), `None` for forests.
    ///
    /// BFS from every root, pruned once the depth can no longer beat the best
    /// cycle found so far.
    pub fn girth(&self) -> Option<usize> {
        let n = self.order();
        let mut best = usize::MAX;
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        for root in 0..n {
            if best == 3 {
                break;
            }
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            'bfs: while let Some(v) = queue.pop_front() {
                let dv = dist[v] as usize;
                // any cycle closed from here has length >= 2*dv + 1
                if 2 * dv + 1 >= best {
                    break;
                }
                for &u in &self.adj[v] {
                    let u = u as usize;
                    if dist[u] == u32::MAX {
                        dist[u] = dv as u32 + 1;
                        parent[u] = v as u32;
                        touched.push(u);
                        queue.push_back(u);
                    } else if parent[v] as usize != u {
                        let len = dv + dist[u] as usize + 1;
                        if len < best {
                            best = len;
                            if best == 3 {
                                break 'bfs;
                            }
                        }
                    }
                }
            }
            for &t in &touched {
                dist[t] = u32::MAX;
                parent[t] = u32::MAX;
            }
            touched.clear();
            queue.clear();
        }
        (best != usize::MAX).then_some(best)
    }

    /// A shortest cycle of length below `limit`, as a vertex sequence, or
    /// `None` if every cycle is at least that long.
    pub fn short_cycle_below(&self, limit: usize) -> Option<Vec<usize>> {
        if limit <= 3 {
            return None;
        }
        let n = self.order();
        let mut dist = vec![u32::MAX; n];
        let mut parent = vec![u32::MAX; n];
        let mut touched = Vec::new();
        let mut queue = VecDeque::new();
        let mut best: Option<Vec<usize>> = None;
        for root in 0..n {
            let bound = best.as_ref().map_or(limit, Vec::len);
            if bound == 3 {
                break;
            }
            dist[root] = 0;
            touched.push(root);
            queue.push_back(root);
            while let Some(v) = queue.pop_front() {
                let dv = dist[v] as usize;
                let bound = best.as_ref().map_or(limit, Vec::len);
                if 2 * dv + 1 >= bound {
                    break;
                }
                for &u in &self.adj[v] {
                    let u = u as usize;
                    if dist[u] == u32::MAX {
                        dist[u] = dv as u32 + 1;
                        parent[u] = v as u32;
                        touched.push(u);
                        queue.push_back(u);
                    } else if parent[v] as usize != u {
                        let len = dv + dist[u] as usize + 1;
                        if len < best.as_ref().map_or(limit, Vec::len) {
                            if let Some(cyc) = cycle_through_root(root, v, u, &parent) {
                                best = Some(cyc);
                            }
                        }
                    }
                }
            }
            for &t in &touched {
                dist[t] = u32::MAX;
                parent[t] = u32::MAX;
            }
            touched.clear();
            queue.clear();
        }
        best
    }
}

/// Closes the BFS branches of `v` and `u` (joined by the edge `vu`) into a
/// cycle, provided the branches meet only at the root.
fn cycle_through_root(root: usize, v: usize, u: usize, parent: &[u32]) -> Option<Vec<usize>> {
    let branch = |mut x: usize| {
        let mut path = vec![x];
        while x != root {
            x = parent[x] as usize;
            path.push(x);
        }
        path
    };
    let a = branch(v);
    let b = branch(u);
    let on_a: std::collections::HashSet<usize> = a.iter().copied().collect();
    if b.iter().filter(|x| on_a.contains(x)).count() != 1 {
        return None;
    }
    // root .. v, then u .. (child of root)
    let mut seq: Vec<usize> = a.into_iter().rev().collect();
    seq.extend(b.into_iter().take_while(|&x| x != root));
    Some(seq)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn girth_of_small_graphs() {
        assert_eq!(SimpleGraph::cycle(7).girth(), Some(7));
        assert_eq!(SimpleGraph::complete(4).girth(), Some(3));
        assert_eq!(SimpleGraph::from_edges(4, [(0, 1), (1, 2), (2, 3)]).girth(), None);
        // Petersen graph
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        let p = SimpleGraph::from_edges(10, outer.chain(spokes).chain(inner));
        assert_eq!(p.girth(), Some(5));
    }

    #[test]
    fn short_cycle_is_a_real_cycle() {
        let g = SimpleGraph::from_edges(6, [(0, 1), (1, 2), (2, 3), (3, 0), (3, 4), (4, 5)]);
        let c = g.short_cycle_below(5).unwrap();
        assert_eq!(c.len(), 4);
        for i in 0..c.len() {
            assert!(g.has_edge(c[i], c[(i + 1) % c.len()]));
        }
        assert!(g.short_cycle_below(4).is_none());
    }

    #[test]
    fn strict_constructor_rejects_bad_input() {
        assert_eq!(SimpleGraph::try_from_edges(3, [(0, 0)]), Err(GraphError::Loop(0)));
        assert_eq!(
            SimpleGraph::try_from_edges(3, [(0, 1), (1, 0)]),
            Err(GraphError::ParallelEdge(0, 1))
        );
    }
}
