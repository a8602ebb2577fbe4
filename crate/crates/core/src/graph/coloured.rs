use serde::{Deserialize, Serialize};

use super::{Colour, GraphError, SimpleGraph};

/// Simple graph with exactly one colour in `1..=r` on every edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColouredGraph {
    r: Colour,
    adj: Vec<Vec<(u32, Colour)>>,
}

/// An induced subgraph together with the map back to host ids.
#[derive(Debug, Clone)]
pub struct Subgraph {
    pub graph: ColouredGraph,
    /// `host[i]` is the host vertex playing the role of vertex `i`.
    pub host: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct Wire {
    n: usize,
    r: Colour,
    edges: Vec<(usize, usize, Colour)>,
}

impl ColouredGraph {
    pub fn empty(n: usize, r: Colour) -> Self {
        Self {
            r,
            adj: vec![Vec::new(); n],
        }
    }

    /// Strict constructor: loops, repeated pairs (in any colour) and
    /// out-of-range values are errors.
    pub fn from_edges(
        n: usize,
        r: Colour,
        edges: impl IntoIterator<Item = (usize, usize, Colour)>,
    ) -> Result<Self, GraphError> {
        Self::build(n, r, edges, true)
    }

    /// Generator constructor: when a pair is listed twice the first colour is kept.
    pub fn from_edges_keep_first(
        n: usize,
        r: Colour,
        edges: impl IntoIterator<Item = (usize, usize, Colour)>,
    ) -> Result<Self, GraphError> {
        Self::build(n, r, edges, false)
    }

    fn build(
        n: usize,
        r: Colour,
        edges: impl IntoIterator<Item = (usize, usize, Colour)>,
        strict: bool,
    ) -> Result<Self, GraphError> {
        let mut adj: Vec<Vec<(u32, Colour)>> = vec![Vec::new(); n];
        // sequence number keeps "first wins" stable through the sort
        let mut seq: Vec<Vec<u64>> = vec![Vec::new(); n];
        for (i, (u, v, c)) in edges.into_iter().enumerate() {
            for w in [u, v] {
                if w >= n {
                    return Err(GraphError::VertexOutOfRange { vertex: w, n });
                }
            }
            if u == v {
                return Err(GraphError::Loop(u));
            }
            if c == 0 || c > r {
                return Err(GraphError::ColourOutOfRange { colour: c, r });
            }
            adj[u].push((v as u32, c));
            seq[u].push(i as u64);
            adj[v].push((u as u32, c));
            seq[v].push(i as u64);
        }
        for (v, (list, s)) in adj.iter_mut().zip(seq).enumerate() {
            let mut tagged: Vec<(u32, u64, Colour)> = list.iter().zip(s).map(|(&(u, c), i)| (u, i, c)).collect();
            tagged.sort_unstable();
            let before = tagged.len();
            tagged.dedup_by_key(|t| t.0);
            if strict && tagged.len() != before {
                let mut prev = None;
                let mut all: Vec<u32> = list.iter().map(|e| e.0).collect();
                all.sort_unstable();
                for u in all {
                    if prev == Some(u) {
                        let u = u as usize;
                        return Err(GraphError::ParallelEdge(u.min(v), u.max(v)));
                    }
                    prev = Some(u);
                }
            }
            *list = tagged.into_iter().map(|(u, _, c)| (u, c)).collect();
        }
        Ok(Self { r, adj })
    }

    /// Every pair coloured `c`.
    pub fn complete(n: usize, r: Colour, c: Colour) -> Self {
        let adj = (0..n)
            .map(|v| (0..n as u32).filter(|&u| u as usize != v).map(|u| (u, c)).collect())
            .collect();
        Self { r, adj }
    }

    /// Colours an uncoloured graph with a single colour.
    pub fn from_simple(g: &SimpleGraph, r: Colour, c: Colour) -> Self {
        let adj = (0..g.order())
            .map(|v| g.neighbours(v).map(|u| (u as u32, c)).collect())
            .collect();
        Self { r, adj }
    }

    pub fn order(&self) -> usize {
        self.adj.len()
    }

    pub fn colours(&self) -> Colour {
        self.r
    }

    pub fn size(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn colour_degree(&self, v: usize, c: Colour) -> usize {
        self.adj[v].iter().filter(|e| e.1 == c).count()
    }

    pub fn min_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).min().unwrap_or(0)
    }

    pub fn colour(&self, u: usize, v: usize) -> Option<Colour> {
        let list = self.adj.get(u)?;
        list.binary_search_by_key(&(v as u32), |e| e.0).ok().map(|i| list[i].1)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.colour(u, v).is_some()
    }

    /// `(neighbour, colour)` pairs in increasing neighbour order.
    pub fn neighbours(&self, v: usize) -> impl ExactSizeIterator<Item = (usize, Colour)> + '_ {
        self.adj[v].iter().map(|&(u, c)| (u as usize, c))
    }

    /// Edges `(u, v, c)` with `u < v` in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Colour)> + '_ {
        self.adj.iter().enumerate().flat_map(|(u, list)| {
            list.iter()
                .filter(move |e| e.0 as usize > u)
                .map(move |&(v, c)| (u, v as usize, c))
        })
    }

    pub fn colour_class(&self, c: Colour) -> SimpleGraph {
        SimpleGraph::from_sorted_adjacency(
            self.adj
                .iter()
                .map(|list| list.iter().filter(|e| e.1 == c).map(|e| e.0).collect())
                .collect(),
        )
    }

    pub fn underlying(&self) -> SimpleGraph {
        SimpleGraph::from_sorted_adjacency(self.adj.iter().map(|list| list.iter().map(|e| e.0).collect()).collect())
    }

    /// Subgraph induced by `vertices` (in the given order).
    pub fn induced(&self, vertices: &[usize]) -> Subgraph {
        let mut index = vec![u32::MAX; self.order()];
        for (i, &v) in vertices.iter().enumerate() {
            index[v] = i as u32;
        }
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<(u32, Colour)> = self.adj[v]
                    .iter()
                    .filter(|e| index[e.0 as usize] != u32::MAX)
                    .map(|&(u, c)| (index[u as usize], c))
                    .collect();
                list.sort_unstable();
                list
            })
            .collect();
        Subgraph {
            graph: Self { r: self.r, adj },
            host: vertices.to_vec(),
        }
    }

    /// Applies a vertex relabelling `perm` (old id -> new id) and a colour
    /// relabelling `colour_perm` (indexed by colour - 1).
    pub fn relabel(&self, perm: &[usize], colour_perm: &[Colour]) -> Self {
        let mut adj = vec![Vec::new(); self.order()];
        for (v, list) in self.adj.iter().enumerate() {
            adj[perm[v]] = list
                .iter()
                .map(|&(u, c)| (perm[u as usize] as u32, colour_perm[c as usize - 1]))
                .collect();
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        Self { r: self.r, adj }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&Wire {
            n: self.order(),
            r: self.r,
            edges: self.edges().collect(),
        })
        .expect("graph serialises")
    }

    pub fn from_json(s: &str) -> Result<Self, GraphError> {
        let w: Wire = serde_json::from_str(s).map_err(|e| GraphError::Parse {
            line: e.line(),
            msg: e.to_string(),
        })?;
        Self::from_edges(w.n, w.r, w.edges)
    }
}

impl Serialize for ColouredGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        Wire {
            n: self.order(),
            r: self.r,
            edges: self.edges().collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ColouredGraph {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let w = Wire::deserialize(d)?;
        Self::from_edges(w.n, w.r, w.edges).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_rejects_parallel_edges_across_colours() {
        let err = ColouredGraph::from_edges(3, 2, [(0, 1, 1), (1, 0, 2)]).unwrap_err();
        assert_eq!(err, GraphError::ParallelEdge(0, 1));
    }

    #[test]
    fn keep_first_resolves_collisions() {
        let g = ColouredGraph::from_edges_keep_first(3, 2, [(0, 1, 2), (1, 0, 1)]).unwrap();
        assert_eq!(g.colour(0, 1), Some(2));
        assert_eq!(g.colour(1, 0), Some(2));
        assert_eq!(g.size(), 1);
    }

    #[test]
    fn colour_range_is_checked() {
        assert!(matches!(
            ColouredGraph::from_edges(2, 2, [(0, 1, 3)]),
            Err(GraphError::ColourOutOfRange { colour: 3, r: 2 })
        ));
        assert!(ColouredGraph::from_edges(2, 2, [(0, 1, 0)]).is_err());
    }

    #[test]
    fn json_round_trip() {
        let g = ColouredGraph::from_edges(4, 2, [(0, 1, 1), (2, 3, 2), (1, 2, 1)]).unwrap();
        let back = ColouredGraph::from_json(&g.to_json()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn induced_keeps_colours() {
        let g = ColouredGraph::from_edges(4, 2, [(0, 1, 1), (2, 3, 2), (1, 2, 1)]).unwrap();
        let s = g.induced(&[3, 2, 1]);
        assert_eq!(s.graph.colour(0, 1), Some(2));
        assert_eq!(s.graph.colour(1, 2), Some(1));
        assert!(!s.graph.has_edge(0, 2));
    }
}
