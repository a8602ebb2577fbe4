//! Exact exponential-time oracles for small instances.

use super::{Colour, ColouredGraph, CycleFamily, CyclePiece, GraphError, SimpleGraph};

#[derive(Debug, Clone, Copy)]
pub struct PartitionCaps {
    /// Largest order handled by the subset DP.
    pub max_n: usize,
}

impl Default for PartitionCaps {
    fn default() -> Self {
        Self { max_n: 14 }
    }
}

/// Per-colour Held–Karp table: `reach[mask]` holds the endpoints `v` of
/// paths that start at the lowest vertex of `mask` and visit exactly `mask`.
struct HamTable {
    adj: Vec<u32>,
    reach: Vec<u32>,
}

impl HamTable {
    fn new(class: &SimpleGraph) -> Self {
        let n = class.order();
        let adj: Vec<u32> = (0..n)
            .map(|v| class.neighbours(v).fold(0u32, |m, u| m | (1 << u)))
            .collect();
        let mut reach = vec![0u32; 1 << n];
        for s in 0..n {
            reach[1 << s] = 1 << s;
        }
        for mask in 1u32..(1 << n) {
            let ends = reach[mask as usize];
            if ends == 0 {
                continue;
            }
            let s = mask.trailing_zeros();
            // extensions must stay above the start vertex
            let above = !((2u32 << s) - 1);
            let mut e = ends;
            while e != 0 {
                let v = e.trailing_zeros() as usize;
                e &= e - 1;
                let mut next = adj[v] & !mask & above;
                while next != 0 {
                    let u = next.trailing_zeros();
                    next &= next - 1;
                    reach[(mask | (1 << u)) as usize] |= 1 << u;
                }
            }
        }
        Self { adj, reach }
    }

    fn closes(&self, mask: u32) -> bool {
        if mask.count_ones() < 3 {
            return false;
        }
        let s = mask.trailing_zeros() as usize;
        self.reach[mask as usize] & self.adj[s] != 0
    }

    fn cycle(&self, mask: u32) -> Vec<usize> {
        let s = mask.trailing_zeros() as usize;
        let mut v = (self.reach[mask as usize] & self.adj[s]).trailing_zeros() as usize;
        let mut rest = mask;
        let mut seq = Vec::new();
        loop {
            seq.push(v);
            if v == s {
                break;
            }
            rest &= !(1 << v);
            let prev = if rest == 1 << s {
                1 << s
            } else {
                self.reach[rest as usize] & self.adj[v]
            };
            v = prev.trailing_zeros() as usize;
        }
        seq.reverse();
        seq
    }
}

/// Minimum number of monochromatic pieces (singletons, edges, proper cycles)
/// partitioning the vertex set, with one optimal family.
pub fn exact_min_cycle_partition(g: &ColouredGraph, caps: PartitionCaps) -> Result<(usize, CycleFamily), GraphError> {
    let n = g.order();
    if n > caps.max_n || n > 24 {
        return Err(GraphError::CapExceeded {
            what: "cycle partition DP",
            size: n,
            cap: caps.max_n.min(24),
        });
    }
    if n == 0 {
        return Ok((0, CycleFamily::default()));
    }
    let tables: Vec<HamTable> = (1..=g.colours()).map(|c| HamTable::new(&g.colour_class(c))).collect();
    let full = (1u32 << n) - 1;
    // colour of the piece on `mask`; 0 marks a singleton
    let piece_colour = |mask: u32| -> Option<Colour> {
        match mask.count_ones() {
            1 => Some(0),
            2 => {
                let u = mask.trailing_zeros() as usize;
                let v = (31 - mask.leading_zeros()) as usize;
                g.colour(u, v)
            }
            _ => (0..tables.len())
                .find(|&c| tables[c].closes(mask))
                .map(|c| c as Colour + 1),
        }
    };
    // u16::MAX: `mask` is not a monochromatic piece
    let mut mono = vec![u16::MAX; 1 << n];
    for mask in 1..=full {
        if let Some(c) = piece_colour(mask) {
            mono[mask as usize] = c;
        }
    }
    let mut best = vec![u8::MAX; 1 << n];
    let mut choice = vec![0u32; 1 << n];
    best[0] = 0;
    for mask in 1..=full {
        let low = mask & mask.wrapping_neg();
        let rest = mask ^ low;
        // enumerate sub-masks of `rest`, each joined with the lowest vertex
        let mut sub = rest;
        loop {
            let t = sub | low;
            if mono[t as usize] != u16::MAX {
                let cand = best[(mask ^ t) as usize].saturating_add(1);
                if cand < best[mask as usize] {
                    best[mask as usize] = cand;
                    choice[mask as usize] = t;
                }
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    let mut pieces = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let t = choice[mask as usize];
        let c = mono[t as usize];
        let verts: Vec<usize> = (0..n).filter(|&v| t >> v & 1 == 1).collect();
        pieces.push(match verts.len() {
            1 => CyclePiece::Singleton { v: verts[0] },
            2 => CyclePiece::Edge {
                u: verts[0],
                v: verts[1],
                colour: c,
            },
            _ => CyclePiece::Cycle {
                vertices: tables[c as usize - 1].cycle(t),
                colour: c,
            },
        });
        mask ^= t;
    }
    Ok((best[full as usize] as usize, CycleFamily::new(pieces)))
}

/// A monochromatic component: its colour and sorted vertex set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoComponent {
    pub colour: Colour,
    pub vertices: Vec<usize>,
}

#[derive(Debug, Clone, Copy)]
pub struct CoverCaps {
    pub max_components: usize,
    pub max_nodes: u64,
}

impl Default for CoverCaps {
    fn default() -> Self {
        Self {
            max_components: 10_000,
            max_nodes: 5_000_000,
        }
    }
}

/// All monochromatic components of all colours (including order-one ones).
pub fn all_mono_components(g: &ColouredGraph) -> Vec<MonoComponent> {
    (1..=g.colours())
        .flat_map(|c| {
            g.colour_class(c)
                .components()
                .into_iter()
                .map(move |vertices| MonoComponent { colour: c, vertices })
        })
        .collect()
}

/// Minimum number of monochromatic components whose union contains
/// `targets`, with one optimal choice.
pub fn exact_min_component_cover(
    g: &ColouredGraph,
    targets: &[usize],
    caps: CoverCaps,
) -> Result<(usize, Vec<MonoComponent>), GraphError> {
    if targets.is_empty() {
        return Ok((0, Vec::new()));
    }
    let comps = all_mono_components(g);
    if comps.len() > caps.max_components {
        return Err(GraphError::CapExceeded {
            what: "component cover",
            size: comps.len(),
            cap: caps.max_components,
        });
    }
    let sets: Vec<Vec<usize>> = comps.iter().map(|c| c.vertices.clone()).collect();
    let chosen = exact_set_cover(g.order(), &sets, targets, caps.max_nodes)?;
    let picked: Vec<MonoComponent> = chosen.iter().map(|&i| comps[i].clone()).collect();
    Ok((picked.len(), picked))
}

type Bits = Vec<u64>;

/// Whether some `k` monochromatic components together contain `targets`,
/// by enumerating every `k`-subset. Returns one such choice.
pub fn component_cover_within(
    g: &ColouredGraph,
    targets: &[usize],
    k: usize,
    max_subsets: u64,
) -> Result<Option<Vec<MonoComponent>>, GraphError> {
    let comps = all_mono_components(g);
    let m = comps.len();
    let subsets = (0..k.min(m)).try_fold(1u64, |acc, i| {
        acc.checked_mul((m - i) as u64).map(|x| x / (i as u64 + 1))
    });
    if subsets.is_none_or(|s| s > max_subsets) {
        return Err(GraphError::CapExceeded {
            what: "component cover enumeration",
            size: m,
            cap: max_subsets as usize,
        });
    }
    // bit t of mask[c]: component c contains targets[t]
    let words = targets.len().div_ceil(64).max(1);
    let mut index = vec![usize::MAX; g.order()];
    for (t, &v) in targets.iter().enumerate() {
        index[v] = t;
    }
    let masks: Vec<Bits> = comps
        .iter()
        .map(|c| {
            let mut b = vec![0u64; words];
            c.vertices
                .iter()
                .filter(|&&v| index[v] != usize::MAX)
                .for_each(|&v| bit_set(&mut b, index[v]));
            b
        })
        .collect();
    let mut full = vec![0u64; words];
    (0..targets.len()).for_each(|t| bit_set(&mut full, t));

    fn go(masks: &[Bits], full: &Bits, start: usize, left: usize, acc: &Bits, chosen: &mut Vec<usize>) -> bool {
        if acc == full {
            return true;
        }
        if left == 0 {
            return false;
        }
        for c in start..masks.len() {
            let next: Bits = acc.iter().zip(&masks[c]).map(|(a, b)| a | b).collect();
            chosen.push(c);
            if go(masks, full, c + 1, left - 1, &next, chosen) {
                return true;
            }
            chosen.pop();
        }
        false
    }
    let mut chosen = Vec::new();
    let found = go(&masks, &full, 0, k, &vec![0u64; words], &mut chosen);
    Ok(found.then(|| chosen.into_iter().map(|c| comps[c].clone()).collect()))
}

fn bit_set(b: &mut Bits, i: usize) {
    b[i / 64] |= 1 << (i % 64);
}

fn bit_get(b: &Bits, i: usize) -> bool {
    b[i / 64] >> (i % 64) & 1 == 1
}

fn subset_of(a: &Bits, b: &Bits) -> bool {
    a.iter().zip(b).all(|(x, y)| x & !y == 0)
}

/// Exact minimum set cover of `targets` (elements in `0..universe`) by
/// branch and bound. Returns indices into `sets`.
pub fn exact_set_cover(
    universe: usize,
    sets: &[Vec<usize>],
    targets: &[usize],
    max_nodes: u64,
) -> Result<Vec<usize>, GraphError> {
    // collapse targets with identical membership signatures
    let mut membership: Vec<Vec<u32>> = vec![Vec::new(); universe];
    for (i, s) in sets.iter().enumerate() {
        for &v in s {
            membership[v].push(i as u32);
        }
    }
    let mut sigs: Vec<Vec<u32>> = targets.iter().map(|&t| membership[t].clone()).collect();
    sigs.sort();
    sigs.dedup();
    if sigs.iter().any(Vec::is_empty) {
        return Err(GraphError::CapExceeded {
            what: "component cover (uncoverable target)",
            size: 0,
            cap: 0,
        });
    }
    // element dominance: if sig(a) is a subset of sig(b), covering a covers b
    let sig_sets: Vec<std::collections::HashSet<u32>> = sigs.iter().map(|s| s.iter().copied().collect()).collect();
    let mut keep = vec![true; sigs.len()];
    for a in 0..sigs.len() {
        for b in 0..sigs.len() {
            if a != b
                && keep[a]
                && keep[b]
                && sigs[a].len() <= sigs[b].len()
                && sigs[a].iter().all(|x| sig_sets[b].contains(x))
                && (sigs[a].len() < sigs[b].len() || a < b)
            {
                keep[b] = false;
            }
        }
    }
    let elements: Vec<&Vec<u32>> = sigs.iter().zip(&keep).filter(|p| *p.1).map(|p| p.0).collect();
    let m = elements.len();
    let words = m.div_ceil(64).max(1);
    // restrict sets to the reduced element list
    let mut covers: Vec<Bits> = vec![vec![0; words]; sets.len()];
    for (e, sig) in elements.iter().enumerate() {
        for &s in sig.iter() {
            bit_set(&mut covers[s as usize], e);
        }
    }
    // set dominance: drop sets contained in another
    let mut live: Vec<usize> = (0..sets.len()).filter(|&s| covers[s].iter().any(|&w| w != 0)).collect();
    live.sort_by_key(|&s| std::cmp::Reverse(covers[s].iter().map(|w| w.count_ones()).sum::<u32>()));
    let mut kept: Vec<usize> = Vec::new();
    for &s in &live {
        if !kept.iter().any(|&k| subset_of(&covers[s], &covers[k])) {
            kept.push(s);
        }
    }
    let elem_sets: Vec<Vec<usize>> = (0..m)
        .map(|e| kept.iter().copied().filter(|&s| bit_get(&covers[s], e)).collect())
        .collect();
    let mut search = CoverSearch {
        covers: &covers,
        elem_sets: &elem_sets,
        best: greedy_cover(&covers, &kept, m, words),
        nodes: 0,
        max_nodes,
        m,
    };
    let mut stack = Vec::new();
    let uncovered = full_bits(m, words);
    search.branch(&uncovered, &mut stack)?;
    Ok(search.best)
}

fn full_bits(m: usize, words: usize) -> Bits {
    let mut b = vec![0u64; words];
    for i in 0..m {
        bit_set(&mut b, i);
    }
    b
}

fn greedy_cover(covers: &[Bits], kept: &[usize], m: usize, words: usize) -> Vec<usize> {
    let mut uncovered = full_bits(m, words);
    let mut out = Vec::new();
    while uncovered.iter().any(|&w| w != 0) {
        let &s = kept
            .iter()
            .max_by_key(|&&s| {
                let gain: u32 = covers[s]
                    .iter()
                    .zip(&uncovered)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum();
                (gain, std::cmp::Reverse(s))
            })
            .expect("every element is coverable");
        out.push(s);
        for (u, c) in uncovered.iter_mut().zip(&covers[s]) {
            *u &= !c;
        }
    }
    out
}

struct CoverSearch<'a> {
    covers: &'a [Bits],
    elem_sets: &'a [Vec<usize>],
    best: Vec<usize>,
    nodes: u64,
    max_nodes: u64,
    m: usize,
}

impl CoverSearch<'_> {
    /// Lower bound: greedily pick pairwise "independent" uncovered elements
    /// (no set covers two of them); each needs its own set.
    fn lower_bound(&self, uncovered: &Bits) -> usize {
        let mut blocked = vec![0u64; uncovered.len()];
        let mut count = 0;
        let mut order: Vec<usize> = (0..self.m).filter(|&e| bit_get(uncovered, e)).collect();
        order.sort_by_key(|&e| self.elem_sets[e].len());
        for e in order {
            if bit_get(&blocked, e) {
                continue;
            }
            count += 1;
            for &s in &self.elem_sets[e] {
                for (b, c) in blocked.iter_mut().zip(&self.covers[s]) {
                    *b |= c;
                }
            }
        }
        count
    }

    fn branch(&mut self, uncovered: &Bits, stack: &mut Vec<usize>) -> Result<(), GraphError> {
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            return Err(GraphError::CapExceeded {
                what: "set cover search nodes",
                size: self.nodes as usize,
                cap: self.max_nodes as usize,
            });
        }
        if uncovered.iter().all(|&w| w == 0) {
            if stack.len() < self.best.len() {
                self.best = stack.clone();
            }
            return Ok(());
        }
        if stack.len() + self.lower_bound(uncovered) >= self.best.len() {
            return Ok(());
        }
        // branch on the uncovered element with the fewest candidate sets
        let e = (0..self.m)
            .filter(|&e| bit_get(uncovered, e))
            .min_by_key(|&e| self.elem_sets[e].len())
            .expect("nonempty");
        let mut options = self.elem_sets[e].clone();
        options.sort_by_key(|&s| {
            std::cmp::Reverse(
                self.covers[s]
                    .iter()
                    .zip(uncovered)
                    .map(|(a, b)| (a & b).count_ones())
                    .sum::<u32>(),
            )
        });
        for s in options {
            let next: Bits = uncovered.iter().zip(&self.covers[s]).map(|(u, c)| u & !c).collect();
            stack.push(s);
            self.branch(&next, stack)?;
            stack.pop();
        }
        Ok(())
    }
}

/// Independence number of the underlying graph, by branch and bound.
pub fn independence_number(g: &SimpleGraph) -> Result<usize, GraphError> {
    let n = g.order();
    if n > 30 {
        return Err(GraphError::CapExceeded {
            what: "independence number",
            size: n,
            cap: 30,
        });
    }
    let adj: Vec<u32> = (0..n)
        .map(|v| g.neighbours(v).fold(0u32, |m, u| m | (1 << u)))
        .collect();
    let all = ((1u64 << n) - 1) as u32;
    let mut best = 0;
    mis(&adj, all, 0, &mut best);
    Ok(best)
}

fn mis(adj: &[u32], rest: u32, size: usize, best: &mut usize) {
    if rest == 0 {
        *best = (*best).max(size);
        return;
    }
    if size + rest.count_ones() as usize <= *best {
        return;
    }
    // a vertex of degree <= 1 in the remainder can always be taken
    let mut r = rest;
    let mut pick = None;
    let mut max_deg = (0, 0);
    while r != 0 {
        let v = r.trailing_zeros() as usize;
        r &= r - 1;
        let d = (adj[v] & rest).count_ones();
        if d <= 1 {
            pick = Some(v);
            break;
        }
        if d > max_deg.0 {
            max_deg = (d, v);
        }
    }
    if let Some(v) = pick {
        mis(adj, rest & !(1 << v) & !adj[v], size + 1, best);
        return;
    }
    let v = max_deg.1;
    mis(adj, rest & !(1 << v) & !adj[v], size + 1, best);
    mis(adj, rest & !(1 << v), size, best);
}

/// Exhaustive search for edge weights with weighted degree exactly `b(v)`
/// at every vertex; each weight ranges over `0..=max b`. Returns the
/// weights in `g.edges()` order.
pub fn exhaustive_b_weighting(g: &SimpleGraph, b: &[u64]) -> Result<Option<Vec<u64>>, GraphError> {
    let edges: Vec<(usize, usize)> = g.edges().collect();
    if edges.len() > 40 {
        return Err(GraphError::CapExceeded {
            what: "exhaustive weighting",
            size: edges.len(),
            cap: 40,
        });
    }
    let n = g.order();
    // last[v]: index of the last edge at v
    let mut last = vec![None; n];
    for (i, &(u, v)) in edges.iter().enumerate() {
        last[u] = Some(i);
        last[v] = Some(i);
    }
    if (0..n).any(|v| last[v].is_none() && b[v] != 0) {
        return Ok(None);
    }
    let mut residual = b.to_vec();
    let mut weights = vec![0u64; edges.len()];
    let found = assign(&edges, &last, 0, &mut residual, &mut weights);
    Ok(found.then_some(weights))
}

fn assign(
    edges: &[(usize, usize)],
    last: &[Option<usize>],
    i: usize,
    residual: &mut [u64],
    weights: &mut [u64],
) -> bool {
    let Some(&(u, v)) = edges.get(i) else {
        return residual.iter().all(|&x| x == 0);
    };
    for w in 0..=residual[u].min(residual[v]) {
        residual[u] -= w;
        residual[v] -= w;
        let closed = |x: usize| last[x] != Some(i) || residual[x] == 0;
        if closed(u) && closed(v) && assign(edges, last, i + 1, residual, weights) {
            weights[i] = w;
            return true;
        }
        residual[u] += w;
        residual[v] += w;
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cover_enumeration_agrees_with_branch_and_bound() {
        // two colours on a path: 1-2 red, 2-3 blue, 3-4 red
        let g = ColouredGraph::from_edges(5, 2, [(1, 2, 1), (2, 3, 2), (3, 4, 1)]).unwrap();
        let targets = [1, 2, 3, 4];
        let (exact, _) = exact_min_component_cover(&g, &targets, CoverCaps::default()).unwrap();
        assert_eq!(exact, 2);
        assert!(component_cover_within(&g, &targets, 1, 100).unwrap().is_none());
        let pick = component_cover_within(&g, &targets, 2, 100).unwrap().unwrap();
        assert_eq!(pick.len(), 2);
    }

    #[test]
    fn cycle_partition_small_cases() {
        let c5 = ColouredGraph::from_simple(&SimpleGraph::cycle(5), 1, 1);
        assert_eq!(exact_min_cycle_partition(&c5, PartitionCaps::default()).unwrap().0, 1);
        let path = ColouredGraph::from_edges(4, 1, [(0, 1, 1), (1, 2, 1), (2, 3, 1)]).unwrap();
        assert_eq!(exact_min_cycle_partition(&path, PartitionCaps::default()).unwrap().0, 2);
        let empty = ColouredGraph::empty(3, 2);
        assert_eq!(
            exact_min_cycle_partition(&empty, PartitionCaps::default()).unwrap().0,
            3
        );
    }

    #[test]
    fn cap_is_enforced() {
        let g = ColouredGraph::empty(15, 1);
        assert!(matches!(
            exact_min_cycle_partition(&g, PartitionCaps::default()),
            Err(GraphError::CapExceeded { .. })
        ));
    }

    #[test]
    fn alpha_of_small_graphs() {
        assert_eq!(independence_number(&SimpleGraph::complete(5)).unwrap(), 1);
        assert_eq!(independence_number(&SimpleGraph::cycle(5)).unwrap(), 2);
        assert_eq!(independence_number(&SimpleGraph::empty(7)).unwrap(), 7);
        assert_eq!(independence_number(&SimpleGraph::empty(0)).unwrap(), 0);
    }

    #[test]
    fn component_cover_trivial_targets() {
        let g = ColouredGraph::from_edges(4, 2, [(0, 1, 1), (2, 3, 2)]).unwrap();
        assert_eq!(exact_min_component_cover(&g, &[], CoverCaps::default()).unwrap().0, 0);
        assert_eq!(exact_min_component_cover(&g, &[2], CoverCaps::default()).unwrap().0, 1);
        assert_eq!(
            exact_min_component_cover(&g, &[0, 1, 2, 3], CoverCaps::default())
                .unwrap()
                .0,
            2
        );
    }

    #[test]
    fn exhaustive_weighting_on_small_graphs() {
        let two = |g: &SimpleGraph| exhaustive_b_weighting(g, &vec![2; g.order()]).unwrap();
        assert!(two(&SimpleGraph::cycle(5)).is_some());
        assert!(two(&SimpleGraph::from_edges(2, [(0, 1)])).is_some());
        let star = SimpleGraph::from_edges(4, [(0, 1), (0, 2), (0, 3)]);
        assert!(two(&star).is_none());
        let w = two(&SimpleGraph::complete(4)).unwrap();
        assert_eq!(w.iter().sum::<u64>(), 4);
    }
}
