//! Random vertex samples with exact clause verification.

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use super::CoverError;
use crate::graph::{ColouredGraph, SimpleGraph};
use crate::rational::{int, ratio, to_f64, Rational};
use crate::regularity::ClusterPartition;
use crate::{derive_seed, rng_from_seed};

/// A graph that can report, for every vertex, how many neighbours it has in
/// each class of a vertex labelling. Layers allow several edge sets over the
/// same vertices (layer 0 is the whole graph).
pub trait SampleHost {
    fn order(&self) -> usize;

    fn layers(&self) -> usize {
        1
    }

    /// Flat table indexed `(v * layers + layer) * classes + class`.
    fn class_degrees(&self, label: &[u32], classes: usize) -> Vec<u32>;
}

impl SampleHost for SimpleGraph {
    fn order(&self) -> usize {
        SimpleGraph::order(self)
    }

    fn class_degrees(&self, label: &[u32], classes: usize) -> Vec<u32> {
        let mut out = vec![0u32; self.order() * classes];
        for (u, v) in self.edges() {
            out[u * classes + label[v] as usize] += 1;
            out[v * classes + label[u] as usize] += 1;
        }
        out
    }
}

/// Layer 0 counts all colours, layer `c` counts colour `c` only.
impl SampleHost for ColouredGraph {
    fn order(&self) -> usize {
        ColouredGraph::order(self)
    }

    fn layers(&self) -> usize {
        self.colours() as usize + 1
    }

    fn class_degrees(&self, label: &[u32], classes: usize) -> Vec<u32> {
        let layers = SampleHost::layers(self);
        let mut out = vec![0u32; self.order() * layers * classes];
        for (u, v, c) in self.edges() {
            for layer in [0, c as usize] {
                out[(u * layers + layer) * classes + label[v] as usize] += 1;
                out[(v * layers + layer) * classes + label[u] as usize] += 1;
            }
        }
        out
    }
}

/// `K_n` without materialised edges.
#[derive(Debug, Clone, Copy)]
pub struct CompleteHost {
    pub n: usize,
}

impl SampleHost for CompleteHost {
    fn order(&self) -> usize {
        self.n
    }

    fn class_degrees(&self, label: &[u32], classes: usize) -> Vec<u32> {
        let mut sizes = vec![0u32; classes];
        for &l in label {
            sizes[l as usize] += 1;
        }
        let mut out = Vec::with_capacity(self.n * classes);
        for &l in label {
            out.extend_from_slice(&sizes);
            let at = out.len() - classes + l as usize;
            out[at] -= 1;
        }
        out
    }
}

/// Blocks of consecutive vertices; two blocks are completely joined when
/// `joined[a][b]`, and a block is a clique when `joined[a][a]`.
#[derive(Debug, Clone)]
pub struct BlowUpHost {
    pub sizes: Vec<usize>,
    pub joined: Vec<Vec<bool>>,
}

impl BlowUpHost {
    fn block_of(&self) -> Vec<usize> {
        self.sizes
            .iter()
            .enumerate()
            .flat_map(|(b, &s)| std::iter::repeat_n(b, s))
            .collect()
    }
}

impl SampleHost for BlowUpHost {
    fn order(&self) -> usize {
        self.sizes.iter().sum()
    }

    fn class_degrees(&self, label: &[u32], classes: usize) -> Vec<u32> {
        let q = self.sizes.len();
        let block = self.block_of();
        let mut count = vec![vec![0u32; classes]; q];
        for (v, &l) in label.iter().enumerate() {
            count[block[v]][l as usize] += 1;
        }
        let per_block: Vec<Vec<u32>> = (0..q)
            .map(|a| {
                let mut row = vec![0u32; classes];
                for b in (0..q).filter(|&b| self.joined[a][b]) {
                    for (x, y) in row.iter_mut().zip(&count[b]) {
                        *x += y;
                    }
                }
                row
            })
            .collect();
        let mut out = Vec::with_capacity(label.len() * classes);
        for (v, &l) in label.iter().enumerate() {
            out.extend_from_slice(&per_block[block[v]]);
            if self.joined[block[v]][block[v]] {
                let at = out.len() - classes + l as usize;
                out[at] -= 1;
            }
        }
        out
    }
}

/// Outcome of the four sampling clauses, each recomputed from scratch.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClauseReport {
    /// `|A| >= (p/2) n`.
    pub a: bool,
    /// `|A cap V_i| <= 2p |V_i|` for every cluster.
    pub b: bool,
    /// `deg(v, A cap V_i) >= (p/2) deg(v, V_i)` whenever `deg(v, V_i) > 30p |V_i|`, in every layer.
    pub c: bool,
    /// `deg(v, A) >= |A|/100` whenever `deg(v, V \ B) > n/40`.
    pub d: bool,
    /// First witness for each failed clause.
    pub diagnostics: Vec<String>,
}

impl ClauseReport {
    pub fn all(&self) -> bool {
        self.a && self.b && self.c && self.d
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSet {
    pub a: Vec<usize>,
    pub p: Rational,
    pub seed: u64,
    /// Attempts used, including the returned one.
    pub attempts: usize,
    pub properties_verified: ClauseReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SampleConfig {
    pub seed: u64,
    pub retries: usize,
    /// Skips the lower bound `m log n / sqrt(n) < p` and the upper bound
    /// `p < 1/100`, keeping `0 < p < 1`.
    pub desk_override: bool,
}

impl Default for SampleConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            retries: 10,
            desk_override: false,
        }
    }
}

fn labels(cp: &ClusterPartition, b: &[bool], a: &[bool]) -> Vec<u32> {
    let m = cp.m();
    let mut label = vec![(3 * m) as u32; cp.n];
    for (i, cluster) in cp.clusters.iter().enumerate() {
        for &v in cluster {
            label[v] = (3 * i) as u32;
        }
    }
    for (v, l) in label.iter_mut().enumerate() {
        *l += if b[v] {
            0
        } else if a[v] {
            1
        } else {
            2
        };
    }
    label
}

/// Recounts the four clauses for the sample `a` avoiding `b`.
pub fn check_clauses<H: SampleHost + ?Sized>(
    host: &H,
    cp: &ClusterPartition,
    b: &[usize],
    a: &[usize],
    p: &Rational,
) -> ClauseReport {
    let n = host.order();
    let m = cp.m();
    let mut in_b = vec![false; n];
    let mut in_a = vec![false; n];
    for &v in b {
        in_b[v] = true;
    }
    for &v in a {
        in_a[v] = true;
    }
    let mut diagnostics = Vec::new();
    if let Some(&v) = a.iter().find(|&&v| in_b[v]) {
        diagnostics.push(format!("vertex {v} lies in both A and B"));
    }
    let (pn, pd) = (*p.numer(), *p.denom());
    let size_a = a.len() as i128;

    let ok_a = 2 * size_a * pd >= pn * n as i128;
    if !ok_a {
        diagnostics.push(format!("(a): |A| = {} < (p/2) n", a.len()));
    }

    let mut ok_b = true;
    for (i, cluster) in cp.clusters.iter().enumerate() {
        let hit = cluster.iter().filter(|&&v| in_a[v]).count() as i128;
        if hit * pd > 2 * pn * cluster.len() as i128 {
            ok_b = false;
            diagnostics.push(format!("(b): |A cap V_{i}| = {hit} > 2p |V_{i}|"));
            break;
        }
    }

    let label = labels(cp, &in_b, &in_a);
    let classes = 3 * (m + 1);
    let layers = host.layers();
    let table = host.class_degrees(&label, classes);
    let row = |v: usize, layer: usize| &table[(v * layers + layer) * classes..][..classes];

    let mut ok_c = true;
    'c: for v in 0..n {
        for layer in 0..layers {
            let degs = row(v, layer);
            for (i, cluster) in cp.clusters.iter().enumerate() {
                let total: i128 = degs[3 * i..3 * i + 3].iter().map(|&x| x as i128).sum();
                let in_sample = degs[3 * i + 1] as i128;
                if total * pd > 30 * pn * cluster.len() as i128 && 2 * in_sample * pd < pn * total {
                    ok_c = false;
                    diagnostics.push(format!(
                        "(c): vertex {v}, cluster {i}, layer {layer}: {in_sample} of {total} neighbours sampled"
                    ));
                    break 'c;
                }
            }
        }
    }

    let mut ok_d = true;
    for v in 0..n {
        let degs = row(v, 0);
        let outside_b: i128 = (0..=m).map(|k| degs[3 * k + 1] as i128 + degs[3 * k + 2] as i128).sum();
        let into_a: i128 = (0..=m).map(|k| degs[3 * k + 1] as i128).sum();
        if 40 * outside_b > n as i128 && 100 * into_a < size_a {
            ok_d = false;
            diagnostics.push(format!(
                "(d): vertex {v} has {into_a} neighbours in A, |A| = {}",
                a.len()
            ));
            break;
        }
    }

    ClauseReport {
        a: ok_a,
        b: ok_b,
        c: ok_c,
        d: ok_d,
        diagnostics,
    }
}

fn preconditions(n: usize, cp: &ClusterPartition, in_b: &[bool], p: &Rational, desk: bool) -> Result<(), CoverError> {
    if *p <= int(0) || *p >= int(1) {
        return Err(CoverError::Precondition(format!("p = {p} must lie in (0, 1)")));
    }
    if let Some(&v) = cp.v0.iter().find(|&&v| !in_b[v]) {
        return Err(CoverError::Precondition(format!("V_0 vertex {v} is not in B")));
    }
    for (i, cluster) in cp.clusters.iter().enumerate() {
        let hit = cluster.iter().filter(|&&v| in_b[v]).count();
        if int(hit) > int(10) * p * int(cluster.len()) {
            return Err(CoverError::Precondition(format!(
                "|B cap V_{i}| = {hit} exceeds 10p |V_{i}|"
            )));
        }
    }
    if cp.eps >= ratio(1, 10) {
        return Err(CoverError::Precondition(format!("eps = {} is not below 1/10", cp.eps)));
    }
    if !desk {
        let lower = cp.m() as f64 * (n as f64).ln() / (n as f64).sqrt();
        if to_f64(p) <= lower || *p >= ratio(1, 100) {
            return Err(CoverError::Precondition(format!(
                "p = {p} must lie strictly between m ln n / sqrt(n) = {lower:.4} and 1/100"
            )));
        }
    }
    Ok(())
}

/// Includes each vertex outside `B` independently with probability `p` and
/// recounts the clauses, resampling up to `retries` times. When no attempt
/// passes, the last one is returned with its failed clauses recorded.
pub fn sample_with_properties<H: SampleHost + ?Sized>(
    host: &H,
    cp: &ClusterPartition,
    b: &[usize],
    p: &Rational,
    cfg: &SampleConfig,
) -> Result<SampleSet, CoverError> {
    let n = host.order();
    if cp.n != n {
        return Err(CoverError::Precondition(format!(
            "partition covers {} vertices, host has {n}",
            cp.n
        )));
    }
    let mut in_b = vec![false; n];
    for &v in b {
        in_b[v] = true;
    }
    preconditions(n, cp, &in_b, p, cfg.desk_override)?;
    let pf = to_f64(p);
    let mut last = None;
    for attempt in 0..cfg.retries.max(1) {
        let seed = derive_seed(cfg.seed, attempt as u64);
        let mut rng = rng_from_seed(seed);
        let a: Vec<usize> = (0..n).filter(|&v| !in_b[v] && rng.gen_bool(pf)).collect();
        let report = check_clauses(host, cp, b, &a, p);
        let done = report.all();
        last = Some(SampleSet {
            a,
            p: *p,
            seed,
            attempts: attempt + 1,
            properties_verified: report,
        });
        if done {
            break;
        }
    }
    Ok(last.expect("at least one attempt"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn partition(n: usize, m: usize, v0: usize) -> ClusterPartition {
        let s = (n - v0) / m;
        let clusters = (0..m).map(|i| (v0 + i * s..v0 + (i + 1) * s).collect()).collect();
        ClusterPartition::new(n, (0..v0).collect(), clusters, ratio(1, 20), ratio(1, 10)).unwrap()
    }

    #[test]
    fn hosts_agree_on_class_degrees() {
        let n = 12;
        let label: Vec<u32> = (0..n).map(|v| (v % 4) as u32).collect();
        let implicit = CompleteHost { n }.class_degrees(&label, 4);
        let explicit = SimpleGraph::complete(n).class_degrees(&label, 4);
        assert_eq!(implicit, explicit);
        let blow = BlowUpHost {
            sizes: vec![n],
            joined: vec![vec![true]],
        };
        assert_eq!(blow.class_degrees(&label, 4), explicit);
    }

    #[test]
    fn blow_up_matches_explicit_graph() {
        let host = BlowUpHost {
            sizes: vec![3, 4, 2],
            joined: vec![
                vec![false, true, true],
                vec![true, true, false],
                vec![true, false, false],
            ],
        };
        let block = host.block_of();
        let edges = (0..9).flat_map(|u| (u + 1..9).map(move |v| (u, v)));
        let g = SimpleGraph::from_edges(9, edges.filter(|&(u, v)| host.joined[block[u]][block[v]]));
        let label: Vec<u32> = (0..9).map(|v| (v % 3) as u32).collect();
        assert_eq!(host.class_degrees(&label, 3), g.class_degrees(&label, 3));
    }

    #[test]
    fn everything_forbidden_fails_preconditions() {
        let cp = partition(100, 4, 0);
        let all: Vec<usize> = (0..100).collect();
        let cfg = SampleConfig {
            desk_override: true,
            ..Default::default()
        };
        assert!(matches!(
            sample_with_properties(&CompleteHost { n: 100 }, &cp, &all, &ratio(1, 200), &cfg),
            Err(CoverError::Precondition(_))
        ));
    }

    #[test]
    fn threshold_degree_is_exempt() {
        // vertex 0 in V_0 sees all 30 vertices of V_1; 30 p |V_1| = 30 at p = 1/30
        let cp = partition(61, 2, 1);
        let g = SimpleGraph::from_edges(61, (1..31).map(|v| (0, v)));
        let at = check_clauses(&g, &cp, &[0], &[], &ratio(1, 30));
        assert!(at.c);
        let below = check_clauses(&g, &cp, &[0], &[], &ratio(1, 31));
        assert!(!below.c);
    }

    #[test]
    fn complete_host_sample_passes() {
        let n = 20_000;
        let cp = partition(n, 10, 0);
        let cfg = SampleConfig {
            seed: 5,
            desk_override: true,
            ..Default::default()
        };
        let s = sample_with_properties(&CompleteHost { n }, &cp, &[], &ratio(1, 200), &cfg).unwrap();
        assert!(s.properties_verified.all(), "{:?}", s.properties_verified.diagnostics);
        assert_eq!(
            check_clauses(&CompleteHost { n }, &cp, &[], &s.a, &s.p),
            s.properties_verified
        );
    }
}
