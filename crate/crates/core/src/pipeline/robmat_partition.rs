//! Partition of a robustly matchable graph, given a cluster partition.
//!
//! Stages: reduced graph and its large components, a perfect 2-matching
//! `M`, a cover of the bad vertices, one skeleton cycle per component,
//! parity singletons, the path lengths `omega` from a b-matching, the paths
//! inside the pairs, and the final splice.

use serde::{Deserialize, Serialize};

use super::{staged, Check, Checks, ParameterLedger, PipelineError};
use crate::covers::{egp_cover, sample_with_properties, EgpConstants, SampleConfig};
use crate::graph::{validate_family, Colour, ColouredGraph, CycleFamily, CyclePiece, SimpleGraph};
use crate::matching::{
    check_robmat, has_perfect_2matching, perfect_b_matching, BMatchingConfig, RobmatConfig, RobmatType, TwoMatching,
};
use crate::rational::{int, ratio, to_f64, Rational};
use crate::regularity::{
    build_reduced, connecting_path, path_in_pair, typical_in, ClusterPartition, ConnectConfig, PairPathConfig,
    ReducedEdge, ReducedGraph, RegularityMode,
};
use crate::{derive_seed, rng_from_seed};

#[derive(Debug, Clone)]
pub struct RobmatPartitionConfig {
    pub seed: u64,
    /// Abort on the first failed inequality instead of recording it.
    pub strict: bool,
    /// Cover constants; the full-scale values unless the ledger runs in desk
    /// override, where `k1 = 2, k2 = 100, codegree divisor 100` are used.
    pub egp: Option<EgpConstants>,
    pub sample_retries: usize,
    pub pair_path: PairPathConfig,
    pub connect: ConnectConfig,
    pub bmatch: BMatchingConfig,
    pub robmat: RobmatConfig,
}

impl Default for RobmatPartitionConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            strict: false,
            egp: None,
            sample_retries: 10,
            pair_path: PairPathConfig::default(),
            connect: ConnectConfig::default(),
            bmatch: BMatchingConfig::default(),
            robmat: RobmatConfig::default(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageCounts {
    pub m: usize,
    pub cluster_size: usize,
    pub v0: usize,
    pub reduced_edges: usize,
    pub kept_edges: usize,
    pub kept_components: usize,
    pub matching_edges: usize,
    pub bad_vertices: usize,
    pub bad_sample: usize,
    pub bad_pieces: usize,
    pub skeleton_cycles: usize,
    pub skeleton_vertices: usize,
    pub parity_singletons: usize,
    pub ell: usize,
    pub b_min: usize,
    pub b_max: usize,
    pub paths: usize,
    pub pieces: usize,
}

#[derive(Debug, Clone)]
pub struct RobmatPartition {
    pub family: CycleFamily,
    pub counts: StageCounts,
    pub checks: Vec<Check>,
}

fn stage_err(stage: &str, detail: impl Into<String>) -> PipelineError {
    PipelineError::Stage {
        stage: stage.into(),
        detail: detail.into(),
    }
}

/// One skeleton cycle: for the `t`-th edge of its component the chosen pair
/// `(u_t, v_t)`, then the interior of the link from `v_t` to `u_{t+1}`.
struct Skeleton {
    colour: Colour,
    edges: Vec<usize>,
    ends: Vec<(usize, usize)>,
    links: Vec<Vec<usize>>,
}

struct Run {
    cp: ClusterPartition,
    used: Vec<bool>,
    checks: Checks,
    counts: StageCounts,
}

impl Run {
    fn cluster_hits(&self, set: &[bool]) -> usize {
        self.cp
            .clusters
            .iter()
            .map(|c| c.iter().filter(|&&v| set[v]).count())
            .max()
            .unwrap_or(0)
    }

    fn mark(&mut self, vs: impl IntoIterator<Item = usize>) {
        for v in vs {
            self.used[v] = true;
        }
    }

    fn remaining(&self, i: usize) -> Vec<usize> {
        self.cp.clusters[i].iter().copied().filter(|&v| !self.used[v]).collect()
    }
}

/// Edges of the reduced graph lying in monochromatic components of order at
/// least `(mu/r) m`.
fn large_component_edges(rg: &ReducedGraph, mu: &Rational) -> Vec<ReducedEdge> {
    let m = rg.m;
    let mut keep = Vec::new();
    for c in 1..=rg.r {
        let g = SimpleGraph::from_edges(m, rg.edges.iter().filter(|e| e.colour == c).map(|e| (e.i, e.j)));
        let mut size = vec![0usize; m];
        for comp in g.components() {
            for &x in &comp {
                size[x] = comp.len();
            }
        }
        let bar = *mu * int(m) / int(rg.r as usize);
        keep.extend(
            rg.edges
                .iter()
                .filter(|e| e.colour == c && int(size[e.i]) >= bar)
                .cloned(),
        );
    }
    keep.sort_by_key(|e| (e.i, e.j));
    keep
}

#[allow(clippy::too_many_lines)]
pub fn partition_robmat(
    h: &ColouredGraph,
    bipartition: Option<&[bool]>,
    cp: &ClusterPartition,
    ledger: &ParameterLedger,
    cfg: &RobmatPartitionConfig,
) -> Result<RobmatPartition, PipelineError> {
    let n = h.order();
    if cp.n != n {
        return Err(PipelineError::Precondition(format!(
            "partition covers {} vertices, graph has {n}",
            cp.n
        )));
    }
    let (mu, nu, eps, d) = (ledger.mu, ledger.nu, ledger.eps, ledger.d);
    if int(20) * mu > nu {
        return Err(PipelineError::Precondition("20 mu <= nu fails".into()));
    }
    let r = h.colours();
    let ty = if bipartition.is_some() {
        RobmatType::Two
    } else {
        RobmatType::One
    };
    let mut robmat_cfg = cfg.robmat;
    robmat_cfg.seed = derive_seed(cfg.seed, 1);
    let verdict = check_robmat(&h.underlying(), &mu, &nu, ty, bipartition, &robmat_cfg)?;
    if !verdict.accepted {
        return Err(PipelineError::Precondition(format!(
            "input is not ({mu}, {nu})-robustly matchable: {:?}",
            verdict.witness
        )));
    }
    let mut cp = cp.clone();
    cp.eps = eps;
    cp.d = d;
    let m = cp.m();
    let s = cp.cluster_size();
    if m == 0 || s == 0 {
        return Err(PipelineError::Precondition("no clusters".into()));
    }
    let mut run = Run {
        used: vec![false; n],
        checks: Checks::new(cfg.strict),
        counts: StageCounts {
            m,
            cluster_size: s,
            v0: cp.v0.len(),
            ..Default::default()
        },
        cp,
    };
    let sf = s as f64;
    let epsf = to_f64(&eps);

    // stage 1: reduced graph and the edges of large components
    let cluster_side: Option<Vec<bool>> = match bipartition {
        Some(side) => {
            let mut sides = Vec::with_capacity(m);
            for (i, c) in run.cp.clusters.iter().enumerate() {
                let first = side[c[0]];
                if c.iter().any(|&v| side[v] != first) {
                    return Err(stage_err("stage 1", format!("cluster {i} meets both sides")));
                }
                sides.push(first);
            }
            Some(sides)
        }
        None => None,
    };
    let rg = build_reduced(h, &run.cp, RegularityMode::Trusted, cluster_side.clone())
        .map_err(staged("stage 1"))?
        .graph;
    let kept = large_component_edges(&rg, &mu);
    let hh = SimpleGraph::from_edges(m, kept.iter().map(|e| (e.i, e.j)));
    run.counts.reduced_edges = rg.edges.len();
    run.counts.kept_edges = kept.len();
    let hh_components = hh.components();
    run.counts.kept_components = hh_components.len();
    {
        let (mu4, nu3) = (int(4) * mu, nu - int(3) * mu);
        let v = check_robmat(&hh, &mu4, &nu3, ty, cluster_side.as_deref(), &robmat_cfg)?;
        let ok = v.accepted;
        run.checks.record(
            "stage 1",
            "kept reduced graph is (4mu, nu - 3mu)-robustly matchable",
            f64::from(u8::from(ok)),
            1.0,
            ok,
        )?;
    }

    // stage 2: perfect 2-matching M
    let weighting = match has_perfect_2matching(&hh) {
        TwoMatching::Found { weighting } => weighting,
        TwoMatching::Obstruction { set, neighbourhood } => {
            return Err(stage_err(
                "stage 2",
                format!(
                    "kept reduced graph has no perfect 2-matching: {} clusters see only {}",
                    set.len(),
                    neighbourhood.len()
                ),
            ))
        }
    };
    let in_m: Vec<bool> = kept.iter().map(|e| weighting.get(e.i, e.j) > 0).collect();
    let mut deg_m = vec![0usize; m];
    for (e, _) in kept.iter().zip(&in_m).filter(|(_, &b)| b) {
        deg_m[e.i] += 1;
        deg_m[e.j] += 1;
    }
    run.counts.matching_edges = in_m.iter().filter(|&&b| b).count();

    // stage 3: bad vertices and their cover
    let mut good = vec![false; n];
    for c in &run.cp.clusters {
        for &v in c {
            good[v] = true;
        }
    }
    let dbar = d - eps;
    for (e, _) in kept.iter().zip(&in_m).filter(|(_, &b)| b) {
        for (i, j) in [(e.i, e.j), (e.j, e.i)] {
            let target = &run.cp.clusters[j];
            let mut tmask = vec![false; n];
            target.iter().for_each(|&v| tmask[v] = true);
            for &v in &run.cp.clusters[i] {
                let dg = h.neighbours(v).filter(|&(u, col)| col == e.colour && tmask[u]).count();
                if int(dg) < dbar * int(target.len()) {
                    good[v] = false;
                }
            }
        }
    }
    let bad: Vec<usize> = (0..n).filter(|&v| !good[v]).collect();
    run.counts.bad_vertices = bad.len();
    let mut bad_mask = vec![false; n];
    bad.iter().for_each(|&v| bad_mask[v] = true);
    let in_cluster_bad = run.cluster_hits(&bad_mask);
    run.checks.record(
        "stage 3",
        "|B cap V_i| <= 2 eps |V_i|",
        in_cluster_bad as f64,
        2.0 * epsf * sf,
        int(in_cluster_bad) <= int(2) * eps * int(s),
    )?;
    let p = {
        let x = 2.0 * epsf.sqrt();
        ratio((x * 1e9).round().max(1.0) as i128, 1_000_000_000)
    };
    let sample_cfg = |stage: u64| SampleConfig {
        seed: derive_seed(cfg.seed, stage),
        retries: cfg.sample_retries,
        desk_override: ledger.desk_override,
    };
    let mut family = CycleFamily::default();
    if !bad.is_empty() {
        let sample = sample_with_properties(h, &run.cp, &bad, &p, &sample_cfg(3)).map_err(staged("stage 3"))?;
        run.counts.bad_sample = sample.a.len();
        let ok = sample.properties_verified.all();
        run.checks.record(
            "stage 3",
            "sample for the bad cover meets clauses (a)-(d)",
            f64::from(u8::from(ok)),
            1.0,
            ok,
        )?;
        let constants = cfg.egp.clone().unwrap_or_else(|| {
            if ledger.desk_override {
                EgpConstants {
                    k1: int(2),
                    k2: int(100),
                    codegree_divisor: int(100),
                }
            } else {
                EgpConstants::full_scale(r)
            }
        });
        let cover = egp_cover(h, &sample.a, &bad, &constants).map_err(staged("stage 3"))?;
        run.counts.bad_pieces = cover.family.count();
        run.checks.record(
            "stage 3",
            "bad cover uses at most 100 r^2 pieces",
            cover.family.count() as f64,
            cover.budget as f64,
            cover.family.count() <= cover.budget,
        )?;
        for piece in &cover.family.pieces {
            run.mark(piece.vertices());
        }
        family.extend(cover.family);
    }
    {
        let covered = run.used.clone();
        let hits = run.cluster_hits(&covered);
        let bar = 5.0 * epsf.sqrt() * sf;
        run.checks.record(
            "stage 3",
            "|V_i cap V(C_bad)| <= 5 sqrt(eps) |V_i|",
            hits as f64,
            bar,
            (hits as f64) <= bar,
        )?;
    }
    if let Some(v) = bad.iter().find(|&&v| !run.used[v]) {
        return Err(stage_err("stage 3", format!("bad vertex {v} is uncovered")));
    }

    // stage 4: one skeleton cycle per monochromatic component of the kept graph
    let skeleton_before = run.used.clone();
    let mut skeletons = Vec::new();
    let mut edge_ends = vec![(usize::MAX, usize::MAX); kept.len()];
    let mut rng = rng_from_seed(derive_seed(cfg.seed, 4));
    for c in 1..=r {
        let idx: Vec<usize> = (0..kept.len()).filter(|&t| kept[t].colour == c).collect();
        let g = SimpleGraph::from_edges(m, idx.iter().map(|&t| (kept[t].i, kept[t].j)));
        let mut comp_of = vec![usize::MAX; m];
        for (k, comp) in g.components().iter().enumerate() {
            comp.iter().for_each(|&x| comp_of[x] = k);
        }
        let mut groups: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
        for &t in &idx {
            groups.entry(comp_of[kept[t].i]).or_default().push(t);
        }
        for edges in groups.into_values() {
            let mut ends = Vec::with_capacity(edges.len());
            for &t in &edges {
                let e = &kept[t];
                let (vi, vj) = (&run.cp.clusters[e.i], &run.cp.clusters[e.j]);
                let ti = typical_in(h, c, vi, vj, &eps);
                let tj = typical_in(h, c, vj, vi, &eps);
                let mut tj_mask = vec![false; n];
                tj.iter().for_each(|&v| tj_mask[v] = true);
                let mut options: Vec<usize> = ti.into_iter().filter(|&v| !run.used[v]).collect();
                rand::seq::SliceRandom::shuffle(options.as_mut_slice(), &mut rng);
                let pick = options.iter().find_map(|&u| {
                    h.neighbours(u)
                        .find(|&(v, col)| col == c && tj_mask[v] && !run.used[v])
                        .map(|(v, _)| (u, v))
                });
                let (u, v) = pick.ok_or_else(|| {
                    stage_err(
                        "stage 4",
                        format!("no unused typical colour-{c} edge between clusters {} and {}", e.i, e.j),
                    )
                })?;
                run.mark([u, v]);
                ends.push((u, v));
                edge_ends[t] = (u, v);
            }
            let mut links = Vec::with_capacity(edges.len());
            for k in 0..edges.len() {
                let next = (k + 1) % edges.len();
                let (e, f) = (&kept[edges[k]], &kept[edges[next]]);
                let v = ends[k].1;
                let w = ends[next].0;
                let forbidden: Vec<usize> = (0..n).filter(|&x| run.used[x] && x != v && x != w).collect();
                let mut ccfg = cfg.connect;
                ccfg.seed = derive_seed(cfg.seed, 1000 + edges[k] as u64);
                let path = connecting_path(h, &run.cp, &rg, c, (v, (e.j, e.i)), (w, (f.j, f.i)), &forbidden, &ccfg)
                    .map_err(staged("stage 4"))?;
                let interior = path[1..path.len() - 1].to_vec();
                run.mark(interior.iter().copied());
                links.push(interior);
            }
            skeletons.push(Skeleton {
                colour: c,
                edges,
                ends,
                links,
            });
        }
    }
    run.counts.skeleton_cycles = skeletons.len();
    let skeleton_only: Vec<bool> = (0..n).map(|v| run.used[v] && !skeleton_before[v]).collect();
    run.counts.skeleton_vertices = skeleton_only.iter().filter(|&&b| b).count();
    {
        let hits = run.cluster_hits(&skeleton_only);
        run.checks.record(
            "stage 4",
            "|V_i cap V(C_hat)| <= eps |V_i|",
            hits as f64,
            epsf * sf,
            int(hits) <= eps * int(s),
        )?;
    }

    // stage 5: parity singletons
    let mut singletons = 0;
    for comp in &hh_components {
        let free: Vec<usize> = comp.iter().flat_map(|&x| run.remaining(x)).collect();
        if free.len() % 2 == 1 {
            let v = *free.iter().min().expect("odd, hence nonempty");
            run.mark([v]);
            family.pieces.push(CyclePiece::Singleton { v });
            singletons += 1;
        }
    }
    run.counts.parity_singletons = singletons;
    run.checks
        .record("stage 5", "|C_s| <= 2", singletons as f64, 2.0, singletons <= 2)?;
    if ty == RobmatType::Two {
        run.checks.record(
            "stage 5",
            "type 2 has no parity singletons",
            singletons as f64,
            0.0,
            singletons == 0,
        )?;
    }

    // stage 6: ell and the targets b
    let e4 = epsf.powf(0.25);
    let ell = (((1.0 - e4) * sf).ceil().max(0.0) as usize).next_multiple_of(2);
    run.counts.ell = ell;
    if !ell.is_multiple_of(2) || (ell as f64) > (1.0 - e4) * sf + 2.0 {
        return Err(stage_err("stage 6", format!("ell = {ell} violates its definition")));
    }
    let rem: Vec<usize> = (0..m).map(|i| run.remaining(i).len()).collect();
    if let Some(i) = (0..m).find(|&i| rem[i] < ell) {
        return Err(stage_err(
            "stage 6",
            format!("b(x_{i}) = {} - {ell} is negative", rem[i]),
        ));
    }
    let b: Vec<u64> = rem.iter().map(|&x| (x - ell) as u64).collect();
    let b_min = *b.iter().min().expect("m >= 1") as usize;
    let b_max = *b.iter().max().expect("m >= 1") as usize;
    run.counts.b_min = b_min;
    run.counts.b_max = b_max;
    run.checks.record(
        "stage 6",
        "b(x_i) <= eps^(1/4) |V_i|",
        b_max as f64,
        e4 * sf,
        (b_max as f64) <= e4 * sf,
    )?;
    let lower = (1.0 - to_f64(&mu)) * e4 * sf;
    run.checks.record(
        "stage 6",
        "b(x_i) >= (1 - mu) eps^(1/4) |V_i|",
        b_min as f64,
        lower,
        (b_min as f64) >= lower,
    )?;

    // stage 7: perfect b-matching on the kept graph
    if let Some(sides) = &cluster_side {
        let left: u64 = (0..m).filter(|&i| sides[i]).map(|i| b[i]).sum();
        let right: u64 = (0..m).filter(|&i| !sides[i]).map(|i| b[i]).sum();
        run.checks.record(
            "stage 7",
            "sum of b over both sides agrees",
            left as f64,
            right as f64,
            left == right,
        )?;
    }
    let omega0 = perfect_b_matching(&hh, &b, cluster_side.as_deref(), &cfg.bmatch).map_err(staged("stage 7"))?;

    // stage 8: omega
    let mut omega = vec![0usize; kept.len()];
    for (t, e) in kept.iter().enumerate() {
        let base = omega0.get(e.i, e.j) as usize;
        omega[t] = if in_m[t] {
            let (di, dj) = (deg_m[e.i], deg_m[e.j]);
            if di != dj || !(1..=2).contains(&di) || !ell.is_multiple_of(di) {
                return Err(stage_err(
                    "stage 8",
                    format!("deg_M = ({di}, {dj}) on {}-{} does not divide ell = {ell}", e.i, e.j),
                ));
            }
            base + ell / di
        } else {
            base
        };
    }
    for (x, &target) in rem.iter().enumerate() {
        let total: usize = kept
            .iter()
            .zip(&omega)
            .filter(|(e, _)| e.i == x || e.j == x)
            .map(|(_, &w)| w)
            .sum();
        if total != target {
            return Err(stage_err(
                "stage 8",
                format!("omega sums to {total} at x_{x}, expected {target}"),
            ));
        }
    }

    // stage 9: paths inside the pairs
    let covered: Vec<usize> = (0..n).filter(|&v| run.used[v]).collect();
    let s1 = sample_with_properties(h, &run.cp, &covered, &p, &sample_cfg(91)).map_err(staged("stage 9"))?;
    let ok1 = s1.properties_verified.all();
    run.checks.record(
        "stage 9",
        "first reserve sample meets clauses (a)-(d)",
        f64::from(u8::from(ok1)),
        1.0,
        ok1,
    )?;
    let mut forbid2 = covered.clone();
    forbid2.extend(&s1.a);
    let s2 = sample_with_properties(h, &run.cp, &forbid2, &p, &sample_cfg(92)).map_err(staged("stage 9"))?;
    let ok2 = s2.properties_verified.all();
    run.checks.record(
        "stage 9",
        "second reserve sample meets clauses (a)-(d)",
        f64::from(u8::from(ok2)),
        1.0,
        ok2,
    )?;
    let mut reserve = vec![false; n];
    s2.a.iter().for_each(|&v| reserve[v] = true);

    let order: Vec<usize> = (0..kept.len())
        .filter(|&t| !in_m[t])
        .chain((0..kept.len()).filter(|&t| in_m[t]))
        .collect();
    let mut last_at = vec![usize::MAX; m];
    for &t in order.iter().filter(|&&t| in_m[t]) {
        last_at[kept[t].i] = t;
        last_at[kept[t].j] = t;
    }
    let mut paths: Vec<Vec<usize>> = vec![Vec::new(); kept.len()];
    for &t in &order {
        let e = &kept[t];
        let (u, v) = edge_ends[t];
        let pool = |x: usize, run: &Run| -> Vec<usize> {
            let last = in_m[t] && last_at[x] == t;
            run.remaining(x).into_iter().filter(|&w| last || !reserve[w]).collect()
        };
        let (pi, pj) = (pool(e.i, &run), pool(e.j, &run));
        let w = omega[t];
        for (x, pl) in [(e.i, &pi), (e.j, &pj)] {
            if in_m[t] && last_at[x] == t && pl.len() != w {
                return Err(stage_err(
                    "stage 9",
                    format!("last path at x_{x} needs {w} vertices but {} remain", pl.len()),
                ));
            }
        }
        let mut pcfg = cfg.pair_path;
        pcfg.seed = derive_seed(cfg.seed, 5000 + t as u64);
        let path = path_in_pair(h, Some(e.colour), u, v, &pi, &pj, w + 1, &pcfg).map_err(|err| {
            stage_err(
                "stage 9",
                format!(
                    "pair {}-{} colour {}: path with {} vertices per side: {err}",
                    e.i,
                    e.j,
                    e.colour,
                    w + 1
                ),
            )
        })?;
        run.mark(path.iter().copied());
        paths[t] = path;
    }
    run.counts.paths = kept.len();
    if let Some(v) = (0..n).find(|&v| !run.used[v]) {
        return Err(stage_err("stage 9", format!("vertex {v} is left uncovered")));
    }

    // stage 10: splice the paths into the skeleton
    for sk in &skeletons {
        let mut seq = Vec::new();
        for (k, &t) in sk.edges.iter().enumerate() {
            let path = &paths[t];
            debug_assert_eq!((path[0], path[path.len() - 1]), sk.ends[k]);
            seq.extend(path.iter().copied());
            seq.extend(sk.links[k].iter().copied());
        }
        family.pieces.push(CyclePiece::from_sequence(seq, sk.colour));
    }
    run.counts.pieces = family.count();
    let bound = ledger.robust_bound();
    run.checks.record(
        "stage 10",
        "pieces <= (1/mu + 200) r^2",
        family.count() as f64,
        bound,
        (family.count() as f64) <= bound,
    )?;
    let verdict = validate_family(h, &family, true);
    if !verdict.accepted {
        return Err(PipelineError::Validation(format!("{:?}", verdict.violation)));
    }
    Ok(RobmatPartition {
        family,
        counts: run.counts,
        checks: run.checks.list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{bipartite_blow_up, blow_up, BlowUpSpec, PairSpec};

    fn desk_ledger(n: usize) -> ParameterLedger {
        ParameterLedger::new(ratio(1, 15), ratio(1, 400), ratio(1, 800), ratio(1, 1000), 2, n, true).unwrap()
    }

    #[test]
    fn single_dense_pair_gives_one_cycle() {
        let spec = BlowUpSpec {
            m: 2,
            cluster_size: 60,
            r: 1,
            pairs: vec![PairSpec {
                i: 0,
                j: 1,
                colour: 1,
                density: 0.8,
            }],
            sides: Some(vec![true, false]),
            eps: ratio(1, 1000),
            d: ratio(1, 800),
        };
        let inst = blow_up(&spec, 3).unwrap();
        let ledger =
            ParameterLedger::new(ratio(1, 15), ratio(1, 400), ratio(1, 400), ratio(1, 1000), 1, 120, true).unwrap();
        let out = partition_robmat(
            &inst.g,
            inst.bipartition.as_deref(),
            &inst.clusters,
            &ledger,
            &RobmatPartitionConfig::default(),
        )
        .unwrap();
        assert_eq!(out.counts.matching_edges, 1);
        assert_eq!(out.counts.bad_vertices, 0);
        assert_eq!(out.counts.skeleton_cycles, 1);
        assert_eq!(out.family.count(), 1);
        assert!(matches!(out.family.pieces[0], CyclePiece::Cycle { .. }));
    }

    #[test]
    fn eight_cluster_bipartite_blow_up() {
        let inst = bipartite_blow_up(8, 150, 1, 0.8, ratio(1, 1000), ratio(1, 800), 9).unwrap();
        let ledger = desk_ledger(1200);
        let out = partition_robmat(
            &inst.g,
            inst.bipartition.as_deref(),
            &inst.clusters,
            &ledger,
            &RobmatPartitionConfig::default(),
        )
        .unwrap();
        assert!(validate_family(&inst.g, &out.family, true).accepted);
        assert_eq!(out.counts.kept_edges, 16);
        assert_eq!(out.counts.skeleton_cycles, 1);
        assert_eq!(out.counts.parity_singletons, 0);
        assert_eq!(out.counts.ell % 2, 0);
        assert!((out.family.count() as f64) <= ledger.robust_bound());
    }
}
