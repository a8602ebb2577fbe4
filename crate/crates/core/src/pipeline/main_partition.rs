//! The end-to-end partitioner: structural decomposition, then the robust
//! partition on the residual, composed and validated on the input graph.

use serde::{Deserialize, Serialize};

use super::{
    partition_robmat, structural_decompose, BalanceCase, Check, ParameterLedger, PipelineError, RobmatPartitionConfig,
    StageCounts, StructuralConfig, StructuralTrace,
};
use crate::derive_seed;
use crate::graph::{validate_family, ColouredGraph, CycleFamily};
use crate::rational::{int, to_f64, Rational};
use crate::regularity::ClusterPartition;

/// Where the cluster partition of the residual comes from.
#[derive(Debug, Clone)]
pub enum ResidualClusters {
    /// Split each side of the residual into `per_side` equal clusters.
    Sides { per_side: usize },
    /// A partition of the input graph; restricted to the residual.
    Supplied(ClusterPartition),
}

#[derive(Debug, Clone, Default)]
pub struct MainConfig {
    pub seed: u64,
    pub strict: bool,
    pub structural: StructuralConfig,
    pub robmat: RobmatPartitionConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StructuralSummary {
    pub case: BalanceCase,
    pub k: usize,
    pub ell: Option<usize>,
    pub ell_parts: Vec<usize>,
    pub trace: Option<StructuralTrace>,
    pub pieces: usize,
    pub residual_order: usize,
    pub residual_bipartite: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PipelineReport {
    pub ledger: ParameterLedger,
    pub overridden: Vec<String>,
    pub seed: u64,
    pub structural: StructuralSummary,
    pub clusters: usize,
    pub cluster_size: usize,
    pub robmat: StageCounts,
    pub checks: Vec<Check>,
    pub all_checks_hold: bool,
    pub count: usize,
    /// `(1/mu + 200) r^2 + 400 r + 2`.
    pub bound_sharp: f64,
    /// `10^7 r^2`.
    pub bound_headline: f64,
    pub validated: bool,
    pub family: CycleFamily,
}

/// Splits each side of an `n`-vertex graph into `per_side` clusters of equal
/// size, lowest ids first; leftovers go to `V_0`. Without a bipartition the
/// whole vertex set is split into `2 per_side` clusters.
pub fn side_clusters(
    n: usize,
    bipartition: Option<&[bool]>,
    per_side: usize,
    eps: Rational,
    d: Rational,
) -> Result<ClusterPartition, PipelineError> {
    if per_side == 0 {
        return Err(PipelineError::Precondition("per_side must be positive".into()));
    }
    let groups: Vec<Vec<usize>> = match bipartition {
        Some(side) => vec![
            (0..n).filter(|&v| side[v]).collect(),
            (0..n).filter(|&v| !side[v]).collect(),
        ],
        None => vec![(0..n).collect()],
    };
    let parts = if bipartition.is_some() { per_side } else { 2 * per_side };
    let size = groups.iter().map(Vec::len).min().unwrap_or(0) / parts;
    if size == 0 {
        return Err(PipelineError::Precondition(format!(
            "{n} vertices cannot fill {parts} clusters per side"
        )));
    }
    let mut clusters = Vec::new();
    let mut v0 = Vec::new();
    for g in &groups {
        for k in 0..parts {
            clusters.push(g[k * size..(k + 1) * size].to_vec());
        }
        v0.extend_from_slice(&g[parts * size..]);
    }
    v0.sort_unstable();
    ClusterPartition::new(n, v0, clusters, eps, d).map_err(Into::into)
}

/// Restricts a partition of the input graph to the residual whose vertex `i`
/// is `host[i]`. Clusters are cut to the smallest surviving size, dropping
/// their highest ids into `V_0`; empty clusters vanish.
pub fn restrict_clusters(cp: &ClusterPartition, host: &[usize]) -> Result<ClusterPartition, PipelineError> {
    let mut local = vec![usize::MAX; cp.n];
    for (i, &v) in host.iter().enumerate() {
        local[v] = i;
    }
    let mut clusters: Vec<Vec<usize>> = cp
        .clusters
        .iter()
        .map(|c| {
            let mut out: Vec<usize> = c
                .iter()
                .filter(|&&v| local[v] != usize::MAX)
                .map(|&v| local[v])
                .collect();
            out.sort_unstable();
            out
        })
        .filter(|c| !c.is_empty())
        .collect();
    let size = clusters.iter().map(Vec::len).min().unwrap_or(0);
    let mut v0: Vec<usize> = cp
        .v0
        .iter()
        .filter(|&&v| local[v] != usize::MAX)
        .map(|&v| local[v])
        .collect();
    for c in &mut clusters {
        v0.extend(c.drain(size..));
    }
    v0.sort_unstable();
    ClusterPartition::new(host.len(), v0, clusters, cp.eps, cp.d).map_err(Into::into)
}

pub fn partition_main(
    g: &ColouredGraph,
    ledger: &ParameterLedger,
    clusters: &ResidualClusters,
    cfg: &MainConfig,
) -> Result<PipelineReport, PipelineError> {
    let mut scfg = cfg.structural;
    scfg.seed = derive_seed(cfg.seed, 1);
    scfg.strict = cfg.strict;
    let sd = structural_decompose(g, ledger, &scfg)?;

    let cp = match clusters {
        ResidualClusters::Sides { per_side } => {
            side_clusters(sd.h.order(), sd.bipartition.as_deref(), *per_side, ledger.eps, ledger.d)?
        }
        ResidualClusters::Supplied(cp) => {
            if cp.n != g.order() {
                return Err(PipelineError::Precondition(format!(
                    "cluster partition covers {} vertices, graph has {}",
                    cp.n,
                    g.order()
                )));
            }
            restrict_clusters(cp, &sd.host)?
        }
    };

    // the residual is (mu, 20 mu)-robustly matchable
    let mut inner = ledger.clone();
    inner.nu = int(20) * ledger.mu;
    let mut rcfg = cfg.robmat.clone();
    rcfg.seed = derive_seed(cfg.seed, 2);
    rcfg.strict = cfg.strict;
    let rp = partition_robmat(&sd.h, sd.bipartition.as_deref(), &cp, &inner, &rcfg)?;

    let mut family = sd.cycles.clone();
    family.extend(rp.family.relabel(&sd.host));
    let verdict = validate_family(g, &family, true);
    if !verdict.accepted {
        return Err(PipelineError::Validation(format!("{:?}", verdict.violation)));
    }

    let r = ledger.r as f64;
    let count = family.count();
    let mut checks = sd.checks.clone();
    checks.extend(rp.checks);
    let bound_sharp = ledger.robust_bound() + 400.0 * r + 2.0;
    let bound_headline = 1e7 * r * r;
    for (name, rhs) in [
        ("pieces <= (1/mu + 200) r^2 + 400 r + 2", bound_sharp),
        ("pieces <= 10^7 r^2", bound_headline),
    ] {
        checks.push(Check {
            stage: "composition".into(),
            name: name.into(),
            lhs: count as f64,
            rhs,
            holds: count as f64 <= rhs,
        });
    }
    let floor = 100.0 * cp.m() as f64 / to_f64(&ledger.eps);
    checks.push(Check {
        stage: "composition".into(),
        name: "desk floor n >= 100 m / eps".into(),
        lhs: g.order() as f64,
        rhs: floor,
        holds: g.order() as f64 >= floor,
    });
    Ok(PipelineReport {
        ledger: ledger.clone(),
        overridden: ledger.overridden().into_iter().map(String::from).collect(),
        seed: cfg.seed,
        structural: StructuralSummary {
            case: sd.case,
            k: sd.k,
            ell: sd.ell,
            ell_parts: sd.ell_parts.clone(),
            trace: sd.trace.clone(),
            pieces: sd.cycles.count(),
            residual_order: sd.h.order(),
            residual_bipartite: sd.bipartition.is_some(),
        },
        clusters: cp.m(),
        cluster_size: cp.cluster_size(),
        robmat: rp.counts,
        all_checks_hold: checks.iter().all(|c| c.holds),
        checks,
        count,
        bound_sharp,
        bound_headline,
        validated: verdict.accepted,
        family,
    })
}
