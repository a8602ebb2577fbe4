//! Splits a graph of minimum degree about `n/2` into a few monochromatic
//! cycles and a robustly matchable remainder.

use serde::{Deserialize, Serialize};

use super::{staged, Check, Checks, ParameterLedger, PipelineError};
use crate::covers::{exact_length_cycle, ExactLengthConfig};
use crate::derive_seed;
use crate::graph::{Colour, ColouredGraph, CycleFamily, CyclePiece, SimpleGraph};
use crate::matching::{check_robmat, RobmatConfig, RobmatType, RobmatWitness};
use crate::rational::{int, ratio, to_f64};

#[derive(Debug, Clone, Copy, Default)]
pub struct StructuralConfig {
    pub seed: u64,
    pub robmat: RobmatConfig,
    pub exact_length: ExactLengthConfig,
    /// Abort on the first failed inequality instead of recording it.
    pub strict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BalanceCase {
    /// Type 1 accepted; nothing removed.
    TypeOne,
    /// `|X| = |Y|` after moving `Z_0`.
    Balanced,
    /// `k >= 400 r ln n`: cycles in `X` only.
    LargeK,
    /// `k < 400 r ln n`: cycles in `X` plus one `l`-cycle in `Y`.
    SmallK,
}

/// Set sizes met on the way, for the report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StructuralTrace {
    pub s0: usize,
    pub s0_edges: usize,
    pub s1: usize,
    pub s2: usize,
    pub t: usize,
    pub z: usize,
    pub z_moved: usize,
    pub x: usize,
    pub y: usize,
}

#[derive(Debug, Clone)]
pub struct StructuralDecomposition {
    /// Removed pieces, in host ids.
    pub cycles: CycleFamily,
    /// The remainder, relabelled `0..|V(H)|`.
    pub h: ColouredGraph,
    /// `host[i]` is the vertex of `G` behind vertex `i` of `h`.
    pub host: Vec<usize>,
    /// Sides of `h` for type 2 (`true` is `A`).
    pub bipartition: Option<Vec<bool>>,
    pub robmat_type: RobmatType,
    pub case: BalanceCase,
    pub k: usize,
    pub ell: Option<usize>,
    pub ell_parts: Vec<usize>,
    pub trace: Option<StructuralTrace>,
    pub checks: Vec<Check>,
}

fn mask(n: usize, set: &[usize]) -> Vec<bool> {
    let mut m = vec![false; n];
    set.iter().for_each(|&v| m[v] = true);
    m
}

fn inner_edges(g: &SimpleGraph, set: &[usize]) -> usize {
    let m = mask(g.order(), set);
    set.iter().map(|&v| g.degree_into(v, &m)).sum::<usize>() / 2
}

/// Trims `set` to `size` by dropping the vertex of largest inner degree, or
/// pads it with the outside vertex of smallest degree into it.
fn resize(g: &SimpleGraph, set: &[usize], size: usize) -> Vec<usize> {
    let n = g.order();
    let mut inside = mask(n, set);
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree_into(v, &inside)).collect();
    let mut count = set.len();
    while count > size {
        let v = (0..n)
            .filter(|&v| inside[v])
            .max_by_key(|&v| (deg[v], std::cmp::Reverse(v)))
            .expect("nonempty");
        inside[v] = false;
        count -= 1;
        for u in g.neighbours(v) {
            deg[u] -= 1;
        }
    }
    while count < size {
        let v = (0..n)
            .filter(|&v| !inside[v])
            .min_by_key(|&v| (deg[v], v))
            .expect("room to pad");
        inside[v] = true;
        count += 1;
        for u in g.neighbours(v) {
            deg[u] += 1;
        }
    }
    (0..n).filter(|&v| inside[v]).collect()
}

/// Writes `total` as a sum of at most `max_t` even parts in `[lo, hi]`,
/// each at least 4.
pub(crate) fn even_parts(total: usize, lo: f64, hi: f64, max_t: usize) -> Option<Vec<usize>> {
    if total == 0 {
        return Some(Vec::new());
    }
    let lo_e = ((lo.ceil() as usize).max(4)).next_multiple_of(2);
    let hi_e = hi.floor() as usize / 2 * 2;
    if total % 2 == 1 || lo_e > hi_e {
        return None;
    }
    let t = (1..=max_t).find(|&t| t * lo_e <= total && total <= t * hi_e)?;
    let halves = total / 2;
    let (base, extra) = (halves / t, halves % t);
    Some((0..t).map(|i| 2 * (base + usize::from(i < extra))).collect())
}

fn majority_colour(g: &ColouredGraph) -> Colour {
    let mut count = vec![0usize; g.colours() as usize + 1];
    for (_, _, c) in g.edges() {
        count[c as usize] += 1;
    }
    (1..=g.colours())
        .max_by_key(|&c| (count[c as usize], std::cmp::Reverse(c)))
        .unwrap_or(1)
}

/// An `len`-cycle in the majority colour of `G[pool]`, in host ids.
fn cycle_in(
    g: &ColouredGraph,
    pool: &[usize],
    len: usize,
    cfg: &ExactLengthConfig,
) -> Result<CyclePiece, PipelineError> {
    let sub = g.induced(pool);
    let c = majority_colour(&sub.graph);
    let found = exact_length_cycle(&sub.graph, Some(c), len, cfg).map_err(staged("balancing"))?;
    let cycle = found.ok_or_else(|| PipelineError::Stage {
        stage: "balancing".into(),
        detail: format!("exact-length search exhausted for a colour-{c} cycle of length {len}"),
    })?;
    Ok(CyclePiece::Cycle {
        vertices: cycle.into_iter().map(|v| sub.host[v]).collect(),
        colour: c,
    })
}

fn identity(g: &ColouredGraph, checks: Checks) -> StructuralDecomposition {
    StructuralDecomposition {
        cycles: CycleFamily::default(),
        h: g.clone(),
        host: (0..g.order()).collect(),
        bipartition: None,
        robmat_type: RobmatType::One,
        case: BalanceCase::TypeOne,
        k: 0,
        ell: None,
        ell_parts: Vec::new(),
        trace: None,
        checks: checks.list,
    }
}

pub fn structural_decompose(
    g: &ColouredGraph,
    ledger: &ParameterLedger,
    cfg: &StructuralConfig,
) -> Result<StructuralDecomposition, PipelineError> {
    let n = g.order();
    if n != ledger.n {
        return Err(PipelineError::Precondition(format!(
            "ledger is for n = {}, graph has {n}",
            ledger.n
        )));
    }
    let nf = n as f64;
    let r = ledger.r as f64;
    let ln_n = nf.ln();
    let mu = ledger.mu;
    let muf = to_f64(&mu);
    let nu = int(20) * mu;
    let under = g.underlying();
    let mut checks = Checks::new(cfg.strict);

    let delta = under.min_degree();
    if 2 * delta < n {
        return Err(PipelineError::Precondition(format!("delta(G) = {delta} is below n/2")));
    }
    let bar = nf / 2.0 + 1200.0 * r * ln_n;
    let degree_ok = delta as f64 >= bar;
    checks.list.push(Check {
        stage: "structural".into(),
        name: "delta(G) >= n/2 + 1200 r ln n".into(),
        lhs: delta as f64,
        rhs: bar,
        holds: degree_ok,
    });
    if !degree_ok && !ledger.desk_override {
        return Err(PipelineError::Precondition(format!(
            "delta(G) = {delta} is below {bar:.1}"
        )));
    }

    let mut robmat_cfg = cfg.robmat;
    robmat_cfg.seed = derive_seed(cfg.seed, 1);
    let first = check_robmat(&under, &mu, &nu, RobmatType::One, None, &robmat_cfg)?;
    if first.accepted {
        return Ok(identity(g, checks));
    }
    let s0 = match first.witness {
        Some(RobmatWitness::SparseSet { set, .. }) => set,
        other => {
            return Err(PipelineError::Stage {
                stage: "structural".into(),
                detail: format!("type-1 rejection without a sparse set: {other:?}"),
            })
        }
    };

    // S_0 of size (1/2 - 20 mu) n spanning fewer than 20 mu n^2 edges
    let nn = int(n);
    let s0_size = ((ratio(1, 2) - int(20) * mu) * nn).floor().to_integer() as usize;
    let s0 = resize(&under, &s0, s0_size);
    let s0_edges = inner_edges(&under, &s0);
    checks.record(
        "structural",
        "e(S0) < 20 mu n^2",
        s0_edges as f64,
        20.0 * muf * nf * nf,
        int(s0_edges) < int(20) * mu * nn * nn,
    )?;

    let s1_size = ((ratio(1, 2) - int(500) * mu) * nn).floor().to_integer().max(0) as usize;
    let s1 = resize(&under, &s0, s1_size.min(s0.len()));
    let s1_mask = mask(n, &s1);
    let s1_max = s1.iter().map(|&v| under.degree_into(v, &s1_mask)).max().unwrap_or(0);
    checks.record(
        "structural",
        "Delta(G[S1]) <= n/12",
        s1_max as f64,
        nf / 12.0,
        12 * s1_max <= n,
    )?;

    let (t, s2): (Vec<usize>, Vec<usize>) = (0..n)
        .filter(|&v| !s1_mask[v])
        .partition(|&v| 5 * under.degree_into(v, &s1_mask) >= 2 * n);
    checks.record(
        "structural",
        "q = |S2| <= 5400 mu n",
        s2.len() as f64,
        5400.0 * muf * nf,
        int(s2.len()) <= int(5400) * mu * nn,
    )?;

    let mut s: Vec<usize> = s1.iter().chain(&s2).copied().collect();
    s.sort_unstable();
    let t_len = t.len();
    let (x0, y0) = if s.len() >= t_len { (s, t) } else { (t, s) };
    let half_up = n.div_ceil(2);
    let k0 = x0.len() - half_up;
    let x0_mask = mask(n, &x0);
    let z: Vec<usize> = x0
        .iter()
        .copied()
        .filter(|&v| 16 * under.degree_into(v, &x0_mask) >= n)
        .collect();
    let z0: Vec<usize> = z.iter().copied().take(k0).collect();
    let z0_mask = mask(n, &z0);
    let x: Vec<usize> = x0.iter().copied().filter(|&v| !z0_mask[v]).collect();
    let mut y: Vec<usize> = y0.iter().chain(&z0).copied().collect();
    y.sort_unstable();
    let trace = StructuralTrace {
        s0: s0.len(),
        s0_edges,
        s1: s1.len(),
        s2: s2.len(),
        t: t_len,
        z: z.len(),
        z_moved: z0.len(),
        x: x.len(),
        y: y.len(),
    };

    let x_mask = mask(n, &x);
    let y_mask = mask(n, &y);
    let cross_min = (0..n)
        .map(|v| under.degree_into(v, if x_mask[v] { &y_mask } else { &x_mask }))
        .min()
        .unwrap_or(0);
    checks.record(
        "structural",
        "|Y| >= n/2 - 5400 mu n",
        y.len() as f64,
        nf / 2.0 - 5400.0 * muf * nf,
        int(y.len()) >= nn / int(2) - int(5400) * mu * nn,
    )?;
    checks.record(
        "structural",
        "delta(G[X,Y]) >= n/16 - 10800 mu n",
        cross_min as f64,
        nf / 16.0 - 10800.0 * muf * nf,
        int(cross_min) >= nn / int(16) - int(10800) * mu * nn,
    )?;
    if 2 * x.len() > n {
        let x_max = x.iter().map(|&v| under.degree_into(v, &x_mask)).max().unwrap_or(0);
        checks.record(
            "structural",
            "Delta(G[X]) <= n/16",
            x_max as f64,
            nf / 16.0,
            16 * x_max <= n,
        )?;
    }

    let mut cycles = CycleFamily::default();
    let k = x.len() - half_up;
    let mut ell = None;
    let mut parts = Vec::new();
    let case = if x.len() == y.len() {
        BalanceCase::Balanced
    } else {
        let mut el_cfg = cfg.exact_length;
        let large = k as f64 >= 400.0 * r * ln_n;
        let split = if large {
            let (lo, hi, max_t) = (
                k as f64 / (400.0 * r),
                k as f64 / (200.0 * r),
                400 * ledger.r as usize + 1,
            );
            even_parts(2 * k, lo, hi, max_t).ok_or_else(|| PipelineError::Stage {
                stage: "balancing".into(),
                detail: format!(
                    "{} is not a sum of at most {max_t} even parts in [{lo:.2}, {hi:.2}]",
                    2 * k
                ),
            })?
        } else {
            // smallest admissible even ell for which ell + 2k splits
            let max_t = 200 * ledger.r as usize + 1;
            let first = (ln_n.ceil() as usize).next_multiple_of(2).max(4);
            let found = (first..=(2.0 * ln_n).floor().max(first as f64) as usize)
                .step_by(2)
                .find_map(|l| even_parts(l + 2 * k, ln_n, 2.0 * ln_n, max_t).map(|p| (l, p)));
            let (l, p) = found.ok_or_else(|| PipelineError::Stage {
                stage: "balancing".into(),
                detail: format!(
                    "no even ell in [{ln_n:.2}, {:.2}] makes ell + {} a sum of parts in that range",
                    2.0 * ln_n,
                    2 * k
                ),
            })?;
            ell = Some(l);
            p
        };
        parts = split;
        let mut used = vec![false; n];
        if let Some(l) = ell {
            el_cfg.seed = derive_seed(cfg.seed, 100);
            let c = cycle_in(g, &y, l, &el_cfg)?;
            c.vertices().iter().for_each(|&v| used[v] = true);
            cycles.pieces.push(c);
        }
        for (i, &li) in parts.iter().enumerate() {
            let pool: Vec<usize> = x.iter().copied().filter(|&v| !used[v]).collect();
            el_cfg.seed = derive_seed(cfg.seed, 200 + i as u64);
            let c = cycle_in(g, &pool, li, &el_cfg)?;
            c.vertices().iter().for_each(|&v| used[v] = true);
            cycles.pieces.push(c);
        }
        if large {
            BalanceCase::LargeK
        } else {
            BalanceCase::SmallK
        }
    };
    if n % 2 == 1 {
        let covered = mask(n, &cycles.covered());
        let v = *x.iter().find(|&&v| !covered[v]).expect("X has uncovered vertices");
        cycles.pieces.push(CyclePiece::Singleton { v });
    }
    let piece_bar = match case {
        BalanceCase::LargeK => 400 * ledger.r as usize + 2,
        _ => 200 * ledger.r as usize + 3,
    };
    checks.record(
        "structural",
        "pieces in C within the case bound",
        cycles.count() as f64,
        piece_bar as f64,
        cycles.count() <= piece_bar,
    )?;

    let covered = mask(n, &cycles.covered());
    let a: Vec<usize> = x.iter().copied().filter(|&v| !covered[v]).collect();
    let b: Vec<usize> = y.iter().copied().filter(|&v| !covered[v]).collect();
    if a.len() != b.len() {
        return Err(PipelineError::Stage {
            stage: "balancing".into(),
            detail: format!("sides end at {} and {}", a.len(), b.len()),
        });
    }
    let host: Vec<usize> = a.iter().chain(&b).copied().collect();
    let mut local = vec![usize::MAX; n];
    for (i, &v) in host.iter().enumerate() {
        local[v] = i;
    }
    let b_mask = mask(n, &b);
    let mut edges = Vec::new();
    for (i, &v) in a.iter().enumerate() {
        for (u, c) in g.neighbours(v) {
            if b_mask[u] {
                edges.push((i, local[u], c));
            }
        }
    }
    let h = ColouredGraph::from_edges(host.len(), g.colours(), edges)?;
    let side: Vec<bool> = (0..host.len()).map(|i| i < a.len()).collect();
    checks.record(
        "structural",
        "|V(H)| >= n/2",
        host.len() as f64,
        nf / 2.0,
        2 * host.len() >= n,
    )?;

    robmat_cfg.seed = derive_seed(cfg.seed, 2);
    let again = check_robmat(&h.underlying(), &mu, &nu, RobmatType::Two, Some(&side), &robmat_cfg)?;
    if !again.accepted {
        return Err(PipelineError::Stage {
            stage: "structural".into(),
            detail: format!("remainder fails the type-2 re-check: {:?}", again.witness),
        });
    }

    Ok(StructuralDecomposition {
        cycles,
        h,
        host,
        bipartition: Some(side),
        robmat_type: RobmatType::Two,
        case,
        k,
        ell,
        ell_parts: parts,
        trace: Some(trace),
        checks: checks.list,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::planted_two_stage;
    use crate::graph::validate_family;

    fn ledger(n: usize) -> ParameterLedger {
        ParameterLedger::new(
            ratio(1, 240),
            ratio(1, 5000),
            ratio(1, 10_000),
            ratio(1, 20_000),
            2,
            n,
            true,
        )
        .unwrap()
    }

    #[test]
    fn parts_respect_bounds() {
        let p = even_parts(30, 7.6, 15.2, 5).unwrap();
        assert_eq!(p.iter().sum::<usize>(), 30);
        assert!(p.iter().all(|&x| x % 2 == 0 && (8..=14).contains(&x)));
        assert!(even_parts(6, 7.6, 15.2, 5).is_none());
    }

    #[test]
    fn complete_graph_is_left_alone() {
        let g = ColouredGraph::complete(40, 2, 1);
        let d = structural_decompose(&g, &ledger(40), &StructuralConfig::default()).unwrap();
        assert_eq!(d.case, BalanceCase::TypeOne);
        assert_eq!(d.cycles.count(), 0);
        assert_eq!(d.h.order(), 40);
    }

    #[test]
    fn planted_imbalance_is_removed() {
        let n = 600;
        let inst = planted_two_stage(n, 3, 2, 30, 11).unwrap();
        let d = structural_decompose(&inst.g, &ledger(n), &StructuralConfig::default()).unwrap();
        assert_eq!(d.case, BalanceCase::SmallK);
        assert_eq!(d.k, 3);
        let side = d.bipartition.as_ref().unwrap();
        let a = side.iter().filter(|&&s| s).count();
        assert_eq!(2 * a, d.h.order());
        assert!(validate_family(&inst.g, &d.cycles, false).accepted);
        assert_eq!(d.cycles.covered().len() + d.h.order(), n);
    }
}
