//! Seeded instance generators with planted ground truth.
//!
//! Every generator is a pure function of its arguments and seed. Metadata
//! records what was planted so tests can compare against it.

use rand::seq::SliceRandom;
use rand::Rng as _;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::{Colour, ColouredGraph, GraphError, SimpleGraph};
use crate::rational::Rational;
use crate::regularity::{ClusterPartition, RegularityError};
use crate::{rng_from_seed, Rng};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GeneratorError {
    #[error("infeasible parameters: {0}")]
    Parameters(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Regularity(#[from] RegularityError),
}

/// One dense pair of the blow-up: edges between clusters `i` and `j` appear
/// independently with probability `density` in colour `colour`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairSpec {
    pub i: usize,
    pub j: usize,
    pub colour: Colour,
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlowUpSpec {
    pub m: usize,
    pub cluster_size: usize,
    pub r: Colour,
    pub pairs: Vec<PairSpec>,
    /// Side of each cluster when the instance is meant to be bipartite.
    pub sides: Option<Vec<bool>>,
    #[serde(with = "crate::rational::text")]
    pub eps: Rational,
    #[serde(with = "crate::rational::text")]
    pub d: Rational,
}

#[derive(Debug, Clone)]
pub struct BlowUpInstance {
    pub g: ColouredGraph,
    pub clusters: ClusterPartition,
    /// Vertex sides, present when `sides` was given.
    pub bipartition: Option<Vec<bool>>,
}

fn check_density(p: f64) -> Result<(), GeneratorError> {
    if !(0.0..=1.0).contains(&p) {
        return Err(GeneratorError::Parameters(format!("density {p} is not in [0, 1]")));
    }
    Ok(())
}

/// Cluster `i` holds vertices `i * s .. (i + 1) * s`; `V_0` is empty.
pub fn blow_up(spec: &BlowUpSpec, seed: u64) -> Result<BlowUpInstance, GeneratorError> {
    let (m, s) = (spec.m, spec.cluster_size);
    if m == 0 || s == 0 {
        return Err(GeneratorError::Parameters("need at least one nonempty cluster".into()));
    }
    if let Some(sides) = &spec.sides {
        if sides.len() != m {
            return Err(GeneratorError::Parameters(format!(
                "{} sides for {m} clusters",
                sides.len()
            )));
        }
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for p in &spec.pairs {
        check_density(p.density)?;
        if p.i >= m || p.j >= m || p.i == p.j {
            return Err(GeneratorError::Parameters(format!("bad pair ({}, {})", p.i, p.j)));
        }
        if let Some(sides) = &spec.sides {
            if sides[p.i] == sides[p.j] {
                return Err(GeneratorError::Parameters(format!(
                    "pair ({}, {}) lies inside one side",
                    p.i, p.j
                )));
            }
        }
        for a in p.i * s..(p.i + 1) * s {
            for b in p.j * s..(p.j + 1) * s {
                if p.density >= 1.0 || rng.gen_bool(p.density) {
                    edges.push((a, b, p.colour));
                }
            }
        }
    }
    let n = m * s;
    let g = ColouredGraph::from_edges_keep_first(n, spec.r, edges)?;
    let clusters = (0..m).map(|i| (i * s..(i + 1) * s).collect()).collect();
    let clusters = ClusterPartition::new(n, Vec::new(), clusters, spec.eps, spec.d)?;
    let bipartition = spec.sides.as_ref().map(|sides| (0..n).map(|v| sides[v / s]).collect());
    Ok(BlowUpInstance {
        g,
        clusters,
        bipartition,
    })
}

/// Balanced bipartite blow-up on `m` clusters (even indices on side `true`)
/// with every cross pair dense in one random colour.
pub fn bipartite_blow_up(
    m: usize,
    cluster_size: usize,
    r: Colour,
    density: f64,
    eps: Rational,
    d: Rational,
    seed: u64,
) -> Result<BlowUpInstance, GeneratorError> {
    if m < 2 || m % 2 == 1 {
        return Err(GeneratorError::Parameters(format!(
            "m = {m} must be even and at least 2"
        )));
    }
    let mut rng = rng_from_seed(seed ^ 0x5eed);
    let sides: Vec<bool> = (0..m).map(|i| i % 2 == 0).collect();
    let mut pairs = Vec::new();
    for i in 0..m {
        for j in i + 1..m {
            if sides[i] != sides[j] {
                pairs.push(PairSpec {
                    i,
                    j,
                    colour: rng.gen_range(1..=r),
                    density,
                });
            }
        }
    }
    let spec = BlowUpSpec {
        m,
        cluster_size,
        r,
        pairs,
        sides: Some(sides),
        eps,
        d,
    };
    blow_up(&spec, seed)
}

/// `G(n, density)` with independent uniform colours; robustly matchable of
/// type 1 for any fixed density above one half once `n` is moderate.
pub fn robmat_type1(n: usize, r: Colour, density: f64, seed: u64) -> Result<ColouredGraph, GeneratorError> {
    check_density(density)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=r)));
            }
        }
    }
    Ok(ColouredGraph::from_edges(n, r, edges)?)
}

/// Random balanced bipartite graph on `n` vertices (first half is side
/// `true`) with independent uniform colours.
pub fn robmat_type2(
    n: usize,
    r: Colour,
    density: f64,
    seed: u64,
) -> Result<(ColouredGraph, Vec<bool>), GeneratorError> {
    check_density(density)?;
    if n % 2 == 1 {
        return Err(GeneratorError::Parameters(format!("n = {n} must be even")));
    }
    let half = n / 2;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..half {
        for v in half..n {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=r)));
            }
        }
    }
    let side = (0..n).map(|v| v < half).collect();
    Ok((ColouredGraph::from_edges(n, r, edges)?, side))
}

/// Degree targets for the b-matching suite: values in
/// `[(1 - gamma) b_max, b_max]`, equal sums across a bipartition and an
/// even total.
pub fn b_targets(
    n: usize,
    b_max: u64,
    gamma: &Rational,
    bipartition: Option<&[bool]>,
    seed: u64,
) -> Result<Vec<u64>, GeneratorError> {
    let low_q = (Rational::from_integer(1) - gamma) * Rational::from_integer(b_max as i128);
    let low = low_q.ceil().to_integer().max(0) as u64;
    if low > b_max || b_max == 0 {
        return Err(GeneratorError::Parameters(format!(
            "empty target range [{low}, {b_max}]"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut b: Vec<u64> = (0..n).map(|_| rng.gen_range(low..=b_max)).collect();
    match bipartition {
        Some(side) => {
            let left: Vec<usize> = (0..n).filter(|&v| side[v]).collect();
            let right: Vec<usize> = (0..n).filter(|&v| !side[v]).collect();
            if left.len() != right.len() {
                return Err(GeneratorError::Parameters("bipartition is not balanced".into()));
            }
            let mut values: Vec<u64> = left.iter().map(|&v| b[v]).collect();
            values.shuffle(&mut rng);
            for (&v, &x) in right.iter().zip(&values) {
                b[v] = x;
            }
        }
        None => {
            if b.iter().sum::<u64>() % 2 == 1 {
                let v = rng.gen_range(0..n);
                b[v] = if b[v] < b_max { b[v] + 1 } else { b[v] - 1 };
                if b[v] < low {
                    return Err(GeneratorError::Parameters(
                        "cannot fix the parity inside the range".into(),
                    ));
                }
            }
        }
    }
    Ok(b)
}

/// Bipartite host for the EGP cover: vertices `0..a_size` form `A`, the
/// rest `B`. Each `B`-vertex gets a dominant colour and joins a random
/// `density` fraction of `A` in it, plus sparse noise in other colours.
#[derive(Debug, Clone)]
pub struct EgpInstance {
    pub h: ColouredGraph,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
    pub dominant: Vec<Colour>,
}

pub fn egp_instance(
    r: Colour,
    a_size: usize,
    b_size: usize,
    density: f64,
    seed: u64,
) -> Result<EgpInstance, GeneratorError> {
    check_density(density)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    let mut dominant = Vec::with_capacity(b_size);
    for x in a_size..a_size + b_size {
        let c = rng.gen_range(1..=r);
        dominant.push(c);
        for y in 0..a_size {
            if rng.gen_bool(density) {
                edges.push((x, y, c));
            } else if r > 1 && rng.gen_bool(density / 10.0) {
                let other = (c % r) + 1;
                edges.push((x, y, other));
            }
        }
    }
    let h = ColouredGraph::from_edges(a_size + b_size, r, edges)?;
    Ok(EgpInstance {
        h,
        a: (0..a_size).collect(),
        b: (a_size..a_size + b_size).collect(),
        dominant,
    })
}

/// What was planted in a two-stage instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwoStageTruth {
    pub n: usize,
    /// `X_0 = 0..x_size`, `Y_0 = x_size..n`.
    pub x_size: usize,
    /// `|X_0| - ceil(n / 2)`.
    pub k: usize,
    /// Colour of every `X_0`-`Y_0` edge.
    pub cross_colour: Colour,
    /// Colour of the sparse structure inside each side.
    pub inner_colour: Colour,
    pub hamiltonian_cycles: usize,
    /// Clique planted on the first `blob` vertices of each side.
    pub blob: usize,
}

#[derive(Debug, Clone)]
pub struct TwoStageInstance {
    pub g: ColouredGraph,
    pub truth: TwoStageTruth,
}

/// `count` edge-disjoint Hamiltonian cycles on `vertices`: circulants with
/// distinct steps coprime to the length, on a random relabelling.
fn disjoint_hamiltonian_cycles(
    vertices: &[usize],
    count: usize,
    rng: &mut Rng,
) -> Result<Vec<(usize, usize)>, GeneratorError> {
    let len = vertices.len();
    let gcd = |mut a: usize, mut b: usize| {
        while b != 0 {
            (a, b) = (b, a % b);
        }
        a
    };
    let mut steps: Vec<usize> = (1..len.div_ceil(2)).filter(|&s| gcd(s, len) == 1).collect();
    if steps.len() < count {
        return Err(GeneratorError::Parameters(format!(
            "{len} vertices carry only {} disjoint circulant Hamiltonian cycles",
            steps.len()
        )));
    }
    steps.shuffle(rng);
    let mut order = vertices.to_vec();
    order.shuffle(rng);
    Ok(steps[..count]
        .iter()
        .flat_map(|&s| {
            let order = &order;
            (0..len).map(move |i| (order[i], order[(i + s) % len]))
        })
        .collect())
}

/// Unbalanced two-coloured instance: `X_0`-`Y_0` complete in colour 1;
/// inside each side colour 2 forms `h` edge-disjoint Hamiltonian cycles plus a
/// clique on `blob` vertices. With `2h >= k` every vertex has degree at
/// least `n/2`. For small `h` (2 at `n = 2000`, `nu = 1/1200`) `X_0` is
/// sparse enough to reject type 1, and the cliques hold the short even
/// cycles that balance the sides.
pub fn planted_two_stage(
    n: usize,
    k: usize,
    hamiltonian_cycles: usize,
    blob: usize,
    seed: u64,
) -> Result<TwoStageInstance, GeneratorError> {
    let x_size = n.div_ceil(2) + k;
    if x_size >= n || n - x_size < 3 {
        return Err(GeneratorError::Parameters(format!("k = {k} leaves Y_0 too small")));
    }
    let y_size = n - x_size;
    if 2 * hamiltonian_cycles + y_size < n.div_ceil(2) {
        return Err(GeneratorError::Parameters(format!(
            "{hamiltonian_cycles} Hamiltonian cycles cannot lift X_0 degrees to n/2 with k = {k}"
        )));
    }
    if blob > y_size {
        return Err(GeneratorError::Parameters(format!(
            "blob {blob} exceeds |Y_0| = {y_size}"
        )));
    }
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for x in 0..x_size {
        edges.extend((x_size..n).map(|y| (x, y, 1)));
    }
    for side in [(0..x_size).collect::<Vec<_>>(), (x_size..n).collect()] {
        let cycles = disjoint_hamiltonian_cycles(&side, hamiltonian_cycles, &mut rng)?;
        edges.extend(cycles.into_iter().map(|(u, v)| (u, v, 2)));
        for (i, &u) in side[..blob].iter().enumerate() {
            edges.extend(side[i + 1..blob].iter().map(|&v| (u, v, 2)));
        }
    }
    let g = ColouredGraph::from_edges_keep_first(n, 2, edges)?;
    Ok(TwoStageInstance {
        g,
        truth: TwoStageTruth {
            n,
            x_size,
            k,
            cross_colour: 1,
            inner_colour: 2,
            hamiltonian_cycles,
            blob,
        },
    })
}

/// Uncoloured `G(n, p)`, used for the exact-length regime.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<SimpleGraph, GeneratorError> {
    check_density(p)?;
    let mut rng = rng_from_seed(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    Ok(SimpleGraph::from_edges(n, edges))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matching::{check_robmat, RobmatConfig, RobmatType};
    use crate::rational::ratio;

    #[test]
    fn density_one_blow_up_is_complete_bipartite() {
        let spec = BlowUpSpec {
            m: 2,
            cluster_size: 5,
            r: 1,
            pairs: vec![PairSpec {
                i: 0,
                j: 1,
                colour: 1,
                density: 1.0,
            }],
            sides: Some(vec![true, false]),
            eps: ratio(1, 10),
            d: ratio(1, 2),
        };
        let inst = blow_up(&spec, 1).unwrap();
        assert_eq!(inst.g.size(), 25);
        assert!((0..5).all(|u| (5..10).all(|v| inst.g.colour(u, v) == Some(1))));
    }

    #[test]
    fn type2_generator_passes_the_checker() {
        let (g, side) = robmat_type2(128, 2, 0.9, 4).unwrap();
        let mu = ratio(1, 2000);
        let v = check_robmat(
            &g.underlying(),
            &mu,
            &mu,
            RobmatType::Two,
            Some(&side),
            &RobmatConfig::default(),
        )
        .unwrap();
        assert!(v.accepted);
    }

    #[test]
    fn b_targets_are_balanced_and_in_range() {
        let side: Vec<bool> = (0..40).map(|v| v < 20).collect();
        let b = b_targets(40, 50, &ratio(1, 10), Some(&side), 3).unwrap();
        assert!(b.iter().all(|&x| (45..=50).contains(&x)));
        let left: u64 = (0..20).map(|v| b[v]).sum();
        let right: u64 = (20..40).map(|v| b[v]).sum();
        assert_eq!(left, right);
        let b1 = b_targets(41, 50, &ratio(1, 10), None, 3).unwrap();
        assert_eq!(b1.iter().sum::<u64>() % 2, 0);
    }

    #[test]
    fn two_stage_has_half_minimum_degree() {
        let inst = planted_two_stage(400, 3, 2, 12, 7).unwrap();
        assert!(inst.g.min_degree() >= 200);
        assert_eq!(inst.truth.x_size, 203);
        assert!(planted_two_stage(400, 6, 2, 12, 7).is_err());
        for seed in 0..10 {
            let tight = planted_two_stage(600, 4, 2, 0, seed).unwrap();
            assert_eq!(tight.g.min_degree(), 300);
        }
    }

    #[test]
    fn generators_are_deterministic() {
        assert_eq!(
            robmat_type1(30, 3, 0.7, 5).unwrap(),
            robmat_type1(30, 3, 0.7, 5).unwrap()
        );
        let a = planted_two_stage(200, 2, 2, 10, 1).unwrap();
        let b = planted_two_stage(200, 2, 2, 10, 1).unwrap();
        assert_eq!(a.g, b.g);
    }
}
