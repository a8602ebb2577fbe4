//! Per-row artifacts: how to rebuild the instance, and what was emitted.
//! Validation reads these back and recomputes every verdict.

use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use monocycle::constructions::{build_degree_lower_bound, DegreeConfig};
use monocycle::covers::{check_clauses, BlowUpHost, CompleteHost, SampleHost};
use monocycle::generators::{bipartite_blow_up, egp_instance, gnp, planted_two_stage, robmat_type1, robmat_type2};
use monocycle::graph::io::{parse_text, to_text};
use monocycle::graph::oracles::{exhaustive_b_weighting, independence_number};
use monocycle::graph::validate_family;
use monocycle::matching::EdgeWeighting;
use monocycle::regularity::ClusterPartition;
use monocycle::{Colour, ColouredGraph, CycleFamily, CyclePiece, Rational, SimpleGraph};
use serde::{Deserialize, Serialize};

use crate::suite::{component_construction, component_verdict, degree_verdict};
use crate::CliError;

/// A deterministic recipe for the input of one row. Rationals are stored as
/// text: tagged enums buffer their fields, and the buffer has no 128-bit
/// integers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Instance {
    /// Small graphs are stored in full, in the text edge-list format.
    Inline {
        text: String,
    },
    Gnp {
        n: usize,
        p: f64,
        seed: u64,
    },
    RobmatType1 {
        n: usize,
        r: Colour,
        density: f64,
        seed: u64,
    },
    RobmatType2 {
        n: usize,
        r: Colour,
        density: f64,
        seed: u64,
    },
    Egp {
        r: Colour,
        a_size: usize,
        b_size: usize,
        density: f64,
        seed: u64,
    },
    Planted {
        n: usize,
        k: usize,
        h: usize,
        blob: usize,
        seed: u64,
    },
    CompleteHost {
        n: usize,
        m: usize,
    },
    BlowUpHost {
        sizes: Vec<usize>,
        joined: Vec<Vec<bool>>,
    },
    BipartiteBlowUp {
        m: usize,
        cluster_size: usize,
        r: Colour,
        density: f64,
        #[serde(with = "monocycle::rational::text")]
        eps: Rational,
        #[serde(with = "monocycle::rational::text")]
        d: Rational,
        seed: u64,
    },
    DegreeLb {
        n: usize,
        seed: u64,
    },
    ComponentLb {
        rm1: usize,
        #[serde(with = "monocycle::rational::text")]
        eps: Rational,
    },
}

impl Instance {
    pub fn inline(g: &ColouredGraph) -> Self {
        Instance::Inline { text: to_text(g) }
    }

    pub fn graph(&self) -> Result<Option<ColouredGraph>, CliError> {
        let fail = |e: &dyn std::fmt::Display| CliError::Failed(format!("cannot rebuild instance: {e}"));
        Ok(Some(match self {
            Instance::Inline { text } => parse_text(text).map_err(|e| fail(&e))?,
            Instance::Gnp { n, p, seed } => {
                ColouredGraph::from_simple(&gnp(*n, *p, *seed).map_err(|e| fail(&e))?, 1, 1)
            }
            Instance::RobmatType1 { n, r, density, seed } => {
                robmat_type1(*n, *r, *density, *seed).map_err(|e| fail(&e))?
            }
            Instance::RobmatType2 { n, r, density, seed } => {
                robmat_type2(*n, *r, *density, *seed).map_err(|e| fail(&e))?.0
            }
            Instance::Egp {
                r,
                a_size,
                b_size,
                density,
                seed,
            } => {
                egp_instance(*r, *a_size, *b_size, *density, *seed)
                    .map_err(|e| fail(&e))?
                    .h
            }
            Instance::Planted { n, k, h, blob, seed } => {
                planted_two_stage(*n, *k, *h, *blob, *seed).map_err(|e| fail(&e))?.g
            }
            Instance::BipartiteBlowUp {
                m,
                cluster_size,
                r,
                density,
                eps,
                d,
                seed,
            } => {
                bipartite_blow_up(*m, *cluster_size, *r, *density, *eps, *d, *seed)
                    .map_err(|e| fail(&e))?
                    .g
            }
            Instance::DegreeLb { n, seed } => build_degree_lower_bound(*n, *seed, &DegreeConfig::default())
                .map_err(|e| fail(&e))?
                .to_coloured(),
            Instance::ComponentLb { rm1, eps } => component_construction(*rm1, eps).map_err(|e| fail(&e))?.g,
            Instance::CompleteHost { .. } | Instance::BlowUpHost { .. } => return Ok(None),
        }))
    }

    /// The sampling host and its cluster partition.
    pub fn host(&self) -> Result<(Box<dyn SampleHost>, ClusterPartition), CliError> {
        let fail = |e: &dyn std::fmt::Display| CliError::Failed(format!("cannot rebuild host: {e}"));
        let blocks = |sizes: &[usize]| {
            let mut at = 0;
            sizes
                .iter()
                .map(|&s| {
                    at += s;
                    (at - s..at).collect::<Vec<usize>>()
                })
                .collect::<Vec<_>>()
        };
        let whatever = |n, clusters| {
            ClusterPartition::new(n, Vec::new(), clusters, Rational::new(1, 20), Rational::new(1, 10))
                .map_err(|e| fail(&e))
        };
        match self {
            Instance::CompleteHost { n, m } => {
                let cp = whatever(*n, blocks(&vec![n / m; *m]))?;
                Ok((Box::new(CompleteHost { n: *n }), cp))
            }
            Instance::BlowUpHost { sizes, joined } => {
                let cp = whatever(sizes.iter().sum(), blocks(sizes))?;
                Ok((
                    Box::new(BlowUpHost {
                        sizes: sizes.clone(),
                        joined: joined.clone(),
                    }),
                    cp,
                ))
            }
            Instance::BipartiteBlowUp {
                m,
                cluster_size,
                r,
                density,
                eps,
                d,
                seed,
            } => {
                let inst = bipartite_blow_up(*m, *cluster_size, *r, *density, *eps, *d, *seed).map_err(|e| fail(&e))?;
                Ok((Box::new(inst.g), inst.clusters))
            }
            _ => Err(CliError::Failed("instance is not a sampling host".into())),
        }
    }
}

pub type Weights = Vec<(usize, usize, u64)>;

pub fn weights_of(w: &EdgeWeighting) -> Weights {
    w.weights.iter().map(|(&(u, v), &x)| (u, v, x)).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Output {
    TwoMatching {
        found: bool,
        weights: Weights,
        obstruction: Vec<usize>,
    },
    /// A perfect 2-matching when the checker accepted.
    Robmat {
        accepted: bool,
        weights: Weights,
    },
    BMatching {
        b: Vec<u64>,
        weights: Weights,
    },
    Family {
        family: CycleFamily,
        require_partition: bool,
        must_cover: Vec<usize>,
        bound: Option<f64>,
        bound_is_alpha: bool,
    },
    Cycle {
        vertices: Vec<usize>,
        colour: Option<Colour>,
        length: usize,
    },
    Sample {
        forbidden: Vec<usize>,
        a: Vec<usize>,
        #[serde(with = "monocycle::rational::text")]
        p: Rational,
    },
    Certificate {
        holds: bool,
        certificate: serde_json::Value,
    },
    /// The row failed before producing anything checkable.
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Artifact {
    pub row: usize,
    pub instance: Instance,
    pub output: Output,
}

fn exact_degrees(g: &SimpleGraph, weights: &Weights, b: &[u64]) -> bool {
    let mut deg = vec![0u64; g.order()];
    for &(u, v, w) in weights {
        if u >= g.order() || v >= g.order() || !g.has_edge(u, v) {
            return false;
        }
        deg[u] += w;
        deg[v] += w;
    }
    deg == b
}

/// Recomputes the verdict of one artifact from its contents alone.
pub fn revalidate(a: &Artifact) -> Result<bool, CliError> {
    let graph = || -> Result<ColouredGraph, CliError> {
        a.instance
            .graph()?
            .ok_or_else(|| CliError::Failed(format!("row {}: instance has no graph", a.row)))
    };
    Ok(match &a.output {
        Output::Error { .. } => false,
        Output::TwoMatching {
            found,
            weights,
            obstruction,
        } => {
            let g = graph()?.underlying();
            let n = g.order();
            let oracle = exhaustive_b_weighting(&g, &vec![2; n]).map_err(|e| CliError::Failed(e.to_string()))?;
            if *found != oracle.is_some() {
                return Ok(false);
            }
            if *found {
                exact_degrees(&g, weights, &vec![2; n])
            } else {
                let mut inside = vec![false; n];
                obstruction.iter().for_each(|&v| inside[v] = true);
                let independent = obstruction.iter().all(|&v| g.neighbours(v).all(|u| !inside[u]));
                let mut nb = vec![false; n];
                obstruction
                    .iter()
                    .for_each(|&v| g.neighbours(v).for_each(|u| nb[u] = true));
                independent && nb.iter().filter(|&&x| x).count() < obstruction.len()
            }
        }
        Output::Robmat { accepted, weights } => {
            let g = graph()?.underlying();
            !accepted || exact_degrees(&g, weights, &vec![2; g.order()])
        }
        Output::BMatching { b, weights } => exact_degrees(&graph()?.underlying(), weights, b),
        Output::Family {
            family,
            require_partition,
            must_cover,
            bound,
            bound_is_alpha,
        } => {
            let g = graph()?;
            let mut covered = vec![false; g.order()];
            family.covered().into_iter().for_each(|v| covered[v] = true);
            let bound = if *bound_is_alpha {
                Some(independence_number(&g.underlying()).map_err(|e| CliError::Failed(e.to_string()))? as f64)
            } else {
                *bound
            };
            validate_family(&g, family, *require_partition).accepted
                && must_cover.iter().all(|&v| covered[v])
                && bound.is_none_or(|b| family.count() as f64 <= b)
        }
        Output::Cycle {
            vertices,
            colour,
            length,
        } => {
            let g = graph()?;
            let g = match colour {
                Some(_) => g,
                None => ColouredGraph::from_simple(&g.underlying(), 1, 1),
            };
            let piece = CyclePiece::Cycle {
                vertices: vertices.clone(),
                colour: colour.unwrap_or(1),
            };
            vertices.len() == *length && validate_family(&g, &CycleFamily::new(vec![piece]), false).accepted
        }
        Output::Sample { forbidden, a: set, p } => {
            let (host, cp) = a.instance.host()?;
            check_clauses(host.as_ref(), &cp, forbidden, set, p).all()
        }
        Output::Certificate { holds, certificate } => {
            let fail = |e: &dyn std::fmt::Display| CliError::Failed(format!("cannot rebuild construction: {e}"));
            match &a.instance {
                Instance::DegreeLb { n, seed } => {
                    let built = build_degree_lower_bound(*n, *seed, &DegreeConfig::default()).map_err(|e| fail(&e))?;
                    let c = &built.certificate;
                    *holds == degree_verdict(c) && serde_json::to_value(c)? == *certificate
                }
                Instance::ComponentLb { rm1, eps } => {
                    let built = component_construction(*rm1, eps).map_err(|e| fail(&e))?;
                    *holds == component_verdict(&built).0 && serde_json::to_value(&built.certificate)? == *certificate
                }
                _ => false,
            }
        }
    })
}

pub fn write_jsonl(path: &Path, artifacts: &[Artifact]) -> Result<(), CliError> {
    let mut out = std::io::BufWriter::new(std::fs::File::create(path)?);
    for a in artifacts {
        serde_json::to_writer(&mut out, a)?;
        out.write_all(b"\n")?;
    }
    out.flush()?;
    Ok(())
}

pub fn read_jsonl(path: &Path) -> Result<Vec<Artifact>, CliError> {
    let file = BufReader::new(std::fs::File::open(path)?);
    let mut out = Vec::new();
    for line in file.lines() {
        let line = line?;
        if !line.trim().is_empty() {
            out.push(serde_json::from_str(&line)?);
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tampered_weights_fail_revalidation() {
        let g = ColouredGraph::from_simple(&SimpleGraph::cycle(4), 1, 1);
        let good = Artifact {
            row: 0,
            instance: Instance::inline(&g),
            output: Output::TwoMatching {
                found: true,
                weights: vec![(0, 1, 1), (1, 2, 1), (2, 3, 1), (0, 3, 1)],
                obstruction: Vec::new(),
            },
        };
        assert!(revalidate(&good).unwrap());
        let mut bad = good.clone();
        if let Output::TwoMatching { weights, .. } = &mut bad.output {
            weights[0].2 = 2;
        }
        assert!(!revalidate(&bad).unwrap());
    }

    #[test]
    fn rationals_survive_the_tagged_round_trip() {
        let a = Artifact {
            row: 0,
            instance: Instance::CompleteHost { n: 10, m: 2 },
            output: Output::Sample {
                forbidden: vec![0],
                a: vec![3],
                p: Rational::new(1, 200),
            },
        };
        let text = serde_json::to_string(&a).unwrap();
        assert!(text.contains(r#""p":"1/200""#));
        assert_eq!(serde_json::from_str::<Artifact>(&text).unwrap(), a);
    }

    #[test]
    fn jsonl_round_trip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("a.jsonl");
        let a = Artifact {
            row: 3,
            instance: Instance::Gnp { n: 10, p: 0.3, seed: 1 },
            output: Output::Certificate {
                holds: true,
                certificate: serde_json::json!({"x": 1}),
            },
        };
        write_jsonl(&path, std::slice::from_ref(&a)).unwrap();
        assert_eq!(read_jsonl(&path).unwrap(), vec![a]);
    }
}
