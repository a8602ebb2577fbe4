//! Cycle covers of uncoloured graphs and unbalanced bipartite graphs,
//! vertex sampling, and cycles of a prescribed even length.

mod egp;
mod exact_length;
mod posa;
mod sample;

pub use egp::{egp_cover, EgpConstants, EgpCover};
pub use exact_length::{exact_length_cycle, min_degree_subgraph, ExactLengthConfig};
pub use posa::{posa_cover, PosaCover, PosaStep};
pub use sample::{
    check_clauses, sample_with_properties, BlowUpHost, ClauseReport, CompleteHost, SampleConfig, SampleHost, SampleSet,
};

use thiserror::Error;

use crate::graph::GraphError;
use crate::rational::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CoverError {
    #[error("vertex {vertex} has {found} neighbours in A, needs at least {needed}")]
    LowDegree {
        vertex: usize,
        found: usize,
        needed: Rational,
    },
    #[error("|A| = {a} is below {factor} * |B| = {b}")]
    Unbalanced { a: usize, b: usize, factor: Rational },
    #[error("vertex {vertex} has no colour reaching |A|/(100r) neighbours")]
    NoHeavyColour { vertex: usize },
    #[error("ran out of fresh common neighbours for {x} and {y}")]
    FreshNeighbours { x: usize, y: usize },
    #[error("sides A and B overlap at vertex {0}")]
    Overlap(usize),
    #[error("sampling precondition failed: {0}")]
    Precondition(String),
    #[error("length {0} must be even and at least 4")]
    BadLength(usize),
    #[error("edge count {edges} is below (1 - eps^2) n^2 / 2 = {bar}")]
    TooSparse { edges: usize, bar: Rational },
    #[error(transparent)]
    Graph(#[from] GraphError),
}
