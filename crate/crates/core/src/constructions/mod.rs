//! Sharpness constructions and the rainbow-matching tools behind them.

mod component_lb;
mod degree_lb;
mod rainbow;

pub use component_lb::{
    build_component_lower_bound, BlowupConstruction, ComponentCertificate, ComponentConfig, SizeRounding,
};
pub use degree_lb::{build_degree_lower_bound, degree_miniature, DegreeCertificate, DegreeConfig, DegreeLowerBound};
pub use rainbow::{
    enumerate_rainbow_matchings, proper_colouring_k, rainbow_matching, rainbow_survives_deletion, RainbowMatching,
    RainbowMode,
};

use thiserror::Error;

use crate::covers::CoverError;
use crate::graph::{Colour, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ConstructionError {
    #[error("colour {colour} appears twice at vertex {vertex}")]
    ImproperColouring { vertex: usize, colour: Colour },
    #[error("exact rainbow search handles at most {cap} vertices, got {n}")]
    TooLargeForExact { n: usize, cap: usize },
    #[error("more than {cap} rainbow matchings")]
    EnumerationCap { cap: usize },
    #[error("invalid parameters: {0}")]
    Parameters(String),
    #[error("{deleted} deleted edges exceed eps^2 r^2 / 4")]
    TooManyDeletions { deleted: usize },
    #[error("no valid sample after {0} attempts")]
    RetriesExhausted(usize),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Cover(#[from] CoverError),
}
