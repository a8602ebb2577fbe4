//! Edge-coloured simple graphs and the structures built on them.

mod coloured;
pub mod enumerate;
mod family;
pub mod io;
pub mod oracles;
mod simple;

pub use coloured::{ColouredGraph, Subgraph};
pub use family::{validate_family, CycleFamily, CyclePiece, FamilyVerdict, Violation};
pub use simple::SimpleGraph;

use thiserror::Error;

/// Colours are 1-based: a graph with `r` colours uses `1..=r`.
pub type Colour = u16;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("vertex {vertex} out of range for a graph on {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("colour {colour} out of range 1..={r}")]
    ColourOutOfRange { colour: Colour, r: Colour },
    #[error("loop at vertex {0}")]
    Loop(usize),
    #[error("pair {0}-{1} already carries an edge")]
    ParallelEdge(usize, usize),
    #[error("instance of size {size} exceeds the configured cap {cap} for {what}")]
    CapExceeded {
        what: &'static str,
        size: usize,
        cap: usize,
    },
    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

/// Connected components of the colour-`c` subgraph. Vertices without a
/// `c`-coloured edge form components of order one. Components are listed by
/// smallest vertex and each component is sorted.
pub fn mono_components(g: &ColouredGraph, c: Colour) -> Result<Vec<Vec<usize>>, GraphError> {
    if c == 0 || c > g.colours() {
        return Err(GraphError::ColourOutOfRange {
            colour: c,
            r: g.colours(),
        });
    }
    Ok(g.colour_class(c).components())
}

/// Component label per vertex for colour `c` (labels follow [`mono_components`] order).
pub fn mono_component_labels(g: &ColouredGraph, c: Colour) -> Result<Vec<usize>, GraphError> {
    let comps = mono_components(g, c)?;
    let mut label = vec![0; g.order()];
    for (i, comp) in comps.iter().enumerate() {
        for &v in comp {
            label[v] = i;
        }
    }
    Ok(label)
}
