use serde::{Deserialize, Serialize};

use super::{Colour, ColouredGraph};

/// A monochromatic cycle in the wide sense: the empty set, one vertex, one
/// edge, or a proper cycle of length at least three.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum CyclePiece {
    Empty,
    Singleton { v: usize },
    Edge { u: usize, v: usize, colour: Colour },
    Cycle { vertices: Vec<usize>, colour: Colour },
}

impl CyclePiece {
    pub fn vertices(&self) -> Vec<usize> {
        match self {
            CyclePiece::Empty => Vec::new(),
            CyclePiece::Singleton { v } => vec![*v],
            CyclePiece::Edge { u, v, .. } => vec![*u, *v],
            CyclePiece::Cycle { vertices, .. } => vertices.clone(),
        }
    }

    pub fn order(&self) -> usize {
        match self {
            CyclePiece::Empty => 0,
            CyclePiece::Singleton { .. } => 1,
            CyclePiece::Edge { .. } => 2,
            CyclePiece::Cycle { vertices, .. } => vertices.len(),
        }
    }

    pub fn colour(&self) -> Option<Colour> {
        match self {
            CyclePiece::Edge { colour, .. } | CyclePiece::Cycle { colour, .. } => Some(*colour),
            _ => None,
        }
    }

    /// Builds the natural piece for a closed vertex sequence in colour `c`:
    /// length 0, 1, 2 give the degenerate pieces.
    pub fn from_sequence(seq: Vec<usize>, colour: Colour) -> Self {
        match seq.len() {
            0 => CyclePiece::Empty,
            1 => CyclePiece::Singleton { v: seq[0] },
            2 => CyclePiece::Edge {
                u: seq[0],
                v: seq[1],
                colour,
            },
            _ => CyclePiece::Cycle { vertices: seq, colour },
        }
    }

    /// Maps vertex ids through `map`.
    pub fn relabel(&self, map: &[usize]) -> Self {
        match self {
            CyclePiece::Empty => CyclePiece::Empty,
            CyclePiece::Singleton { v } => CyclePiece::Singleton { v: map[*v] },
            CyclePiece::Edge { u, v, colour } => CyclePiece::Edge {
                u: map[*u],
                v: map[*v],
                colour: *colour,
            },
            CyclePiece::Cycle { vertices, colour } => CyclePiece::Cycle {
                vertices: vertices.iter().map(|&x| map[x]).collect(),
                colour: *colour,
            },
        }
    }
}

/// Vertex-disjoint monochromatic pieces.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CycleFamily {
    pub pieces: Vec<CyclePiece>,
}

impl CycleFamily {
    pub fn new(pieces: Vec<CyclePiece>) -> Self {
        Self { pieces }
    }

    /// Number of non-empty pieces.
    pub fn count(&self) -> usize {
        self.pieces.iter().filter(|p| !matches!(p, CyclePiece::Empty)).count()
    }

    pub fn covered(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self.pieces.iter().flat_map(|p| p.vertices()).collect();
        out.sort_unstable();
        out
    }

    pub fn extend(&mut self, other: CycleFamily) {
        self.pieces.extend(other.pieces);
    }

    pub fn relabel(&self, map: &[usize]) -> Self {
        Self {
            pieces: self.pieces.iter().map(|p| p.relabel(map)).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "violation", rename_all = "snake_case")]
pub enum Violation {
    VertexOutOfRange {
        piece: usize,
        vertex: usize,
    },
    ShortCycle {
        piece: usize,
    },
    RepeatedVertex {
        piece: usize,
        vertex: usize,
    },
    MissingEdge {
        piece: usize,
        u: usize,
        v: usize,
    },
    WrongColour {
        piece: usize,
        u: usize,
        v: usize,
        expected: Colour,
        found: Colour,
    },
    SharedVertex {
        vertex: usize,
        first: usize,
        second: usize,
    },
    Uncovered {
        vertex: usize,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub accepted: bool,
    pub violation: Option<Violation>,
}

/// Checks every piece, pairwise disjointness and, when asked, that the
/// pieces cover every vertex. Reports the first violation found.
pub fn validate_family(g: &ColouredGraph, f: &CycleFamily, require_partition: bool) -> FamilyVerdict {
    match first_violation(g, f, require_partition) {
        None => FamilyVerdict {
            accepted: true,
            violation: None,
        },
        Some(v) => FamilyVerdict {
            accepted: false,
            violation: Some(v),
        },
    }
}

fn check_edge(g: &ColouredGraph, piece: usize, u: usize, v: usize, colour: Colour) -> Option<Violation> {
    match g.colour(u, v) {
        None => Some(Violation::MissingEdge { piece, u, v }),
        Some(found) if found != colour => Some(Violation::WrongColour {
            piece,
            u,
            v,
            expected: colour,
            found,
        }),
        Some(_) => None,
    }
}

fn first_violation(g: &ColouredGraph, f: &CycleFamily, require_partition: bool) -> Option<Violation> {
    let n = g.order();
    let mut owner = vec![usize::MAX; n];
    for (i, piece) in f.pieces.iter().enumerate() {
        let verts = piece.vertices();
        for &v in &verts {
            if v >= n {
                return Some(Violation::VertexOutOfRange { piece: i, vertex: v });
            }
        }
        match piece {
            CyclePiece::Empty | CyclePiece::Singleton { .. } => {}
            CyclePiece::Edge { u, v, colour } => {
                if u == v {
                    return Some(Violation::RepeatedVertex { piece: i, vertex: *u });
                }
                if let Some(bad) = check_edge(g, i, *u, *v, *colour) {
                    return Some(bad);
                }
            }
            CyclePiece::Cycle { vertices, colour } => {
                if vertices.len() < 3 {
                    return Some(Violation::ShortCycle { piece: i });
                }
                let mut sorted = vertices.clone();
                sorted.sort_unstable();
                if let Some(w) = sorted.windows(2).find(|w| w[0] == w[1]) {
                    return Some(Violation::RepeatedVertex { piece: i, vertex: w[0] });
                }
                let k = vertices.len();
                for j in 0..k {
                    if let Some(bad) = check_edge(g, i, vertices[j], vertices[(j + 1) % k], *colour) {
                        return Some(bad);
                    }
                }
            }
        }
        for v in verts {
            if owner[v] != usize::MAX {
                return Some(Violation::SharedVertex {
                    vertex: v,
                    first: owner[v],
                    second: i,
                });
            }
            owner[v] = i;
        }
    }
    if require_partition {
        if let Some(v) = owner.iter().position(|&o| o == usize::MAX) {
            return Some(Violation::Uncovered { vertex: v });
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> ColouredGraph {
        ColouredGraph::complete(3, 1, 1)
    }

    #[test]
    fn empty_family_partitions_empty_graph() {
        let g = ColouredGraph::empty(0, 1);
        assert!(validate_family(&g, &CycleFamily::default(), true).accepted);
    }

    #[test]
    fn triangle_is_a_partition() {
        let f = CycleFamily::new(vec![CyclePiece::Cycle {
            vertices: vec![0, 1, 2],
            colour: 1,
        }]);
        assert!(validate_family(&k3(), &f, true).accepted);
    }

    #[test]
    fn shared_vertex_is_named() {
        let g = ColouredGraph::complete(5, 1, 1);
        let f = CycleFamily::new(vec![
            CyclePiece::Edge { u: 2, v: 3, colour: 1 },
            CyclePiece::Edge { u: 3, v: 4, colour: 1 },
        ]);
        let verdict = validate_family(&g, &f, false);
        assert_eq!(
            verdict.violation,
            Some(Violation::SharedVertex {
                vertex: 3,
                first: 0,
                second: 1
            })
        );
    }

    #[test]
    fn wrong_colour_and_uncovered() {
        let g = ColouredGraph::from_edges(3, 2, [(0, 1, 1), (1, 2, 2), (0, 2, 1)]).unwrap();
        let f = CycleFamily::new(vec![CyclePiece::Cycle {
            vertices: vec![0, 1, 2],
            colour: 1,
        }]);
        assert!(matches!(
            validate_family(&g, &f, false).violation,
            Some(Violation::WrongColour { u: 1, v: 2, .. })
        ));
        let f = CycleFamily::new(vec![CyclePiece::Edge { u: 0, v: 1, colour: 1 }]);
        assert!(validate_family(&g, &f, false).accepted);
        assert_eq!(
            validate_family(&g, &f, true).violation,
            Some(Violation::Uncovered { vertex: 2 })
        );
    }

    #[test]
    fn pieces_serialise_with_kind_tags() {
        let f = CycleFamily::new(vec![CyclePiece::Singleton { v: 4 }, CyclePiece::Empty]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"[{"kind":"singleton","v":4},{"kind":"empty"}]"#);
        assert_eq!(f.count(), 1);
    }
}
