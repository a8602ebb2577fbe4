//! Plain-text edge lists: a header line `n r`, then `u v c` per edge.
//! Vertices are 0-based, colours 1-based, `#` starts a comment.

use std::fmt::Write as _;

use super::{Colour, ColouredGraph, GraphError};

pub fn parse_text(src: &str) -> Result<ColouredGraph, GraphError> {
    let mut header: Option<(usize, Colour)> = None;
    let mut edges = Vec::new();
    for (i, raw) in src.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| GraphError::Parse {
            line: i + 1,
            msg: msg.to_string(),
        };
        match header {
            None => {
                if fields.len() != 2 {
                    return Err(bad("expected header `n r`"));
                }
                let n = fields[0].parse().map_err(|_| bad("bad vertex count"))?;
                let r = fields[1].parse().map_err(|_| bad("bad colour count"))?;
                header = Some((n, r));
            }
            Some(_) => {
                if fields.len() != 3 {
                    return Err(bad("expected `u v c`"));
                }
                let u: usize = fields[0].parse().map_err(|_| bad("bad vertex"))?;
                let v: usize = fields[1].parse().map_err(|_| bad("bad vertex"))?;
                let c: Colour = fields[2].parse().map_err(|_| bad("bad colour"))?;
                edges.push((u, v, c));
            }
        }
    }
    let (n, r) = header.ok_or(GraphError::Parse {
        line: 0,
        msg: "missing header".into(),
    })?;
    ColouredGraph::from_edges(n, r, edges)
}

pub fn to_text(g: &ColouredGraph) -> String {
    let mut out = String::with_capacity(16 + 12 * g.size());
    let _ = writeln!(out, "{} {}", g.order(), g.colours());
    for (u, v, c) in g.edges() {
        let _ = writeln!(out, "{u} {v} {c}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_round_trip_with_comments() {
        let src = "# triangle\n3 2\n0 1 1\n1 2 1 # inline\n\n0 2 2\n";
        let g = parse_text(src).unwrap();
        assert_eq!(g.size(), 3);
        assert_eq!(parse_text(&to_text(&g)).unwrap(), g);
    }

    #[test]
    fn reports_line_numbers() {
        let err = parse_text("3 2\n0 1\n").unwrap_err();
        assert!(matches!(err, GraphError::Parse { line: 2, .. }));
    }
}
