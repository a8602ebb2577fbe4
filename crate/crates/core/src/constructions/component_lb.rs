//! Graphs whose small side needs many monochromatic components to cover.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::rainbow::{enumerate_rainbow_matchings, proper_colouring_k, RainbowMatching};
use super::ConstructionError;
use crate::graph::oracles::{exact_min_component_cover, CoverCaps};
use crate::graph::{mono_components, Colour, ColouredGraph, GraphError};
use crate::rational::{ceil_nonneg, floor_nonneg, int, ratio, Rational};

/// How `(1 - 3 eps) |Y| / 2` becomes an integer matching size.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeRounding {
    Ceil,
    Floor,
}

#[derive(Debug, Clone, Copy)]
pub struct ComponentConfig {
    pub rounding: SizeRounding,
    /// Blow-up factor; `ceil(|X| / eps)` when `None`.
    pub n_prime: Option<usize>,
    pub enumeration_cap: usize,
    /// Refuse to materialise more edges than this.
    pub max_edges: usize,
    /// Run the exact component cover on the built graph.
    pub exact_cover: bool,
    pub cover_caps: CoverCaps,
}

impl Default for ComponentConfig {
    fn default() -> Self {
        Self {
            rounding: SizeRounding::Ceil,
            n_prime: None,
            enumeration_cap: 1_000_000,
            max_edges: 20_000_000,
            exact_cover: true,
            cover_caps: CoverCaps::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentCertificate {
    pub matching_size: usize,
    /// `min_x deg_H(x)`; equals twice the matching size.
    pub min_degree_x: usize,
    /// `deg_H(x) >= (1 - 3 eps) |Y|` for every `x`.
    pub clause_a: bool,
    /// Every monochromatic component touching `X` is `{u, v} + X_uv`, blown up.
    pub component_form: bool,
    /// Colour `r` forms a single component on `Y'`.
    pub top_colour_component: bool,
    /// `deg_G(y) >= (1 - eps) n` on `Y'`.
    pub y_degree_ok: bool,
    /// `deg_G(x) >= (1 - 4 eps) n` on `X`.
    pub x_degree_ok: bool,
    /// `ceil(eps^2 (r-1)^2 / 4)`.
    pub cover_bound: usize,
    /// Exact minimum number of components covering `X`, when computed.
    pub cover_number: Option<usize>,
    pub cover_note: Option<String>,
}

impl ComponentCertificate {
    pub fn cover_ok(&self) -> Option<bool> {
        self.cover_number.map(|c| c >= self.cover_bound)
    }
}

/// The base graph `H` on `X + Y`, its blow-up `G` on `X + Y'`, and the
/// verified clauses. Vertex ids: `X` first, then `Y` (in `h`) or the blocks
/// `V_y` of size `n_prime` (in `g`).
#[derive(Debug, Clone)]
pub struct BlowupConstruction {
    /// Number of colours of `G`; `H` uses `r - 1`.
    pub r: Colour,
    pub eps: Rational,
    pub k_y: ColouredGraph,
    pub matchings: Vec<RainbowMatching>,
    pub h: ColouredGraph,
    pub n_prime: usize,
    pub g: ColouredGraph,
    pub certificate: ComponentCertificate,
}

impl BlowupConstruction {
    pub fn x_count(&self) -> usize {
        self.matchings.len()
    }

    pub fn y_count(&self) -> usize {
        self.k_y.order()
    }

    /// The block index of a vertex of `g`, `None` on `X`.
    pub fn block(&self, v: usize) -> Option<usize> {
        v.checked_sub(self.x_count()).map(|t| t / self.n_prime)
    }
}

/// Checks that every colour-`c` component (`c < r`) meeting `X` is
/// `{x : uv in x} + copies(u, v)` for the `c`-edge `uv` of `K_Y`.
fn component_form(
    g: &ColouredGraph,
    x_count: usize,
    copies: usize,
    k_y: &ColouredGraph,
    by_edge: &HashMap<(usize, usize), Vec<usize>>,
) -> Result<bool, GraphError> {
    let block = |v: usize| (v - x_count) / copies;
    for c in 1..=k_y.colours() {
        for comp in mono_components(g, c)? {
            if comp.len() == 1 || comp[0] >= x_count {
                if comp.len() > 1 {
                    // a component inside Y' alone cannot arise in colours below r
                    return Ok(false);
                }
                continue;
            }
            let xs: Vec<usize> = comp.iter().copied().filter(|&v| v < x_count).collect();
            let mut ys: Vec<usize> = comp.iter().copied().filter(|&v| v >= x_count).map(block).collect();
            let copies_seen = ys.len();
            ys.dedup();
            if ys.len() != 2 || copies_seen != 2 * copies || k_y.colour(ys[0], ys[1]) != Some(c) {
                return Ok(false);
            }
            if by_edge.get(&(ys[0], ys[1])) != Some(&xs) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Builds the construction for `r - 1 = rm1` base colours.
pub fn build_component_lower_bound(
    rm1: usize,
    eps: &Rational,
    cfg: &ComponentConfig,
) -> Result<BlowupConstruction, ConstructionError> {
    if rm1 < 2 {
        return Err(ConstructionError::Parameters("r - 1 must be at least 2".into()));
    }
    if *eps <= int(0) || *eps >= ratio(1, 3) {
        return Err(ConstructionError::Parameters(format!(
            "eps = {eps} must lie in (0, 1/3)"
        )));
    }
    let exact_size = (ratio(1, 1) - int(3) * eps) * int(rm1) / int(2);
    let size = match cfg.rounding {
        SizeRounding::Ceil => ceil_nonneg(&exact_size),
        SizeRounding::Floor => floor_nonneg(&exact_size),
    };
    if size == 0 {
        return Err(ConstructionError::Parameters(format!(
            "matching size (1 - 3 eps)(r - 1)/2 = {exact_size} rounds to 0"
        )));
    }
    let k_y = proper_colouring_k(rm1)?;
    let matchings = enumerate_rainbow_matchings(&k_y, size, cfg.enumeration_cap)?;
    if matchings.is_empty() {
        return Err(ConstructionError::Parameters(format!(
            "K_{rm1} has no rainbow matching of size {size}"
        )));
    }
    let xn = matchings.len();
    let r = rm1 as Colour + 1;

    let mut by_edge: HashMap<(usize, usize), Vec<usize>> = HashMap::new();
    let mut h_edges = Vec::new();
    for (x, m) in matchings.iter().enumerate() {
        for (&(u, v), &c) in m.edges.iter().zip(&m.colours) {
            by_edge.entry((u, v)).or_default().push(x);
            h_edges.push((x, xn + u, c));
            h_edges.push((x, xn + v, c));
        }
    }
    let h = ColouredGraph::from_edges(xn + rm1, r - 1, h_edges.iter().copied())?;

    let n_prime = cfg.n_prime.unwrap_or_else(|| ceil_nonneg(&(int(xn) / eps)));
    if n_prime == 0 {
        return Err(ConstructionError::Parameters("n' must be positive".into()));
    }
    let y_total = rm1 * n_prime;
    let edge_count = xn * 2 * size * n_prime + y_total * (y_total - 1) / 2;
    if edge_count > cfg.max_edges {
        return Err(ConstructionError::Parameters(format!(
            "blow-up would have {edge_count} edges; lower n' below {n_prime}"
        )));
    }
    let mut g_edges = Vec::with_capacity(edge_count);
    for &(x, y, c) in &h_edges {
        let base = xn + (y - xn) * n_prime;
        g_edges.extend((base..base + n_prime).map(|v| (x, v, c)));
    }
    for u in xn..xn + y_total {
        g_edges.extend((u + 1..xn + y_total).map(|v| (u, v, r)));
    }
    let g = ColouredGraph::from_edges(xn + y_total, r, g_edges)?;
    let n = g.order();

    let min_degree_x = (0..xn).map(|x| h.degree(x)).min().unwrap_or(0);
    let clause_a = (0..xn).all(|x| int(h.degree(x)) >= (ratio(1, 1) - int(3) * eps) * int(rm1));
    let form_h = component_form(&h, xn, 1, &k_y, &by_edge)?;
    let form_g = component_form(&g, xn, n_prime, &k_y, &by_edge)?;
    let top = mono_components(&g, r)?;
    let top_colour_component = y_total < 2 || top.iter().any(|c| c.len() == y_total && c[0] == xn);
    let y_degree_ok = (xn..n).all(|v| int(g.degree(v)) >= (ratio(1, 1) - eps) * int(n));
    let x_degree_ok = (0..xn).all(|v| int(g.degree(v)) >= (ratio(1, 1) - int(4) * eps) * int(n));
    let cover_bound = ceil_nonneg(&(eps * eps * int(rm1 * rm1) / int(4)));
    let (cover_number, cover_note) = if cfg.exact_cover {
        let targets: Vec<usize> = (0..xn).collect();
        match exact_min_component_cover(&g, &targets, cfg.cover_caps) {
            Ok((k, _)) => (Some(k), None),
            Err(e) => (None, Some(format!("too large for the exact cover: {e}"))),
        }
    } else {
        (None, Some("exact cover not requested".into()))
    };
    Ok(BlowupConstruction {
        r,
        eps: *eps,
        k_y,
        matchings,
        h,
        n_prime,
        g,
        certificate: ComponentCertificate {
            matching_size: size,
            min_degree_x,
            clause_a,
            component_form: form_h && form_g,
            top_colour_component,
            y_degree_ok,
            x_degree_ok,
            cover_bound,
            cover_number,
            cover_note,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floor_rounding_to_zero_is_a_guard() {
        let cfg = ComponentConfig {
            rounding: SizeRounding::Floor,
            ..Default::default()
        };
        assert!(matches!(
            build_component_lower_bound(3, &ratio(1, 5), &cfg),
            Err(ConstructionError::Parameters(_))
        ));
    }

    #[test]
    fn eight_base_colours() {
        let b = build_component_lower_bound(8, &ratio(1, 4), &ComponentConfig::default()).unwrap();
        let cert = &b.certificate;
        assert_eq!(cert.matching_size, 1);
        assert_eq!(b.x_count(), 28);
        assert_eq!(b.n_prime, 112);
        assert!(cert.clause_a && cert.component_form && cert.top_colour_component);
        assert!(cert.y_degree_ok && cert.x_degree_ok);
        assert_eq!(cert.min_degree_x, 2 * cert.matching_size);
        assert_eq!(cert.cover_ok(), Some(true));
    }
}
