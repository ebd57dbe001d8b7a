use serde::{Deserialize, Serialize};

use super::prismatoid::{DeckGraph, Prismatoid};
use super::width::width;
use crate::error::Result;
use crate::graph::{facet_ridge_graph, vertex_edge_graph};
use crate::hull::Hull;
use crate::polytope::Polytope;

/// Hirsch bound comparisons in both readings of the polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HirschReport {
    pub facets: usize,
    /// Diameter of the vertex-edge graph.
    pub diameter: usize,
    /// Diameter of the facet-ridge graph (the dual's vertex-edge graph).
    pub dual_diameter: usize,
    /// `diameter - (facets - d)`; positive refutes the bound for `P`.
    pub gap: i64,
    /// `dual_diameter - (n - d)`; positive refutes the bound for the dual.
    pub dual_gap: i64,
    /// `width - d` for a prismatoid.
    pub width_excess: Option<i64>,
    /// Dimension `n - d` of the non-Hirsch polytope a prismatoid with
    /// positive width excess yields.
    pub implied_dimension: Option<usize>,
}

pub fn hirsch_report(p: &Polytope, hull: &Hull, prismatoid: Option<&Prismatoid>) -> Result<HirschReport> {
    let (n, d) = (p.len() as i64, p.dim() as i64);
    let inc = &hull.incidence;
    let diameter = vertex_edge_graph(inc).diameter()?;
    let dual_diameter = facet_ridge_graph(inc).diameter()?;
    let facets = inc.facet_count();
    let width_excess = match prismatoid {
        Some(q) => Some(width(&DeckGraph::new(inc, q.top, q.bottom)?)? as i64 - d),
        None => None,
    };
    Ok(HirschReport {
        facets,
        diameter,
        dual_diameter,
        gap: diameter as i64 - (facets as i64 - d),
        dual_gap: dual_diameter as i64 - (n - d),
        width_excess,
        implied_dimension: width_excess.filter(|&e| e > 0).map(|_| (n - d) as usize),
    })
}
