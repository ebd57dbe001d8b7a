//! Labelled (polytope, hyperplane) records produced by hops, used to train a
//! plane-scoring policy.

use serde::{Deserialize, Serialize};

use crate::analysis::prismatoid::Deck;
use crate::error::Result;
use crate::hull::facets_exact;
use crate::hyperplane::{hyperplane_through, Hyperplane};
use crate::polytope::Polytope;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum HopLabel {
    /// The plane bounded a cell whose hop improved the fitness.
    Success,
    /// The cell was rejected for geometric reasons.
    GeomRejected,
    /// The cell was feasible but no candidate improved.
    FeasibleNoSuccess,
}

impl HopLabel {
    /// Class index used by the scoring model.
    pub fn class(self) -> usize {
        match self {
            HopLabel::Success => 0,
            HopLabel::GeomRejected => 1,
            HopLabel::FeasibleNoSuccess => 2,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HopSample {
    pub polytope: Polytope,
    /// Deck partition as vertex indices; empty outside prismatoid scenarios.
    #[serde(default)]
    pub top: Vec<usize>,
    #[serde(default)]
    pub bottom: Vec<usize>,
    pub plane: Hyperplane,
    #[serde(default)]
    pub deck: Option<Deck>,
    pub label: HopLabel,
    #[serde(default)]
    pub defect: Option<u64>,
}

impl HopSample {
    /// Re-checks the record in exact arithmetic: the plane passes through
    /// `d` affinely independent vertices of the snapshot, and any recorded
    /// deck partition consists of two facets covering every vertex.
    pub fn verify(&self) -> Result<bool> {
        let p = &self.polytope;
        let d = p.dim();
        let on: Vec<&[crate::num::Rational]> =
            p.rows().iter().filter(|r| self.plane.contains(r)).map(Vec::as_slice).collect();
        if on.len() < d {
            return Ok(false);
        }
        // Some d of the incident vertices must determine the plane; with
        // generic data the first d do, otherwise scan combinations.
        let spans = itertools::Itertools::combinations(0..on.len(), d)
            .take(10_000)
            .any(|idx| {
                let pts: Vec<&[crate::num::Rational]> = idx.iter().map(|&i| on[i]).collect();
                hyperplane_through(&pts).is_ok_and(|h| h == self.plane)
            });
        if !spans {
            return Ok(false);
        }
        if self.top.is_empty() && self.bottom.is_empty() {
            return Ok(true);
        }
        let top = VertexSet::from_indices(self.top.iter().copied());
        let bottom = VertexSet::from_indices(self.bottom.iter().copied());
        if !top.intersect(bottom).is_empty() || top.union(bottom) != VertexSet::full(p.len()) {
            return Ok(false);
        }
        let inc = facets_exact(p)?.incidence;
        Ok(inc.position(top).is_some() && inc.position(bottom).is_some())
    }
}
