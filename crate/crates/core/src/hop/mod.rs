//! One agent step: enumerate the vertex hyperplane arrangement, pick a cell
//! with the policy, move a vertex to its center, keep the best candidate.

mod arrangement;
mod candidates;
mod rescale;
mod step;
mod target;

use std::time::Duration;

use serde::{Deserialize, Serialize};

pub use arrangement::{enumerate_arrangement, ArrangementCache, PlaneEntry, VertexChange};
pub use candidates::{generate_candidates, Candidate, CandidateKind};
pub use rescale::{canonical_rescale, canonical_rescale_to, rescale_preserving, RescaleKind, FINE_GRID};
pub use step::{agent_step, uptick_downtick_gate, Accepted, GateRule, StepConfig, StepOutcome};
pub use target::{construct_hop_target, min_plane_distance, DeckFlat, HopProposal, TargetAttempt};

use crate::error::{Error, Result};
use crate::graph::facet_ridge_graph;
use crate::hull::Incidence;
use crate::linalg::{covariance, symmetric_eigen};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Vertex count fixed: only replacements.
    #[default]
    Rigid,
    /// Also one addition and one random deletion per step.
    Flexible,
}

impl std::str::FromStr for Mode {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rigid" => Ok(Mode::Rigid),
            "flexible" => Ok(Mode::Flexible),
            other => Err(Error::Parse(format!("unknown mode `{other}`"))),
        }
    }
}

/// Limits that keep the search away from degenerate geometry and bound
/// the work of one step.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct GuardConfig {
    pub max_abs_coordinate: f64,
    /// Radians between normals of facets sharing a ridge.
    pub min_facet_angle: f64,
    /// Square root of the extreme covariance eigenvalue ratio.
    pub max_aspect_ratio: f64,
    /// Bound on region resampling and on refinement rounds.
    pub max_while_iterations: usize,
    /// Seconds.
    pub per_step_timeout: f64,
    /// Planes closer than this multiple of the radius join the region.
    pub refinement_factor: f64,
}

impl Default for GuardConfig {
    fn default() -> Self {
        GuardConfig {
            max_abs_coordinate: 1e6,
            min_facet_angle: 1e-6,
            max_aspect_ratio: 1e8,
            max_while_iterations: 200,
            per_step_timeout: 30.0,
            refinement_factor: 0.8,
        }
    }
}

impl GuardConfig {
    pub fn validate(&self) -> Result<()> {
        let positive = [self.max_abs_coordinate, self.min_facet_angle, self.max_aspect_ratio, self.per_step_timeout];
        if positive.iter().any(|x| !(x.is_finite() && *x > 0.0)) || self.max_while_iterations == 0 {
            return Err(Error::Parse("guard limits must be positive".into()));
        }
        if !(self.refinement_factor > 0.0 && self.refinement_factor <= 1.0) {
            return Err(Error::Parse("refinement factor must lie in (0, 1]".into()));
        }
        Ok(())
    }

    pub fn timeout(&self) -> Duration {
        Duration::from_secs_f64(self.per_step_timeout)
    }
}

/// Which guard a point set violates, if any.
pub fn guard_violation(points: &[Vec<f64>], inc: &Incidence, guards: &GuardConfig) -> Option<String> {
    let max_abs = points.iter().flatten().fold(0.0f64, |m, x| m.max(x.abs()));
    if !(max_abs <= guards.max_abs_coordinate) {
        return Some(format!("coordinate {max_abs:e} exceeds {:e}", guards.max_abs_coordinate));
    }
    let (_, cov) = covariance(points);
    let (vals, _) = symmetric_eigen(&cov);
    let hi = vals.iter().copied().fold(0.0f64, f64::max);
    let lo = vals.iter().copied().fold(f64::INFINITY, f64::min);
    if !(lo > 0.0) || (hi / lo).sqrt() > guards.max_aspect_ratio {
        return Some(format!("aspect ratio {:e} exceeds {:e}", (hi / lo).sqrt(), guards.max_aspect_ratio));
    }
    let g = facet_ridge_graph(inc);
    for (a, b) in g.edges() {
        let gap: f64 = inc.normals[a].iter().zip(&inc.normals[b]).map(|(x, y)| (x - y) * (x - y)).sum::<f64>().sqrt();
        let angle = 2.0 * (gap / 2.0).min(1.0).asin();
        if angle < guards.min_facet_angle {
            return Some(format!("facets {a} and {b} meet at angle {angle:e}"));
        }
    }
    None
}
