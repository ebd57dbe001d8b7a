//! Plane scoring: the distribution hop regions are sampled from.

mod remote;
pub mod wire;

use log::warn;
use serde::{Deserialize, Serialize};

pub use remote::{Endpoint, RemotePolicy};

use crate::analysis::prismatoid::Deck;
use crate::hyperplane::FloatPlane;
use crate::sample::{HopLabel, HopSample};
use crate::vset::VertexSet;

/// Probabilities aligned with a list of planes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PlaneDistribution {
    pub probs: Vec<f64>,
}

impl PlaneDistribution {
    pub fn uniform(n: usize) -> Self {
        PlaneDistribution { probs: vec![1.0 / n.max(1) as f64; n] }
    }

    /// Normalizes likelihoods by their sum. Falls back to uniform (second
    /// value `true`) on a wrong length, non-finite or negative entries, or
    /// a zero sum.
    pub fn from_likelihoods(n: usize, likelihoods: &[f64]) -> (Self, bool) {
        let valid = likelihoods.len() == n && likelihoods.iter().all(|x| x.is_finite() && *x >= 0.0);
        let sum: f64 = if valid { likelihoods.iter().sum() } else { 0.0 };
        if !valid || !(sum > 0.0) || !sum.is_finite() {
            return (Self::uniform(n), true);
        }
        (PlaneDistribution { probs: likelihoods.iter().map(|x| x / sum).collect() }, false)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// What a policy sees when scoring planes.
pub struct ScoreInput<'a> {
    pub vertices: &'a [Vec<f64>],
    /// Deck partition in prismatoid scenarios.
    pub decks: Option<(VertexSet, VertexSet)>,
    pub planes: &'a [&'a FloatPlane],
    /// Deck the hop happens in.
    pub deck: Option<Deck>,
}

pub trait Policy: Send + Sync {
    /// Raw likelihoods, one per plane, or `None` to use the uniform
    /// distribution.
    fn likelihoods(&self, input: &ScoreInput<'_>) -> Option<Vec<f64>>;

    /// Forwards labelled samples to a learner, if there is one.
    fn train(&self, _samples: &[HopSample]) -> bool {
        false
    }
}

/// Chooses uniformly among planes.
#[derive(Clone, Copy, Debug, Default)]
pub struct Uniform;

impl Policy for Uniform {
    fn likelihoods(&self, _input: &ScoreInput<'_>) -> Option<Vec<f64>> {
        None
    }
}

pub fn score_hyperplanes(policy: &dyn Policy, input: &ScoreInput<'_>) -> PlaneDistribution {
    let n = input.planes.len();
    match policy.likelihoods(input) {
        None => PlaneDistribution::uniform(n),
        Some(raw) => {
            let (dist, degraded) = PlaneDistribution::from_likelihoods(n, &raw);
            if degraded {
                warn!("policy returned an unusable score vector; using uniform");
            }
            dist
        }
    }
}

/// How a hop proposal ended.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HopOutcome {
    /// A candidate strictly improved the active fitness.
    Improved,
    /// The region or every candidate failed geometric checks.
    GeometryRejected,
    /// Some candidates were admissible, none improved.
    NoImprovement,
}

pub fn label_hop(outcome: HopOutcome) -> HopLabel {
    match outcome {
        HopOutcome::Improved => HopLabel::Success,
        HopOutcome::GeometryRejected => HopLabel::GeomRejected,
        HopOutcome::NoImprovement => HopLabel::FeasibleNoSuccess,
    }
}
