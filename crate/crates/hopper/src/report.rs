//! Run reports: JSON for tools, a short text summary for people.

use std::fmt::Write as _;

use hopper_core::hop::Mode;
use hopper_core::objectives::{FitnessVector, Scenario};
use serde::{Deserialize, Serialize};

/// One improvement of the best fitness seen so far.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct TrajectoryPoint {
    /// Global step index; 0 for the seed population.
    pub hop: u64,
    pub agent: usize,
    pub generation: u64,
    /// Vertex count, or top and bottom deck sizes for prismatoids.
    pub vertex_counts: Vec<usize>,
    pub objective: String,
    pub fitness: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
}

/// A lineage reaching the target property for the first time.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Ascension {
    pub hop: u64,
    pub agent: usize,
    pub generation: u64,
    pub fitness: FitnessVector,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct HopCounts {
    pub steps: u64,
    pub accepted: u64,
    pub improved: u64,
    pub success: u64,
    pub geom_rejected: u64,
    pub feasible_no_success: u64,
    /// Steps that ended in a fuse or found no region.
    pub aborted: u64,
    pub fresh_seeds: u64,
    pub seeding_failures: u64,
    pub duplicates: u64,
    pub objective_switches: u64,
    pub samples: u64,
    pub samples_dropped: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum StopReason {
    Budget,
    TimeLimit,
    FirstSuccess,
    Condition,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BestEntry {
    pub id: u64,
    pub generation: u64,
    pub vertices: usize,
    pub fitness: FitnessVector,
}

/// Everything a run produced except timing, so that single-agent runs
/// with the same seed give identical reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RunReport {
    pub scenario: Scenario,
    pub d: usize,
    pub mode: Mode,
    pub agent_count: usize,
    pub hop_budget: u64,
    pub seed: u64,
    pub seed_fitness: Vec<FitnessVector>,
    pub best: Option<BestEntry>,
    /// Largest exact width of any polytope the run produced.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub best_width: Option<usize>,
    pub best_trajectory: Vec<TrajectoryPoint>,
    pub ascensions: Vec<Ascension>,
    pub counts: HopCounts,
    pub stopped: StopReason,
}

impl RunReport {
    pub fn seed_best(&self) -> Option<f64> {
        self.seed_fitness.iter().map(|f| f.value).max_by(f64::total_cmp)
    }

    pub fn seed_mean(&self) -> Option<f64> {
        let n = self.seed_fitness.len();
        (n > 0).then(|| self.seed_fitness.iter().map(|f| f.value).sum::<f64>() / n as f64)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn summary(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "scenario {:?} d={} mode {:?} agents {} seed {}", self.scenario, self.d, self.mode, self.agent_count, self.seed);
        let c = &self.counts;
        let _ = writeln!(
            s,
            "steps {} accepted {} improved {} aborted {} fresh seeds {} switches {}",
            c.steps, c.accepted, c.improved, c.aborted, c.fresh_seeds, c.objective_switches
        );
        let _ = writeln!(s, "hop samples {} (dropped {})", c.samples, c.samples_dropped);
        if let (Some(best), Some(mean)) = (self.seed_best(), self.seed_mean()) {
            let _ = writeln!(s, "seed fitness best {best:.6} mean {mean:.6}");
        }
        if let Some(b) = &self.best {
            let f = &b.fitness;
            let _ = writeln!(
                s,
                "best {} = {:.6} (entry {}, generation {}, {} vertices, target {})",
                f.objective,
                f.value,
                b.id,
                b.generation,
                b.vertices,
                if f.rho { "met" } else { "not met" }
            );
        }
        if let Some(w) = self.best_width {
            let _ = writeln!(s, "best width {w}");
        }
        let _ = writeln!(s, "ascensions {}; stopped: {:?}", self.ascensions.len(), self.stopped);
        s
    }
}
