//! Run configuration: a TOML file plus `HOPPER_` environment overrides.

use std::path::{Path, PathBuf};
use std::time::Duration;

use hopper_core::hop::{GuardConfig, Mode};
use hopper_core::objectives::{Metric, Objective, ObjectiveSchedule, Scenario, Target};
use hopper_core::policy::Endpoint;
use hopper_core::repository::RepositoryConfig;
use hopper_core::MAX_VERTICES;
use serde::{Deserialize, Serialize};

use crate::error::{HopperError, Result};

pub const ENV_PREFIX: &str = "HOPPER_";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct RunConfig {
    pub scenario: Scenario,
    pub d: usize,
    /// Vertex count of seeds in the monotone and neighbourly scenarios.
    #[serde(default)]
    pub n: Option<usize>,
    /// Top and bottom deck sizes of prismatoid seeds.
    #[serde(default)]
    pub decks: Option<[usize; 2]>,
    #[serde(default)]
    pub mode: Mode,
    #[serde(default = "one")]
    pub agent_count: usize,
    /// Total agent steps across all workers.
    pub hop_budget: u64,
    /// Wall-clock cap in seconds.
    #[serde(default)]
    pub time_limit: Option<f64>,
    #[serde(default)]
    pub seed: u64,
    /// Random seeds inserted before the agents start.
    #[serde(default = "default_initial_seeds")]
    pub initial_seeds: usize,
    #[serde(default)]
    pub stop_on_first: bool,
    #[serde(default)]
    pub guards: GuardConfig,
    #[serde(default)]
    pub schedule: ScheduleConfig,
    #[serde(default)]
    pub repository: RepositoryConfig,
    #[serde(default)]
    pub step: StepTuning,
    #[serde(default)]
    pub brain: Option<BrainConfig>,
    #[serde(default)]
    pub output: OutputConfig,
}

fn one() -> usize {
    1
}

fn default_initial_seeds() -> usize {
    8
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct ScheduleConfig {
    /// Consecutive failed steps before an agent switches objective.
    pub threshold: usize,
    /// Explicit objective list; the scenario defaults otherwise.
    pub objectives: Option<Vec<Objective>>,
    /// Width the prismatoid objectives aim for; `d + 1` by default.
    pub target_width: Option<usize>,
    /// Monotone bound to beat; the shipped table by default.
    pub known_bound: Option<usize>,
}

impl Default for ScheduleConfig {
    fn default() -> Self {
        ScheduleConfig { threshold: 25, objectives: None, target_width: None, known_bound: None }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct StepTuning {
    /// Node budget of the longest-path count behind the deletion gate.
    pub path_budget: u64,
    /// Dyadic grid accepted polytopes are rescaled to; `None` disables it.
    pub rescale_grid: Option<f64>,
}

impl Default for StepTuning {
    fn default() -> Self {
        StepTuning { path_budget: 200_000, rescale_grid: Some(1e-6) }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct BrainConfig {
    pub address: String,
    #[serde(default = "default_timeout_ms")]
    pub timeout_ms: u64,
    #[serde(default = "default_batch")]
    pub batch_size: usize,
}

fn default_timeout_ms() -> u64 {
    2000
}

fn default_batch() -> usize {
    256
}

impl BrainConfig {
    pub fn new(address: impl Into<String>) -> Self {
        BrainConfig { address: address.into(), timeout_ms: default_timeout_ms(), batch_size: default_batch() }
    }

    pub fn endpoint(&self) -> Endpoint {
        Endpoint { address: self.address.clone(), timeout: Duration::from_millis(self.timeout_ms), batch_size: self.batch_size }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default, deny_unknown_fields)]
pub struct OutputConfig {
    pub report: Option<PathBuf>,
    pub snapshot: Option<PathBuf>,
    pub silo: Option<PathBuf>,
}

fn invalid(msg: impl Into<String>) -> HopperError {
    HopperError::Config(msg.into())
}

/// `AGENT_COUNT` -> `agentCount`.
fn camel_case(screaming: &str) -> String {
    let mut out = String::new();
    for (i, word) in screaming.split('_').filter(|w| !w.is_empty()).enumerate() {
        let lower = word.to_ascii_lowercase();
        if i == 0 {
            out.push_str(&lower);
        } else {
            let mut chars = lower.chars();
            if let Some(c) = chars.next() {
                out.push(c.to_ascii_uppercase());
                out.extend(chars);
            }
        }
    }
    out
}

/// A TOML literal, or the raw text as a string when it is not one.
fn env_value(raw: &str) -> toml::Value {
    toml::from_str::<toml::Table>(&format!("v = {raw}"))
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| toml::Value::String(raw.to_string()))
}

/// Applies `HOPPER_KEY=value` overrides; `__` separates nested tables, as in
/// `HOPPER_GUARDS__MAX_ABS_COORDINATE=1e5`.
pub fn apply_env<I: IntoIterator<Item = (String, String)>>(table: &mut toml::Table, vars: I) -> Result<()> {
    for (key, raw) in vars {
        let Some(path) = key.strip_prefix(ENV_PREFIX) else { continue };
        let parts: Vec<String> = path.split("__").map(camel_case).collect();
        if parts.iter().any(String::is_empty) {
            return Err(invalid(format!("malformed override `{key}`")));
        }
        let (last, parents) = parts.split_last().expect("split yields one part");
        let mut node = &mut *table;
        for p in parents {
            let entry = node.entry(p.clone()).or_insert_with(|| toml::Value::Table(toml::Table::new()));
            node = entry.as_table_mut().ok_or_else(|| invalid(format!("`{key}` overrides a non-table value")))?;
        }
        node.insert(last.clone(), env_value(&raw));
    }
    Ok(())
}

impl RunConfig {
    pub fn from_toml_str(text: &str) -> Result<Self> {
        Self::from_toml_with_env(text, std::iter::empty())
    }

    pub fn from_toml_with_env<I: IntoIterator<Item = (String, String)>>(text: &str, vars: I) -> Result<Self> {
        let mut table: toml::Table = text.parse().map_err(|e: toml::de::Error| invalid(e.to_string()))?;
        apply_env(&mut table, vars)?;
        let cfg: RunConfig = table.try_into().map_err(|e: toml::de::Error| invalid(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Reads `path` with overrides from the process environment.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::from_toml_with_env(&text, std::env::vars())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// Vertex count of a seed.
    pub fn seed_vertices(&self) -> usize {
        match (self.scenario, self.decks, self.n) {
            (Scenario::Hirsch, Some([t, b]), _) => t + b,
            (_, _, Some(n)) => n,
            _ => 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let d = self.d;
        if d < 2 {
            return Err(invalid("d must be at least 2"));
        }
        match self.scenario {
            Scenario::Hirsch => {
                let [t, b] = self.decks.ok_or_else(|| invalid("the hirsch scenario needs `decks = [top, bottom]`"))?;
                if t < d || b < d {
                    return Err(invalid(format!("each deck needs at least {d} vertices")));
                }
            }
            _ => {
                let n = self.n.ok_or_else(|| invalid("this scenario needs `n`"))?;
                if n < d + 1 {
                    return Err(invalid(format!("n = {n} cannot span dimension {d}")));
                }
            }
        }
        if self.seed_vertices() > MAX_VERTICES {
            return Err(invalid(format!("at most {MAX_VERTICES} vertices")));
        }
        if self.agent_count == 0 || self.initial_seeds == 0 {
            return Err(invalid("agentCount and initialSeeds must be positive"));
        }
        if let Some(t) = self.time_limit {
            if !(t.is_finite() && t > 0.0) {
                return Err(invalid("timeLimit must be a positive number of seconds"));
            }
        }
        if self.schedule.threshold == 0 {
            return Err(invalid("schedule threshold must be positive"));
        }
        let r = &self.repository;
        if r.max_size == 0 || r.silo_capacity == 0 || !(0.0..=1.0).contains(&r.p_read) || !(r.tau > 0.0) {
            return Err(invalid("repository needs positive sizes, pRead in [0, 1] and tau > 0"));
        }
        if let Some(g) = self.step.rescale_grid {
            if !(g.is_finite() && g > 0.0) {
                return Err(invalid("rescaleGrid must be positive"));
            }
        }
        self.guards.validate()?;
        if let Some(b) = &self.brain {
            b.endpoint().validate()?;
        }
        for o in self.objectives() {
            let fits = match (self.scenario, o.metric) {
                (Scenario::Hirsch, Metric::Defect | Metric::Width { .. }) => true,
                (Scenario::Monotone, Metric::DualMonotone) => true,
                (Scenario::Neighbourly, Metric::Neighbourly) => true,
                _ => false,
            };
            if !fits {
                return Err(invalid(format!("objective `{}` does not fit the scenario", o.name)));
            }
        }
        Ok(())
    }

    /// The configured objectives, or the scenario defaults.
    pub fn objectives(&self) -> Vec<Objective> {
        if let Some(list) = &self.schedule.objectives {
            return list.clone();
        }
        let d = self.d;
        match self.scenario {
            Scenario::Hirsch => Objective::hirsch_family(self.schedule.target_width.unwrap_or(d + 1)),
            Scenario::Monotone => {
                let n = self.n.unwrap_or(0);
                let mut o = Objective::monotone(n, d);
                if let Some(bound) = self.schedule.known_bound {
                    o.target = Target::MonotoneAbove { bound };
                }
                vec![o]
            }
            Scenario::Neighbourly => vec![Objective::neighbourly()],
        }
    }

    pub fn objective_schedule(&self) -> Result<ObjectiveSchedule> {
        Ok(ObjectiveSchedule::new(self.objectives(), self.schedule.threshold)?)
    }
}
