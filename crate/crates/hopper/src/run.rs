//! The agent pool: workers repeatedly steal an entry, hop once and insert
//! the result into the shared repository.

use std::fs::File;
use std::io::BufWriter;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::time::{Duration, Instant};

use hopper_core::analysis::prismatoid::decks_by_last_coordinate;
use hopper_core::hop::{agent_step, ArrangementCache, StepConfig};
use hopper_core::hull::facets_exact;
use hopper_core::objectives::{evaluate, FitnessVector, Scenario};
use hopper_core::policy::{Policy, RemotePolicy, Uniform};
use hopper_core::polytope::Polytope;
use hopper_core::repository::{write_silo, write_snapshot, InsertOutcome, Repository, RepositoryEntry, Silo, Steal};
use hopper_core::sample::HopLabel;
use log::{info, warn};
use parking_lot::Mutex;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::config::{OutputConfig, RunConfig};
use crate::error::Result;
use crate::report::{Ascension, BestEntry, HopCounts, RunReport, StopReason, TrajectoryPoint};
use crate::seed::random_seed_with;

/// What a stop condition can look at between steps.
pub struct Progress<'a> {
    pub repository: &'a Repository,
    pub silo: &'a Silo,
    pub steps: u64,
    pub elapsed: Duration,
    pub best_width: Option<usize>,
}

pub type StopCondition<'a> = &'a (dyn Fn(&Progress<'_>) -> bool + Sync);

pub struct RunOutcome {
    pub report: RunReport,
    pub repository: Repository,
    pub silo: Silo,
    pub elapsed: Duration,
}

impl RunOutcome {
    /// Writes the report, repository snapshot and silo where configured.
    pub fn save(&self, out: &OutputConfig) -> Result<()> {
        if let Some(path) = &out.report {
            std::fs::write(path, self.report.to_json())?;
        }
        if let Some(path) = &out.snapshot {
            std::fs::write(path, write_snapshot(&self.repository.entries()))?;
        }
        if let Some(path) = &out.silo {
            write_silo(BufWriter::new(File::create(path)?), &self.silo.records())?;
        }
        Ok(())
    }
}

struct Shared {
    counts: HopCounts,
    trajectory: Vec<TrajectoryPoint>,
    ascensions: Vec<Ascension>,
    best: f64,
    best_width: Option<usize>,
    stopped: Option<StopReason>,
}

impl Shared {
    fn observe(&mut self, hop: u64, agent: usize, entry: &RepositoryEntry) {
        let f = &entry.fitness;
        if let Some(w) = f.width {
            self.best_width = Some(self.best_width.map_or(w, |b| b.max(w)));
        }
        if f.value > self.best {
            self.best = f.value;
            self.trajectory.push(TrajectoryPoint {
                hop,
                agent,
                generation: entry.generation,
                vertex_counts: vertex_counts(&entry.polytope, f),
                objective: f.objective.clone(),
                fitness: f.value,
                width: f.width,
            });
        }
        if f.rho && entry.ascension_generation == Some(entry.generation) {
            self.ascensions.push(Ascension { hop, agent, generation: entry.generation, fitness: f.clone() });
        }
    }

    fn stop(&mut self, reason: StopReason) {
        self.stopped.get_or_insert(reason);
    }
}

fn vertex_counts(p: &Polytope, f: &FitnessVector) -> Vec<usize> {
    if f.width.is_some() {
        let (top, bottom) = decks_by_last_coordinate(p);
        vec![top.len(), bottom.len()]
    } else {
        vec![p.len()]
    }
}

struct Pool<'a> {
    cfg: &'a RunConfig,
    policy: &'a dyn Policy,
    until: Option<StopCondition<'a>>,
    repository: &'a Repository,
    silo: &'a Silo,
    shared: &'a Mutex<Shared>,
    steps: AtomicU64,
    stop: AtomicBool,
    start: Instant,
}

impl Pool<'_> {
    fn deadline_passed(&self) -> bool {
        self.cfg.time_limit.is_some_and(|t| self.start.elapsed().as_secs_f64() >= t)
    }

    /// A fresh evaluated seed entry, inserted into the repository.
    fn fresh_seed(&self, rng: &mut ChaCha8Rng, obj: &hopper_core::objectives::Objective) -> Option<RepositoryEntry> {
        let mut fitness = None;
        let seeded = random_seed_with(self.cfg, rng, |p| {
            fitness = evaluate(p, obj).ok();
            fitness.is_some()
        });
        let p = match seeded {
            Ok(p) => p,
            Err(e) => {
                warn!("{e}");
                self.shared.lock().counts.seeding_failures += 1;
                return None;
            }
        };
        let sig = facets_exact(&p).ok()?.incidence.facets;
        let mut entry = RepositoryEntry::seed(p, fitness?, sig);
        if let InsertOutcome::Accepted { id, .. } = self.repository.insert(entry.clone()) {
            entry.id = id;
        }
        self.shared.lock().counts.fresh_seeds += 1;
        Some(entry)
    }

    fn worker(&self, agent: usize) {
        let mut rng = ChaCha8Rng::seed_from_u64(self.cfg.seed);
        rng.set_stream(agent as u64 + 1);
        let mut schedule = self.cfg.objective_schedule().expect("validated configuration");
        let mut stagnation = 0usize;
        let mut cache: Option<ArrangementCache> = None;
        loop {
            if self.stop.load(Ordering::SeqCst) {
                return;
            }
            if self.deadline_passed() {
                self.shared.lock().stop(StopReason::TimeLimit);
                self.stop.store(true, Ordering::SeqCst);
                return;
            }
            let hop = self.steps.fetch_add(1, Ordering::SeqCst) + 1;
            if hop > self.cfg.hop_budget {
                self.shared.lock().stop(StopReason::Budget);
                self.stop.store(true, Ordering::SeqCst);
                return;
            }
            let obj = schedule.active().clone();
            let entry = match self.repository.steal(&mut rng) {
                Steal::Entry(e) => Some(*e),
                Steal::FreshSeed => self.fresh_seed(&mut rng, &obj),
            };
            let Some(entry) = entry else {
                self.shared.lock().counts.steps += 1;
                continue;
            };
            let mut step_cfg = StepConfig::new(&obj, self.policy);
            step_cfg.mode = self.cfg.mode;
            step_cfg.guards = self.cfg.guards;
            step_cfg.path_budget = self.cfg.step.path_budget;
            step_cfg.rescale = self.cfg.step.rescale_grid;
            let out = agent_step(&entry, &step_cfg, &mut cache, &mut rng);
            if !out.samples.is_empty() {
                self.policy.train(&out.samples);
            }
            let n_samples = out.samples.len() as u64;
            let before_dropped = self.silo.dropped();
            self.silo.append(out.samples);
            let improved = out.accepted.as_ref().is_some_and(|a| a.improved);
            let child = out.accepted.map(|acc| entry.child(acc.polytope, acc.fitness, acc.signature, acc.improved));
            let inserted = child.map(|mut c| {
                let outcome = self.repository.insert(c.clone());
                if let InsertOutcome::Accepted { id, .. } = outcome {
                    c.id = id;
                }
                (c, outcome)
            });
            if !improved {
                self.repository.record_failure(entry.id);
            }
            stagnation = if improved { 0 } else { stagnation + 1 };
            let switched = schedule.advance(stagnation);
            if switched {
                stagnation = 0;
            }
            let mut shared = self.shared.lock();
            let c = &mut shared.counts;
            c.steps += 1;
            c.samples += n_samples;
            c.samples_dropped += self.silo.dropped() - before_dropped;
            c.objective_switches += u64::from(switched);
            match out.label {
                Some(HopLabel::Success) => c.success += 1,
                Some(HopLabel::GeomRejected) => c.geom_rejected += 1,
                Some(HopLabel::FeasibleNoSuccess) => c.feasible_no_success += 1,
                None => c.aborted += 1,
            }
            if let Some((child, outcome)) = inserted {
                shared.counts.accepted += 1;
                shared.counts.improved += u64::from(improved);
                if matches!(outcome, InsertOutcome::Duplicate { .. }) {
                    shared.counts.duplicates += 1;
                }
                shared.observe(hop, agent, &child);
                if self.cfg.stop_on_first && !shared.ascensions.is_empty() {
                    shared.stop(StopReason::FirstSuccess);
                    self.stop.store(true, Ordering::SeqCst);
                }
            }
            let best_width = shared.best_width;
            drop(shared);
            if let Some(until) = self.until {
                let progress = Progress {
                    repository: self.repository,
                    silo: self.silo,
                    steps: hop,
                    elapsed: self.start.elapsed(),
                    best_width,
                };
                if until(&progress) {
                    self.shared.lock().stop(StopReason::Condition);
                    self.stop.store(true, Ordering::SeqCst);
                }
            }
        }
    }
}

/// The policy a configuration asks for: the remote scorer when a brain
/// endpoint is set (degrading to uniform while it is unreachable),
/// uniform otherwise.
pub fn configured_policy(cfg: &RunConfig) -> Box<dyn Policy> {
    match &cfg.brain {
        Some(b) => Box::new(RemotePolicy::new(b.endpoint())),
        None => Box::new(Uniform),
    }
}

/// Seeds the repository, runs `agentCount` workers until the hop budget,
/// the time limit, the first success (with `stopOnFirst`) or `until`
/// stops them, and reports.
pub fn run_scenario(cfg: &RunConfig) -> Result<RunOutcome> {
    let policy = configured_policy(cfg);
    run_scenario_with(cfg, policy.as_ref(), None)
}

pub fn run_scenario_with(cfg: &RunConfig, policy: &dyn Policy, until: Option<StopCondition<'_>>) -> Result<RunOutcome> {
    cfg.validate()?;
    let start = Instant::now();
    let repository = Repository::new(cfg.repository, cfg.seed);
    let silo = Silo::new(cfg.repository.silo_capacity);
    let schedule = cfg.objective_schedule()?;
    let obj = schedule.active();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let shared = Mutex::new(Shared {
        counts: HopCounts::default(),
        trajectory: Vec::new(),
        ascensions: Vec::new(),
        best: f64::NEG_INFINITY,
        best_width: None,
        stopped: None,
    });
    let mut seed_fitness = Vec::with_capacity(cfg.initial_seeds);
    for _ in 0..cfg.initial_seeds {
        let mut fitness = None;
        let p = random_seed_with(cfg, &mut rng, |p| {
            fitness = evaluate(p, obj).ok();
            fitness.is_some()
        })?;
        let fitness = fitness.expect("accepted seeds were evaluated");
        let sig = facets_exact(&p)?.incidence.facets;
        seed_fitness.push(fitness.clone());
        let mut entry = RepositoryEntry::seed(p, fitness, sig);
        if let InsertOutcome::Accepted { id, .. } = repository.insert(entry.clone()) {
            entry.id = id;
        }
        shared.lock().observe(0, 0, &entry);
    }
    info!("seeded {} polytopes; best {:?}", seed_fitness.len(), repository.best_value());
    let pool = Pool {
        cfg,
        policy,
        until,
        repository: &repository,
        silo: &silo,
        shared: &shared,
        steps: AtomicU64::new(0),
        stop: AtomicBool::new(false),
        start,
    };
    if cfg.stop_on_first && !shared.lock().ascensions.is_empty() {
        shared.lock().stop(StopReason::FirstSuccess);
    } else if cfg.agent_count == 1 {
        pool.worker(0);
    } else {
        std::thread::scope(|s| {
            for agent in 0..cfg.agent_count {
                let pool = &pool;
                s.spawn(move || pool.worker(agent));
            }
        });
    }
    let shared = shared.into_inner();
    let best = repository.best().map(|e| BestEntry {
        id: e.id,
        generation: e.generation,
        vertices: e.polytope.len(),
        fitness: e.fitness,
    });
    let report = RunReport {
        scenario: cfg.scenario,
        d: cfg.d,
        mode: cfg.mode,
        agent_count: cfg.agent_count,
        hop_budget: cfg.hop_budget,
        seed: cfg.seed,
        seed_fitness,
        best,
        best_width: shared.best_width.filter(|_| cfg.scenario == Scenario::Hirsch),
        best_trajectory: shared.trajectory,
        ascensions: shared.ascensions,
        counts: shared.counts,
        stopped: shared.stopped.unwrap_or(StopReason::Budget),
    };
    Ok(RunOutcome { report, repository, silo, elapsed: start.elapsed() })
}
