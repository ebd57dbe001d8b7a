//! The population store shared by all agents, and the hop-sample silo.

mod silo;
mod snapshot;

use std::collections::hash_map::DefaultHasher;
use std::collections::HashMap;
use std::hash::{Hash, Hasher};

use parking_lot::Mutex;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use silo::{read_silo, write_silo, Silo, SILO_HEADER};
pub use snapshot::{parse_snapshot, write_snapshot, SNAPSHOT_HEADER};

use crate::hull::facets_exact;
use crate::objectives::FitnessVector;
use crate::polytope::Polytope;
use crate::vset::VertexSet;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Improvement {
    pub generation: u64,
    pub objective: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RepositoryEntry {
    pub id: u64,
    pub polytope: Polytope,
    pub fitness: FitnessVector,
    pub importance: f64,
    /// Hops since the seed.
    pub generation: u64,
    pub history: Vec<Improvement>,
    pub failures: u32,
    /// Generation at which the target property first held.
    pub ascension_generation: Option<u64>,
    /// Exact facet list, used to detect combinatorial duplicates.
    #[serde(skip)]
    pub signature: Vec<VertexSet>,
}

impl RepositoryEntry {
    pub fn seed(polytope: Polytope, fitness: FitnessVector, signature: Vec<VertexSet>) -> Self {
        let ascension_generation = fitness.rho.then_some(0);
        RepositoryEntry {
            id: 0,
            history: vec![Improvement { generation: 0, objective: fitness.objective.clone(), value: fitness.value }],
            polytope,
            fitness,
            importance: 0.0,
            generation: 0,
            failures: 0,
            ascension_generation,
            signature,
        }
    }

    /// The entry produced by one accepted hop from `self`.
    pub fn child(&self, polytope: Polytope, fitness: FitnessVector, signature: Vec<VertexSet>, improved: bool) -> Self {
        let generation = self.generation + 1;
        let mut history = self.history.clone();
        if improved {
            history.push(Improvement { generation, objective: fitness.objective.clone(), value: fitness.value });
        }
        let ascension_generation = self.ascension_generation.or(fitness.rho.then_some(generation));
        RepositoryEntry {
            id: 0,
            polytope,
            fitness,
            importance: 0.0,
            generation,
            history,
            failures: 0,
            ascension_generation,
            signature,
        }
    }

    fn last_improvement(&self) -> u64 {
        self.history.last().map_or(0, |h| h.generation)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", default)]
pub struct RepositoryConfig {
    pub max_size: usize,
    pub p_read: f64,
    pub eviction_sample: usize,
    pub w_fitness: f64,
    pub w_recency: f64,
    pub w_failures: f64,
    pub tau: f64,
    pub silo_capacity: usize,
}

impl Default for RepositoryConfig {
    fn default() -> Self {
        RepositoryConfig {
            max_size: 512,
            p_read: 0.9,
            eviction_sample: 8,
            w_fitness: 1.0,
            w_recency: 0.5,
            w_failures: 0.05,
            tau: 50.0,
            silo_capacity: 1_000_000,
        }
    }
}

/// Result of [`Repository::steal`].
#[derive(Clone, Debug, PartialEq)]
pub enum Steal {
    Entry(Box<RepositoryEntry>),
    /// The caller should start from a fresh random seed.
    FreshSeed,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InsertOutcome {
    Accepted { id: u64, evicted: usize },
    /// A combinatorially identical entry with at least the same importance
    /// is already stored.
    Duplicate { existing: u64 },
}

struct Inner {
    entries: Vec<RepositoryEntry>,
    by_signature: HashMap<u64, u64>,
    next_id: u64,
    rng: ChaCha8Rng,
    evicted_importance: Vec<f64>,
}

pub struct Repository {
    config: RepositoryConfig,
    inner: Mutex<Inner>,
}

fn signature_key(sig: &[VertexSet]) -> u64 {
    let mut h = DefaultHasher::new();
    sig.hash(&mut h);
    h.finish()
}

impl Repository {
    pub fn new(config: RepositoryConfig, seed: u64) -> Self {
        Repository {
            config,
            inner: Mutex::new(Inner {
                entries: Vec::new(),
                by_signature: HashMap::new(),
                next_id: 1,
                rng: ChaCha8Rng::seed_from_u64(seed),
                evicted_importance: Vec::new(),
            }),
        }
    }

    pub fn config(&self) -> &RepositoryConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.inner.lock().entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn importance(&self, e: &RepositoryEntry, lo: f64, hi: f64) -> f64 {
        let c = &self.config;
        let norm = if hi > lo { (e.fitness.value - lo) / (hi - lo) } else { 1.0 };
        let age = e.generation.saturating_sub(e.last_improvement()) as f64;
        c.w_fitness * norm + c.w_recency * (-age / c.tau).exp() - c.w_failures * e.failures as f64
    }

    fn rescore(&self, inner: &mut Inner) {
        let (lo, hi) = inner
            .entries
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), e| (lo.min(e.fitness.value), hi.max(e.fitness.value)));
        for i in 0..inner.entries.len() {
            let imp = self.importance(&inner.entries[i], lo, hi);
            inner.entries[i].importance = imp;
        }
    }

    /// Index of the pinned entry: highest fitness, ties to the lowest id.
    fn pinned(entries: &[RepositoryEntry]) -> Option<usize> {
        (0..entries.len()).max_by(|&a, &b| {
            entries[a].fitness.value.total_cmp(&entries[b].fitness.value).then(entries[b].id.cmp(&entries[a].id))
        })
    }

    fn remove_at(inner: &mut Inner, i: usize) -> RepositoryEntry {
        let e = inner.entries.swap_remove(i);
        let key = signature_key(&e.signature);
        if inner.by_signature.get(&key) == Some(&e.id) {
            inner.by_signature.remove(&key);
        }
        e
    }

    pub fn insert(&self, mut entry: RepositoryEntry) -> InsertOutcome {
        let mut inner = self.inner.lock();
        let key = signature_key(&entry.signature);
        entry.id = inner.next_id;
        inner.next_id += 1;
        let id = entry.id;
        let existing = inner
            .by_signature
            .get(&key)
            .copied()
            .and_then(|ex| inner.entries.iter().position(|e| e.id == ex).map(|pos| (ex, pos)));
        inner.entries.push(entry);
        self.rescore(&mut inner);
        if let Some((existing, pos)) = existing {
            let new = inner.entries.len() - 1;
            let (old, fresh) = (&inner.entries[pos], &inner.entries[new]);
            let demotes_best =
                Self::pinned(&inner.entries[..new]) == Some(pos) && fresh.fitness.value < old.fitness.value;
            if fresh.importance <= old.importance || demotes_best {
                inner.entries.pop();
                self.rescore(&mut inner);
                return InsertOutcome::Duplicate { existing };
            }
            Self::remove_at(&mut inner, pos);
        }
        inner.by_signature.insert(key, id);
        let mut evicted = 0;
        while inner.entries.len() > self.config.max_size {
            let pinned = Self::pinned(&inner.entries);
            let n = inner.entries.len();
            let k = self.config.eviction_sample.max(1);
            let mut victim: Option<usize> = None;
            for _ in 0..k {
                let i = inner.rng.gen_range(0..n);
                if Some(i) == pinned {
                    continue;
                }
                if victim.map_or(true, |v| inner.entries[i].importance < inner.entries[v].importance) {
                    victim = Some(i);
                }
            }
            let victim = victim.unwrap_or_else(|| if pinned == Some(0) { 1 } else { 0 });
            let gone = Self::remove_at(&mut inner, victim);
            inner.evicted_importance.push(gone.importance);
            evicted += 1;
        }
        if evicted > 0 {
            self.rescore(&mut inner);
        }
        InsertOutcome::Accepted { id, evicted }
    }

    /// With probability `p_read` returns a copy of an entry chosen with
    /// probability proportional to its importance; otherwise, or when
    /// empty, asks for a fresh seed. Never modifies the stored entries.
    pub fn steal<R: Rng + ?Sized>(&self, rng: &mut R) -> Steal {
        let inner = self.inner.lock();
        if inner.entries.is_empty() || !rng.gen_bool(self.config.p_read.clamp(0.0, 1.0)) {
            return Steal::FreshSeed;
        }
        let weights: Vec<f64> = inner.entries.iter().map(|e| e.importance.max(0.0) + 1e-9).collect();
        let total: f64 = weights.iter().sum();
        let mut x = rng.gen::<f64>() * total;
        for (e, w) in inner.entries.iter().zip(&weights) {
            if x < *w {
                return Steal::Entry(Box::new(e.clone()));
            }
            x -= w;
        }
        Steal::Entry(Box::new(inner.entries.last().expect("nonempty").clone()))
    }

    /// Notes a failed improvement attempt on entry `id`.
    pub fn record_failure(&self, id: u64) {
        let mut inner = self.inner.lock();
        if let Some(e) = inner.entries.iter_mut().find(|e| e.id == id) {
            e.failures = e.failures.saturating_add(1);
            self.rescore(&mut inner);
        }
    }

    pub fn best(&self) -> Option<RepositoryEntry> {
        let inner = self.inner.lock();
        Self::pinned(&inner.entries).map(|i| inner.entries[i].clone())
    }

    pub fn best_value(&self) -> Option<f64> {
        self.best().map(|e| e.fitness.value)
    }

    /// Entries sorted by decreasing fitness, then id.
    pub fn entries(&self) -> Vec<RepositoryEntry> {
        let mut v = self.inner.lock().entries.clone();
        v.sort_by(|a, b| b.fitness.value.total_cmp(&a.fitness.value).then(a.id.cmp(&b.id)));
        v
    }

    /// Importance of every evicted entry at the time of eviction.
    pub fn evicted_importance(&self) -> Vec<f64> {
        self.inner.lock().evicted_importance.clone()
    }

    /// Restores entries from a snapshot, keeping their ids. Missing facet
    /// signatures are recomputed; entries whose hull fails are skipped.
    pub fn load(&self, entries: Vec<RepositoryEntry>) -> usize {
        let mut inner = self.inner.lock();
        let mut loaded = 0;
        for mut e in entries {
            if e.signature.is_empty() {
                match facets_exact(&e.polytope) {
                    Ok(h) => e.signature = h.incidence.facets,
                    Err(_) => continue,
                }
            }
            loaded += 1;
            inner.next_id = inner.next_id.max(e.id + 1);
            inner.by_signature.insert(signature_key(&e.signature), e.id);
            inner.entries.push(e);
        }
        self.rescore(&mut inner);
        loaded
    }
}
