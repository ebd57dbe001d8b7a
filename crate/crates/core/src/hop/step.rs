use std::time::Instant;

use rand::Rng;

use super::candidates::admissible;
use super::{
    construct_hop_target, generate_candidates, rescale_preserving, ArrangementCache, CandidateKind, DeckFlat,
    GuardConfig, Mode, RescaleKind,
};
use crate::analysis::prismatoid::{decks_by_last_coordinate, Deck};
use crate::error::{Error, Result};
use crate::hull::facets_exact;
use crate::hyperplane::{FloatPlane, Hyperplane};
use crate::objectives::{evaluate, evaluate_with, EvalOptions, FitnessVector, Metric, Objective};
use crate::policy::{label_hop, score_hyperplanes, HopOutcome, Policy, ScoreInput};
use crate::polytope::Polytope;
use crate::repository::RepositoryEntry;
use crate::sample::{HopLabel, HopSample};
use crate::vset::VertexSet;

/// Decides whether a vertex addition or deletion may proceed.
pub type GateRule = fn(&FitnessVector, &FitnessVector, CandidateKind) -> Result<bool>;

/// Additions must lower the shortest-path count; deletions must raise the
/// count of longest deck-to-deck paths. Replacements always pass.
pub fn uptick_downtick_gate(before: &FitnessVector, after: &FitnessVector, kind: CandidateKind) -> Result<bool> {
    match kind {
        CandidateKind::Replace(_) => Ok(true),
        CandidateKind::Add => {
            let b = before.defect.ok_or(Error::MissingMetric("defect"))?;
            let a = after.defect.ok_or(Error::MissingMetric("defect"))?;
            Ok(a < b)
        }
        CandidateKind::Delete(_) => {
            let b = before.longest_paths.ok_or(Error::MissingMetric("longest paths"))?;
            let a = after.longest_paths.ok_or(Error::MissingMetric("longest paths"))?;
            Ok(a > b)
        }
    }
}

pub struct StepConfig<'a> {
    pub objective: &'a Objective,
    pub policy: &'a dyn Policy,
    pub mode: Mode,
    pub guards: GuardConfig,
    pub gate: GateRule,
    /// Node budget for the longest-path count used by the deletion gate.
    pub path_budget: u64,
    /// Grid for the canonical rescale of accepted polytopes; `None` skips it.
    pub rescale: Option<f64>,
}

impl<'a> StepConfig<'a> {
    pub fn new(objective: &'a Objective, policy: &'a dyn Policy) -> Self {
        StepConfig {
            objective,
            policy,
            mode: Mode::Rigid,
            guards: GuardConfig::default(),
            gate: uptick_downtick_gate,
            path_budget: 200_000,
            rescale: Some(1e-6),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Accepted {
    pub polytope: Polytope,
    /// Exact fitness under the step's objective.
    pub fitness: FitnessVector,
    /// Exact facet list of `polytope`.
    pub signature: Vec<VertexSet>,
    /// Strictly better than the input.
    pub improved: bool,
    pub kind: CandidateKind,
}

#[derive(Clone, Debug, Default)]
pub struct StepOutcome {
    pub accepted: Option<Accepted>,
    /// One record per boundary plane of each finished or guard-rejected
    /// region.
    pub samples: Vec<HopSample>,
    pub label: Option<HopLabel>,
    /// Why the step produced nothing, when it did not.
    pub diagnostic: Option<String>,
}

fn uses_decks(obj: &Objective) -> bool {
    matches!(obj.metric, Metric::Defect | Metric::Width { .. })
}

fn rescale_kind(obj: &Objective) -> RescaleKind {
    match obj.metric {
        Metric::Defect | Metric::Width { .. } => RescaleKind::Decks,
        Metric::DualMonotone => RescaleKind::Similarity,
        Metric::Neighbourly => RescaleKind::Whiten,
    }
}

struct SampleContext<'a> {
    polytope: &'a Polytope,
    decks: Option<(VertexSet, VertexSet)>,
    deck: Option<Deck>,
    defect: Option<u64>,
}

impl SampleContext<'_> {
    fn records<'h>(&self, planes: impl IntoIterator<Item = &'h Hyperplane>, label: HopLabel) -> Vec<HopSample> {
        let (top, bottom) = self.decks.map_or((vec![], vec![]), |(t, b)| (t.to_vec(), b.to_vec()));
        planes
            .into_iter()
            .map(|h| HopSample {
                polytope: self.polytope.clone(),
                top: top.clone(),
                bottom: bottom.clone(),
                plane: h.clone(),
                deck: self.deck,
                label,
                defect: self.defect,
            })
            .collect()
    }
}

/// One hop from `entry`. The returned polytope, if any, has exact fitness
/// at least that of the input. `cache` is brought in line with the input
/// and reused across calls.
pub fn agent_step<R: Rng + ?Sized>(
    entry: &RepositoryEntry,
    cfg: &StepConfig<'_>,
    cache: &mut Option<ArrangementCache>,
    rng: &mut R,
) -> StepOutcome {
    let mut out = StepOutcome::default();
    if let Err(e) = step(entry, cfg, cache, rng, &mut out) {
        out.accepted = None;
        out.diagnostic = Some(e.to_string());
    }
    out
}

fn step<R: Rng + ?Sized>(
    entry: &RepositoryEntry,
    cfg: &StepConfig<'_>,
    cache: &mut Option<ArrangementCache>,
    rng: &mut R,
    out: &mut StepOutcome,
) -> Result<()> {
    let deadline = Instant::now() + cfg.guards.timeout();
    let p = &entry.polytope;
    let d = p.dim();
    let obj = cfg.objective;
    let decks = uses_decks(obj);
    let mode = if decks { cfg.mode } else { Mode::Rigid };
    let base = if entry.fitness.objective == obj.name && entry.fitness.exact {
        entry.fitness.clone()
    } else {
        evaluate(p, obj)?
    };

    let cache = match cache {
        Some(c) => {
            c.sync(p);
            c
        }
        None => cache.insert(ArrangementCache::build(p)),
    };

    let (top, bottom) = decks_by_last_coordinate(p);
    let flat = if decks {
        let deck = if rng.gen_bool(0.5) { Deck::Top } else { Deck::Bottom };
        let set = if deck == Deck::Top { top } else { bottom };
        let first = set.iter().next().ok_or(Error::NotPrismatoid)?;
        Some(DeckFlat::at_last_coordinate(deck, d, &p.row(first)[d - 1])?)
    } else {
        None
    };
    let ctx = SampleContext {
        polytope: p,
        decks: decks.then_some((top, bottom)),
        deck: flat.as_ref().map(|f| f.deck),
        defect: base.defect.map(|x| u64::try_from(x).unwrap_or(u64::MAX)),
    };

    let floats: Vec<&FloatPlane> = cache.planes().map(|(_, e)| &e.float).collect();
    let vertices = p.to_f64_rows();
    let input = ScoreInput { vertices: &vertices, decks: ctx.decks, planes: &floats, deck: ctx.deck };
    let dist = score_hyperplanes(cfg.policy, &input);

    let attempt = construct_hop_target(cache, &dist, flat.as_ref(), &cfg.guards, deadline, rng);
    for planes in &attempt.guard_rejected {
        out.samples.extend(ctx.records(planes, HopLabel::GeomRejected));
    }
    let proposal = attempt.proposal?;
    let boundary: Vec<Hyperplane> = proposal.boundary().cloned().collect();
    let finish = |out: &mut StepOutcome, outcome: HopOutcome| {
        let label = label_hop(outcome);
        out.samples.extend(ctx.records(&boundary, label));
        out.label = Some(label);
    };

    let candidates = generate_candidates(p, &proposal, mode, &cfg.guards, rng);
    if candidates.is_empty() {
        finish(out, HopOutcome::GeometryRejected);
        out.diagnostic = Some("no admissible candidate".into());
        return Ok(());
    }

    let wants_paths = |k: CandidateKind| matches!(k, CandidateKind::Delete(_));
    let opts_for = |k: CandidateKind| EvalOptions { longest_paths: wants_paths(k), path_budget: Some(cfg.path_budget) };
    let before_paths = if candidates.iter().any(|c| wants_paths(c.kind)) {
        let hull = facets_exact(p)?;
        Some(evaluate_with(p, &hull.incidence, true, obj, &opts_for(CandidateKind::Delete(0)))?)
    } else {
        None
    };
    let before_for = |k: CandidateKind| if wants_paths(k) { before_paths.as_ref().unwrap_or(&base) } else { &base };
    let gate_ok = |k: CandidateKind, after: &FitnessVector| (cfg.gate)(before_for(k), after, k).unwrap_or(false);

    let mut ranked: Vec<(usize, f64)> = candidates
        .iter()
        .enumerate()
        .filter_map(|(i, c)| {
            let fv = evaluate_with(&c.polytope, &c.incidence, false, obj, &opts_for(c.kind)).ok()?;
            (fv.value >= base.value && gate_ok(c.kind, &fv)).then_some((i, fv.value))
        })
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));

    for (i, _) in ranked {
        if Instant::now() > deadline {
            return Err(Error::FuseTripped("timeout while confirming candidates".into()));
        }
        let cand = &candidates[i];
        let Ok(hull) = facets_exact(&cand.polytope) else { continue };
        if !hull.incidence.non_vertices().is_empty() {
            continue;
        }
        let Ok(fv) = evaluate_with(&cand.polytope, &hull.incidence, true, obj, &opts_for(cand.kind)) else {
            continue;
        };
        if fv.value < base.value || !gate_ok(cand.kind, &fv) {
            continue;
        }
        let signature = hull.incidence.facets;
        let mut polytope = cand.polytope.clone();
        if let Some(grid) = cfg.rescale {
            let scaled = rescale_preserving(&polytope, rescale_kind(obj), grid, &signature);
            let keeps_value = scaled == polytope
                || !matches!(obj.metric, Metric::DualMonotone)
                || evaluate(&scaled, obj).is_ok_and(|f| f.value >= fv.value);
            if keeps_value && admissible(&scaled, decks, &cfg.guards).is_some() {
                polytope = scaled;
            }
        }
        let improved = fv.value > base.value;
        finish(out, if improved { HopOutcome::Improved } else { HopOutcome::NoImprovement });
        out.accepted = Some(Accepted { polytope, fitness: fv, signature, improved, kind: cand.kind });
        return Ok(());
    }
    finish(out, HopOutcome::NoImprovement);
    Ok(())
}
