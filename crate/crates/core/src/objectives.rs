//! Search scenarios, their fitness functions and the objective switching
//! schedule.

use std::collections::BTreeMap;

use petgraph::graph::UnGraph;
use serde::{Deserialize, Serialize};

use crate::analysis::monotone::dual_monotone_length_float;
use crate::analysis::prismatoid::{decks_by_last_coordinate, DeckGraph};
use crate::analysis::width::{average_width, defect, width, DefectConvention, WidthHeuristic};
use crate::analysis::{dual_monotone_length_exact, neighbourliness, Neighbourliness};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::hull::{facets_exact, Arithmetic, Incidence};
use crate::polytope::Polytope;
use crate::shapes::cyclic_facets;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scenario {
    Hirsch,
    Monotone,
    Neighbourly,
}

impl std::str::FromStr for Scenario {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "hirsch" => Ok(Scenario::Hirsch),
            "monotone" => Ok(Scenario::Monotone),
            "neighbourly" | "neighborly" => Ok(Scenario::Neighbourly),
            other => Err(Error::Parse(format!("unknown scenario `{other}`"))),
        }
    }
}

impl Scenario {
    /// Prismatoid scenarios hop within deck planes.
    pub fn uses_decks(self) -> bool {
        self == Scenario::Hirsch
    }
}

/// What an objective measures.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "kebab-case")]
pub enum Metric {
    /// `width + 1/(1 + defect)`.
    Defect,
    /// `width + squash(h)`, with `squash` mapping the heuristic into `[0, 1)`
    /// so that width always dominates.
    Width { heuristic: WidthHeuristic },
    /// Longest first-coordinate-monotone path on the polar dual.
    DualMonotone,
    /// `k + fraction`.
    Neighbourly,
}

/// The property being searched for.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Target {
    WidthAtLeast { width: usize },
    MonotoneAbove { bound: usize },
    NeighbourlyNotCyclic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Objective {
    pub name: String,
    #[serde(flatten)]
    pub metric: Metric,
    pub target: Target,
}

/// Best lower bounds for the longest monotone path among `d`-polytopes with
/// `n` facets.
pub fn known_monotone_bounds() -> BTreeMap<(usize, usize), usize> {
    BTreeMap::from([((9, 5), 30), ((10, 5), 41), ((11, 5), 55), ((9, 6), 29)])
}

impl Objective {
    /// The ten prismatoid objectives: defect plus nine width smoothings.
    pub fn hirsch_family(target_width: usize) -> Vec<Objective> {
        use WidthHeuristic::*;
        let target = Target::WidthAtLeast { width: target_width };
        let mut out = vec![Objective { name: "defect".into(), metric: Metric::Defect, target }];
        let heuristics = [
            ("average-width", MeanDistance { ring: 1, include_diagonal: false }),
            ("mean-distance-2", MeanDistance { ring: 2, include_diagonal: false }),
            ("shortest-fraction-1", ShortestPairFraction { ring: 1 }),
            ("shortest-fraction-2", ShortestPairFraction { ring: 2 }),
            ("shortest-count-1", ShortestPathCount { ring: 1 }),
            ("shortest-count-2", ShortestPathCount { ring: 2 }),
            ("longest-fraction-1", LongestPairFraction { ring: 1 }),
            ("longest-fraction-2", LongestPairFraction { ring: 2 }),
            ("off-geodesic", OffGeodesicFraction),
        ];
        out.extend(heuristics.into_iter().map(|(name, heuristic)| Objective {
            name: name.into(),
            metric: Metric::Width { heuristic },
            target,
        }));
        out
    }

    pub fn monotone(n: usize, d: usize) -> Objective {
        let bound = known_monotone_bounds().get(&(n, d)).copied().unwrap_or(0);
        Objective {
            name: "dual-monotone".into(),
            metric: Metric::DualMonotone,
            target: Target::MonotoneAbove { bound },
        }
    }

    pub fn neighbourly() -> Objective {
        Objective { name: "neighbourly".into(), metric: Metric::Neighbourly, target: Target::NeighbourlyNotCyclic }
    }

    pub fn defaults(scenario: Scenario, n: usize, d: usize) -> Vec<Objective> {
        match scenario {
            Scenario::Hirsch => Objective::hirsch_family(d + 1),
            Scenario::Monotone => vec![Objective::monotone(n, d)],
            Scenario::Neighbourly => vec![Objective::neighbourly()],
        }
    }
}

/// Measured values; only those the objective needs are populated.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct FitnessVector {
    pub objective: String,
    /// Scalar value of the active objective; larger is better.
    pub value: f64,
    /// Whether the target property holds.
    pub rho: bool,
    /// Whether the incidence behind these values was computed exactly.
    pub exact: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub width: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub defect: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub heuristic: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub longest_paths: Option<u128>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub monotone_length: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub neighbourly: Option<Neighbourliness>,
}

impl FitnessVector {
    fn new(obj: &Objective, exact: bool) -> Self {
        FitnessVector {
            objective: obj.name.clone(),
            value: 0.0,
            rho: false,
            exact,
            width: None,
            defect: None,
            heuristic: None,
            longest_paths: None,
            monotone_length: None,
            neighbourly: None,
        }
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EvalOptions {
    /// Also count maximum-length deck-to-deck paths (deletion gate input).
    pub longest_paths: bool,
    /// Node budget for that count.
    pub path_budget: Option<u64>,
}

fn squash(h: &WidthHeuristic, x: f64) -> f64 {
    if h.higher_is_better() {
        x.max(0.0) / (1.0 + x.max(0.0))
    } else {
        1.0 / (1.0 + x.max(0.0))
    }
}

/// Number of simple deck-to-deck paths of the greatest length at most
/// `width + 2`, by depth-first search. `None` once `budget` nodes have been
/// expanded.
pub fn longest_path_count(g: &DeckGraph, budget: u64) -> Result<Option<u128>> {
    let limit = width(g)? + 2;
    let mut search = PathSearch {
        graph: &g.graph,
        target: g.bottom,
        limit,
        on_path: vec![false; g.graph.len()],
        counts: vec![0; limit + 1],
        expanded: 0,
        budget,
    };
    if !search.go(g.top, 0) {
        return Ok(None);
    }
    Ok(search.counts.into_iter().rev().find(|&c| c > 0))
}

struct PathSearch<'a> {
    graph: &'a Graph,
    target: usize,
    limit: usize,
    on_path: Vec<bool>,
    counts: Vec<u128>,
    expanded: u64,
    budget: u64,
}

impl PathSearch<'_> {
    /// Returns `false` when the budget runs out.
    fn go(&mut self, v: usize, depth: usize) -> bool {
        self.expanded += 1;
        if self.expanded > self.budget {
            return false;
        }
        if v == self.target {
            self.counts[depth] += 1;
            return true;
        }
        if depth == self.limit {
            return true;
        }
        self.on_path[v] = true;
        let graph = self.graph;
        let ok = graph.neighbors(v).iter().all(|&u| self.on_path[u] || self.go(u, depth + 1));
        self.on_path[v] = false;
        ok
    }
}

/// Evaluates `obj` on `p` with the given facet incidence.
pub fn evaluate_with(p: &Polytope, inc: &Incidence, exact: bool, obj: &Objective, opts: &EvalOptions) -> Result<FitnessVector> {
    let mut fv = FitnessVector::new(obj, exact);
    match obj.metric {
        Metric::Defect | Metric::Width { .. } => {
            let (top, bottom) = decks_by_last_coordinate(p);
            let g = DeckGraph::new(inc, top, bottom)?;
            let w = width(&g)?;
            let def = defect(&g, DefectConvention::DeckNodes)?;
            fv.width = Some(w);
            fv.defect = Some(def);
            fv.value = match obj.metric {
                Metric::Width { heuristic } => {
                    let h = average_width(&g, &heuristic)?;
                    fv.heuristic = Some(h);
                    w as f64 + squash(&heuristic, h)
                }
                _ => w as f64 + 1.0 / (1.0 + def as f64),
            };
            if opts.longest_paths {
                fv.longest_paths = longest_path_count(&g, opts.path_budget.unwrap_or(2_000_000))?;
            }
        }
        Metric::DualMonotone => {
            let m = if exact {
                dual_monotone_length_exact(p, &facets_exact(p)?)?
            } else {
                dual_monotone_length_float(&p.to_f64_rows(), inc)?
            };
            fv.monotone_length = Some(m);
            fv.value = m as f64;
        }
        Metric::Neighbourly => {
            let nb = neighbourliness(inc);
            fv.neighbourly = Some(nb);
            fv.value = nb.score();
        }
    }
    fv.rho = match obj.target {
        Target::WidthAtLeast { width } => fv.width.is_some_and(|w| w >= width),
        Target::MonotoneAbove { bound } => fv.monotone_length.is_some_and(|m| m > bound),
        Target::NeighbourlyNotCyclic => {
            fv.neighbourly.is_some_and(|nb| nb.k >= p.dim() / 2) && !is_combinatorially_cyclic(inc)
        }
    };
    Ok(fv)
}

/// Exact evaluation.
pub fn evaluate(p: &Polytope, obj: &Objective) -> Result<FitnessVector> {
    let hull = facets_exact(p)?;
    evaluate_with(p, &hull.incidence, true, obj, &EvalOptions::default())
}

pub fn evaluate_mode(p: &Polytope, obj: &Objective, mode: Arithmetic, opts: &EvalOptions) -> Result<FitnessVector> {
    let inc = crate::hull::incidence(p, mode)?;
    evaluate_with(p, &inc, mode == Arithmetic::Exact, obj, opts)
}

fn incidence_graph(n: usize, facets: &[VertexSet]) -> UnGraph<bool, ()> {
    let mut g = UnGraph::new_undirected();
    let vs: Vec<_> = (0..n).map(|_| g.add_node(false)).collect();
    for f in facets {
        let node = g.add_node(true);
        for v in f.iter() {
            g.add_edge(vs[v], node, ());
        }
    }
    g
}

/// Whether the vertex-facet incidences are those of the cyclic polytope
/// `C(n, d)`, up to relabelling. The incidences determine the face lattice.
pub fn is_combinatorially_cyclic(inc: &Incidence) -> bool {
    let reference = cyclic_facets(inc.n, inc.d);
    if reference.len() != inc.facets.len() || inc.facets.iter().any(|f| f.len() != inc.d) {
        return false;
    }
    let a = incidence_graph(inc.n, &inc.facets);
    let b = incidence_graph(inc.n, &reference);
    petgraph::algo::is_isomorphic_matching(&a, &b, |x, y| x == y, |_, _| true)
}

/// Round-robin switching after `threshold` consecutive failures.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObjectiveSchedule {
    pub objectives: Vec<Objective>,
    pub threshold: usize,
    pub current: usize,
}

impl ObjectiveSchedule {
    pub fn new(objectives: Vec<Objective>, threshold: usize) -> Result<Self> {
        if objectives.is_empty() || threshold == 0 {
            return Err(Error::Parse("schedule needs an objective and a positive threshold".into()));
        }
        Ok(ObjectiveSchedule { objectives, threshold, current: 0 })
    }

    pub fn active(&self) -> &Objective {
        &self.objectives[self.current]
    }

    /// Index to use next; advances (and asks the caller to reset its
    /// counter) once `stagnation` reaches the threshold.
    pub fn next_index(&self, stagnation: usize) -> usize {
        if stagnation < self.threshold {
            self.current
        } else {
            (self.current + 1) % self.objectives.len()
        }
    }

    /// Applies [`next_index`](Self::next_index); returns whether it switched.
    pub fn advance(&mut self, stagnation: usize) -> bool {
        let next = self.next_index(stagnation);
        let switched = next != self.current || stagnation >= self.threshold;
        self.current = next;
        switched
    }
}
