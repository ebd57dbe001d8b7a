use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{guard_violation, GuardConfig, HopProposal, Mode};
use crate::analysis::prismatoid::{decks_by_last_coordinate, Deck};
use crate::hull::{facets_float_rows, Incidence};
use crate::polytope::Polytope;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum CandidateKind {
    Replace(usize),
    Add,
    Delete(usize),
}

/// A modified vertex list that passed the float admissibility checks.
#[derive(Clone, Debug)]
pub struct Candidate {
    pub kind: CandidateKind,
    pub polytope: Polytope,
    pub points: Vec<Vec<f64>>,
    pub incidence: Incidence,
}

/// Float admissibility: every point is a vertex of a full-dimensional hull,
/// no guard is violated and, with `decks`, both decks remain facets.
pub(crate) fn admissible(p: &Polytope, decks: bool, guards: &GuardConfig) -> Option<(Vec<Vec<f64>>, Incidence)> {
    let d = p.dim();
    if p.len() < d + 1 {
        return None;
    }
    let points = p.to_f64_rows();
    let inc = facets_float_rows(&points).ok()?;
    if !inc.non_vertices().is_empty() || guard_violation(&points, &inc, guards).is_some() {
        return None;
    }
    if decks {
        let (top, bottom) = decks_by_last_coordinate(p);
        if top.len() < d || bottom.len() < d || inc.position(top).is_none() || inc.position(bottom).is_none() {
            return None;
        }
    }
    Some((points, inc))
}

/// Candidates for one hop to `proposal.target`: each vertex replaced by the
/// target (only vertices of the hop's deck in prismatoid mode), plus in
/// flexible mode the target added and one uniformly random vertex deleted.
/// Inadmissible candidates are dropped.
pub fn generate_candidates<R: Rng + ?Sized>(
    p: &Polytope,
    proposal: &HopProposal,
    mode: Mode,
    guards: &GuardConfig,
    rng: &mut R,
) -> Vec<Candidate> {
    let decks = proposal.deck.is_some();
    let d = p.dim();
    let in_deck = |i: usize| match proposal.deck {
        None => true,
        Some(deck) => {
            let top = num_traits::Signed::is_positive(&p.row(i)[d - 1]);
            top == (deck == Deck::Top)
        }
    };
    let mut raw: Vec<(CandidateKind, Polytope)> = (0..p.len())
        .filter(|&i| in_deck(i))
        .map(|i| (CandidateKind::Replace(i), p.with_replaced(i, proposal.target.clone())))
        .collect();
    if mode == Mode::Flexible {
        if let Ok(q) = p.with_added(proposal.target.clone()) {
            raw.push((CandidateKind::Add, q));
        }
        let i = rng.gen_range(0..p.len());
        raw.push((CandidateKind::Delete(i), p.with_removed(i)));
    }
    raw.into_iter()
        .filter_map(|(kind, polytope)| {
            admissible(&polytope, decks, guards).map(|(points, incidence)| Candidate { kind, polytope, points, incidence })
        })
        .collect()
}
