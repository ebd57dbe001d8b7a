use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{facet_ridge_graph, Graph};
use crate::hull::{facets_exact, Hull, Incidence};
use crate::hyperplane::Hyperplane;
use crate::polytope::Polytope;
use crate::vset::VertexSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Deck {
    Top,
    Bottom,
}

impl Deck {
    pub fn other(self) -> Deck {
        match self {
            Deck::Top => Deck::Bottom,
            Deck::Bottom => Deck::Top,
        }
    }
}

/// A polytope with two parallel facets (decks) that together hold every
/// vertex.
#[derive(Clone, Debug)]
pub struct Prismatoid {
    pub polytope: Polytope,
    pub top: VertexSet,
    pub bottom: VertexSet,
    pub top_plane: Hyperplane,
    pub bottom_plane: Hyperplane,
    /// More than one parallel facet pair covers the vertices; the first in
    /// canonical facet order was chosen.
    pub ambiguous: bool,
}

impl Prismatoid {
    pub fn deck(&self, deck: Deck) -> VertexSet {
        match deck {
            Deck::Top => self.top,
            Deck::Bottom => self.bottom,
        }
    }

    pub fn deck_plane(&self, deck: Deck) -> &Hyperplane {
        match deck {
            Deck::Top => &self.top_plane,
            Deck::Bottom => &self.bottom_plane,
        }
    }

    pub fn deck_of(&self, vertex: usize) -> Deck {
        if self.top.contains(vertex) {
            Deck::Top
        } else {
            Deck::Bottom
        }
    }
}

/// Finds two parallel facets whose vertex sets partition the vertices.
pub fn detect_prismatoid(p: &Polytope) -> Result<Prismatoid> {
    let hull = facets_exact(p)?;
    detect_prismatoid_with(p, &hull)
}

pub fn detect_prismatoid_with(p: &Polytope, hull: &Hull) -> Result<Prismatoid> {
    let all = VertexSet::full(p.len());
    let mut found: Vec<(usize, usize)> = Vec::new();
    for (i, f) in hull.facets.iter().enumerate() {
        for (j, g) in hull.facets.iter().enumerate().skip(i + 1) {
            if f.vertices.intersect(g.vertices).is_empty()
                && f.vertices.union(g.vertices) == all
                && f.inequality.plane.is_parallel_to(&g.inequality.plane)
            {
                found.push((i, j));
            }
        }
    }
    let &(i, j) = found.first().ok_or(Error::NotPrismatoid)?;
    let (a, b) = (&hull.facets[i], &hull.facets[j]);
    // Both planes share a canonical normal; the deck at the larger offset is
    // on top.
    let (top, bottom) = if a.inequality.plane.offset() > b.inequality.plane.offset() { (a, b) } else { (b, a) };
    debug_assert!(!(top.inequality.plane.offset() - bottom.inequality.plane.offset()).is_zero());
    Ok(Prismatoid {
        polytope: p.clone(),
        top: top.vertices,
        bottom: bottom.vertices,
        top_plane: top.inequality.plane.clone(),
        bottom_plane: bottom.inequality.plane.clone(),
        ambiguous: found.len() > 1,
    })
}

/// The facet-ridge graph with the two deck facets located in it.
#[derive(Clone, Debug)]
pub struct DeckGraph {
    pub graph: Graph,
    pub top: usize,
    pub bottom: usize,
}

impl DeckGraph {
    /// Fails with `NotPrismatoid` if either deck is not a facet.
    pub fn new(inc: &Incidence, top: VertexSet, bottom: VertexSet) -> Result<Self> {
        let t = inc.position(top).ok_or(Error::NotPrismatoid)?;
        let b = inc.position(bottom).ok_or(Error::NotPrismatoid)?;
        Ok(DeckGraph { graph: facet_ridge_graph(inc), top: t, bottom: b })
    }

    pub fn of(q: &Prismatoid) -> Result<Self> {
        let hull = facets_exact(&q.polytope)?;
        Self::new(&hull.incidence, q.top, q.bottom)
    }
}

/// Splits vertices by the sign of their last coordinate, the convention
/// used for search-time prismatoids whose decks sit at `x_d = ±1`.
pub fn decks_by_last_coordinate(p: &Polytope) -> (VertexSet, VertexSet) {
    let d = p.dim();
    let mut top = VertexSet::EMPTY;
    let mut bottom = VertexSet::EMPTY;
    for (i, r) in p.rows().iter().enumerate() {
        if num_traits::Signed::is_positive(&r[d - 1]) {
            top = top.with(i);
        } else {
            bottom = bottom.with(i);
        }
    }
    (top, bottom)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_is_an_ambiguous_prismatoid() {
        let cube = Polytope::from_i64_rows(
            &(0..8).map(|m: i64| (0..3).map(|j| if m >> j & 1 == 1 { 1 } else { -1 }).collect()).collect::<Vec<_>>(),
        )
        .unwrap();
        let q = detect_prismatoid(&cube).unwrap();
        assert!(q.ambiguous);
        assert_eq!(q.top.len(), 4);
        assert_eq!(q.bottom.len(), 4);
    }

    #[test]
    fn simplex_is_not_a_prismatoid() {
        let s = Polytope::from_i64_rows(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert!(matches!(detect_prismatoid(&s), Err(Error::NotPrismatoid)));
    }

    #[test]
    fn triangular_prism_decks() {
        let p = Polytope::from_i64_rows(&[
            vec![0, 0, 0],
            vec![1, 0, 0],
            vec![0, 1, 0],
            vec![0, 0, 1],
            vec![1, 0, 1],
            vec![0, 1, 1],
        ])
        .unwrap();
        let q = detect_prismatoid(&p).unwrap();
        assert!(!q.ambiguous);
        assert_eq!(q.top, VertexSet::from_indices([3, 4, 5]));
        assert_eq!(q.bottom, VertexSet::from_indices([0, 1, 2]));
    }
}
