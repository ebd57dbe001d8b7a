//! Deck-to-deck distance measurements on the facet-ridge graph: width,
//! defect and the family of smoothed "average width" heuristics.

use serde::{Deserialize, Serialize};

use super::prismatoid::DeckGraph;
use crate::error::{Error, Result};

/// Facet-ridge distance between the two decks.
pub fn width(g: &DeckGraph) -> Result<usize> {
    g.graph.distance(g.top, g.bottom).ok_or(Error::Disconnected)
}

/// Which shortest paths the defect counts.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DefectConvention {
    /// Shortest paths between the two deck facets themselves.
    #[default]
    DeckNodes,
    /// Shortest paths between a neighbour of the top deck and a neighbour of
    /// the bottom deck, over the pairs at minimum distance.
    DeckNeighbours,
}

/// Number of shortest deck-to-deck paths.
pub fn defect(g: &DeckGraph, convention: DefectConvention) -> Result<u128> {
    match convention {
        DefectConvention::DeckNodes => {
            let (dist, count) = g.graph.shortest_path_counts(g.top);
            dist[g.bottom].ok_or(Error::Disconnected)?;
            Ok(count[g.bottom])
        }
        DefectConvention::DeckNeighbours => {
            let mut best: Option<(usize, u128)> = None;
            for &u in g.graph.neighbors(g.top) {
                let (dist, count) = g.graph.shortest_path_counts(u);
                for &v in g.graph.neighbors(g.bottom) {
                    let dv = dist[v].ok_or(Error::Disconnected)?;
                    best = match best {
                        Some((bd, _)) if dv < bd => Some((dv, count[v])),
                        Some((bd, c)) if dv == bd => Some((bd, c.saturating_add(count[v]))),
                        None => Some((dv, count[v])),
                        keep => keep,
                    };
                }
            }
            best.map(|(_, c)| c).ok_or(Error::Disconnected)
        }
    }
}

/// A configured smoothing of the width.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum WidthHeuristic {
    /// Mean distance between rings at facet-ridge distance `ring` from each
    /// deck. `ring = 1` is the plain average width.
    MeanDistance { ring: usize, include_diagonal: bool },
    /// Fraction of ring pairs realizing the minimum ring distance.
    ShortestPairFraction { ring: usize },
    /// Total number of shortest paths over ring pairs at minimum distance.
    ShortestPathCount { ring: usize },
    /// Fraction of ring pairs realizing the maximum ring distance.
    LongestPairFraction { ring: usize },
    /// Fraction of facets lying on no shortest deck-to-deck path.
    OffGeodesicFraction,
}

impl WidthHeuristic {
    /// The plain average width: neighbours of one deck against neighbours of
    /// the other, excluding `u = v` pairs.
    pub const AVERAGE_WIDTH: WidthHeuristic = WidthHeuristic::MeanDistance { ring: 1, include_diagonal: false };

    /// Whether larger raw values are better (closer to wider prismatoids).
    pub fn higher_is_better(&self) -> bool {
        !matches!(self, WidthHeuristic::ShortestPairFraction { .. } | WidthHeuristic::ShortestPathCount { .. })
    }
}

fn ring(g: &DeckGraph, deck_node: usize, k: usize) -> Vec<usize> {
    g.graph
        .distances(deck_node)
        .iter()
        .enumerate()
        .filter(|(_, d)| **d == Some(k))
        .map(|(i, _)| i)
        .collect()
}

/// Evaluates one heuristic; ring pairs range over `u` near the bottom deck
/// and `v` near the top deck.
pub fn average_width(g: &DeckGraph, h: &WidthHeuristic) -> Result<f64> {
    match *h {
        WidthHeuristic::OffGeodesicFraction => {
            let dt = g.graph.distances(g.top);
            let db = g.graph.distances(g.bottom);
            let w = dt[g.bottom].ok_or(Error::Disconnected)?;
            let mut off = 0usize;
            for (a, b) in dt.iter().zip(&db) {
                let (a, b) = (a.ok_or(Error::Disconnected)?, b.ok_or(Error::Disconnected)?);
                if a + b > w {
                    off += 1;
                }
            }
            Ok(off as f64 / g.graph.len() as f64)
        }
        WidthHeuristic::MeanDistance { ring: k, include_diagonal } => {
            let (bottom, top) = (ring(g, g.bottom, k), ring(g, g.top, k));
            let mut sum = 0usize;
            let mut pairs = 0usize;
            for &u in &bottom {
                let dist = g.graph.distances(u);
                for &v in &top {
                    if u == v && !include_diagonal {
                        continue;
                    }
                    sum += dist[v].ok_or(Error::Disconnected)?;
                    pairs += 1;
                }
            }
            Ok(if pairs == 0 { 0.0 } else { sum as f64 / pairs as f64 })
        }
        WidthHeuristic::ShortestPairFraction { ring: k }
        | WidthHeuristic::ShortestPathCount { ring: k }
        | WidthHeuristic::LongestPairFraction { ring: k } => {
            let (bottom, top) = (ring(g, g.bottom, k), ring(g, g.top, k));
            let mut table = Vec::new();
            for &u in &bottom {
                let (dist, count) = g.graph.shortest_path_counts(u);
                for &v in &top {
                    table.push((dist[v].ok_or(Error::Disconnected)?, count[v]));
                }
            }
            if table.is_empty() {
                return Ok(0.0);
            }
            let lo = table.iter().map(|t| t.0).min().expect("nonempty");
            let hi = table.iter().map(|t| t.0).max().expect("nonempty");
            let total = table.len() as f64;
            Ok(match *h {
                WidthHeuristic::ShortestPairFraction { .. } => {
                    table.iter().filter(|t| t.0 == lo).count() as f64 / total
                }
                WidthHeuristic::ShortestPathCount { .. } => {
                    table.iter().filter(|t| t.0 == lo).map(|t| t.1 as f64).sum()
                }
                _ => table.iter().filter(|t| t.0 == hi).count() as f64 / total,
            })
        }
    }
}
