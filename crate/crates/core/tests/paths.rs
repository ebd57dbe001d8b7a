mod common;

use std::cmp::Ordering;

use common::{random_prismatoid, sphere_points};
use hopper_core::analysis::monotone::{monotone_path_length, TieBreak};
use hopper_core::analysis::prismatoid::{decks_by_last_coordinate, DeckGraph};
use hopper_core::analysis::width::{defect, width, DefectConvention};
use hopper_core::graph::{vertex_edge_graph, Graph};
use hopper_core::hull::facets_exact;
use hopper_core::num::Rational;
use hopper_core::polytope::Polytope;
use hopper_core::shapes;
use proptest::prelude::*;

/// Longest strictly increasing path by exhaustive search.
fn dfs_longest(g: &Graph, cmp: &dyn Fn(usize, usize) -> Ordering) -> usize {
    fn go(g: &Graph, v: usize, cmp: &dyn Fn(usize, usize) -> Ordering) -> usize {
        g.neighbors(v).iter().filter(|&&u| cmp(u, v) == Ordering::Greater).map(|&u| 1 + go(g, u, cmp)).max().unwrap_or(0)
    }
    (0..g.len()).map(|v| go(g, v, cmp)).max().unwrap_or(0)
}

/// Number of walks of exactly `len` edges from `from` to `to` that never
/// revisit a node; with `len` the distance these are the shortest paths.
fn enumerate_paths(g: &Graph, from: usize, to: usize, len: usize) -> u128 {
    fn go(g: &Graph, v: usize, to: usize, left: usize, seen: &mut Vec<bool>) -> u128 {
        if left == 0 {
            return u128::from(v == to);
        }
        let mut total = 0;
        for &u in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                total += go(g, u, to, left - 1, seen);
                seen[u] = false;
            }
        }
        total
    }
    let mut seen = vec![false; g.len()];
    seen[from] = true;
    go(g, from, to, len, &mut seen)
}

fn value(p: &Polytope, c: &[Rational], i: usize) -> Rational {
    p.row(i).iter().zip(c).map(|(a, b)| a * b).sum()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn monotone_dp_matches_exhaustive_search(seed in any::<u64>(), n in 4usize..=8, c in prop::array::uniform3(-20i64..=20)) {
        let p = sphere_points(seed, n, 3);
        let c: Vec<Rational> = c.iter().map(|&x| Rational::from_integer(x.into())).collect();
        let g = vertex_edge_graph(&facets_exact(&p).unwrap().incidence);
        let cmp = |a: usize, b: usize| value(&p, &c, a).cmp(&value(&p, &c, b)).then_with(|| p.row(a).cmp(p.row(b)));
        let got = monotone_path_length(&p, &c, TieBreak::Lexicographic).unwrap();
        prop_assert_eq!(got, dfs_longest(&g, &cmp));
    }

    #[test]
    fn defect_counts_every_shortest_deck_path(seed in any::<u64>(), d in 3usize..=4, top in 0usize..=2, bottom in 0usize..=2) {
        let p = random_prismatoid(seed, d + top, d + bottom, d);
        let inc = facets_exact(&p).unwrap().incidence;
        let (t, b) = decks_by_last_coordinate(&p);
        let g = DeckGraph::new(&inc, t, b).unwrap();
        let w = width(&g).unwrap();
        let oracle = enumerate_paths(&g.graph, g.top, g.bottom, w);
        prop_assert!(oracle > 0);
        prop_assert_eq!(defect(&g, DefectConvention::DeckNodes).unwrap(), oracle);
        prop_assert_eq!(enumerate_paths(&g.graph, g.top, g.bottom, w.saturating_sub(1)), 0);
    }
}

#[test]
fn generic_five_simplex_chain() {
    let p = shapes::simplex(5);
    let c: Vec<Rational> = (1..=5).map(|x: i64| Rational::from_integer(x.into())).collect();
    assert_eq!(monotone_path_length(&p, &c, TieBreak::Error).unwrap(), 5);
}

#[test]
fn non_generic_functional_is_rejected() {
    let p = shapes::cube(3);
    let c = vec![Rational::from_integer(1.into()); 3];
    assert!(monotone_path_length(&p, &c, TieBreak::Error).is_err());
    assert_eq!(monotone_path_length(&p, &c, TieBreak::Lexicographic).unwrap(), 3);
}
