//! Longest paths along which a linear functional strictly increases.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::graph::{facet_ridge_graph, vertex_edge_graph, Graph};
use crate::hull::{facets_exact, Hull, Incidence};
use crate::hyperplane::Sense;
use crate::num::Rational;
use crate::polytope::Polytope;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TieBreak {
    /// Equal functional values are an error.
    #[default]
    Error,
    /// Break ties by comparing coordinates lexicographically, i.e. perturb
    /// the functional by `ε e_1 + ε² e_2 + ...`.
    Lexicographic,
}

/// Longest path (in edges) in `g` oriented by increasing `order`, via
/// dynamic programming over a topological order. `order` must be a strict
/// total order on the nodes.
pub fn longest_increasing_path<F>(g: &Graph, mut cmp: F) -> usize
where
    F: FnMut(usize, usize) -> Ordering,
{
    let mut topo: Vec<usize> = (0..g.len()).collect();
    topo.sort_by(|&a, &b| cmp(a, b));
    let mut rank = vec![0usize; g.len()];
    for (r, &v) in topo.iter().enumerate() {
        rank[v] = r;
    }
    let mut best = vec![0usize; g.len()];
    for &v in &topo {
        best[v] = g
            .neighbors(v)
            .iter()
            .filter(|&&u| rank[u] < rank[v])
            .map(|&u| best[u] + 1)
            .max()
            .unwrap_or(0);
    }
    best.into_iter().max().unwrap_or(0)
}

fn check_generic<T: PartialEq>(values: &[T]) -> Result<()> {
    for i in 0..values.len() {
        for j in i + 1..values.len() {
            if values[i] == values[j] {
                return Err(Error::NonGenericFunctional(i, j));
            }
        }
    }
    Ok(())
}

/// Longest `c`-monotone path in the vertex-edge graph of `p`.
pub fn monotone_path_length(p: &Polytope, functional: &[Rational], tie: TieBreak) -> Result<usize> {
    let hull = facets_exact(p)?;
    let g = vertex_edge_graph(&hull.incidence);
    let values: Vec<Rational> = p
        .rows()
        .iter()
        .map(|r| r.iter().zip(functional).map(|(a, b)| a * b).sum())
        .collect();
    if tie == TieBreak::Error {
        check_generic(&values)?;
    }
    Ok(longest_increasing_path(&g, |a, b| {
        values[a].cmp(&values[b]).then_with(|| p.row(a).cmp(p.row(b)))
    }))
}

/// First coordinates of the polar dual's vertices (one per facet), exactly.
fn dual_first_coordinates_exact(p: &Polytope, hull: &Hull) -> Vec<Rational> {
    let c = p.centroid();
    hull.facets
        .iter()
        .map(|f| {
            let mut a = f.inequality.plane.normal_rational();
            let mut b = Rational::from_integer(f.inequality.plane.offset().clone());
            if f.inequality.sense == Sense::Ge {
                a.iter_mut().for_each(|x| *x = -x.clone());
                b = -b;
            }
            let shift: Rational = a.iter().zip(&c).map(|(x, y)| x * y).sum();
            &a[0] / (b - shift)
        })
        .collect()
}

/// Longest path increasing in the first coordinate on the polar dual of
/// `p` (about its centroid). The dual has one vertex per facet of `p` and
/// its graph is `p`'s facet-ridge graph, so no dual hull is needed.
pub fn dual_monotone_length_exact(p: &Polytope, hull: &Hull) -> Result<usize> {
    let values = dual_first_coordinates_exact(p, hull);
    check_generic(&values)?;
    let g = facet_ridge_graph(&hull.incidence);
    Ok(longest_increasing_path(&g, |a, b| values[a].cmp(&values[b])))
}

/// Float pre-screen variant of [`dual_monotone_length_exact`].
pub fn dual_monotone_length_float(points: &[Vec<f64>], inc: &Incidence) -> Result<usize> {
    let n = points.len() as f64;
    let d = inc.d;
    let c: Vec<f64> = (0..d).map(|j| points.iter().map(|p| p[j]).sum::<f64>() / n).collect();
    let values: Vec<f64> = inc
        .normals
        .iter()
        .zip(&inc.offsets)
        .map(|(a, b)| {
            let shift: f64 = a.iter().zip(&c).map(|(x, y)| x * y).sum();
            a[0] / (b - shift)
        })
        .collect();
    let mut sorted: Vec<(f64, usize)> = values.iter().copied().zip(0..).collect();
    sorted.sort_by(|x, y| x.0.total_cmp(&y.0));
    for w in sorted.windows(2) {
        let scale = w[0].0.abs().max(w[1].0.abs()).max(1.0);
        if (w[1].0 - w[0].0).abs() <= 1e-12 * scale {
            return Err(Error::NonGenericFunctional(w[0].1, w[1].1));
        }
    }
    let g = facet_ridge_graph(inc);
    Ok(longest_increasing_path(&g, |a, b| values[a].total_cmp(&values[b])))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shapes;

    fn r(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    /// Exhaustive DFS over all increasing paths.
    fn dfs_longest(g: &Graph, key: &dyn Fn(usize) -> Rational) -> usize {
        fn go(g: &Graph, v: usize, key: &dyn Fn(usize) -> Rational) -> usize {
            g.neighbors(v).iter().filter(|&&u| key(u) > key(v)).map(|&u| 1 + go(g, u, key)).max().unwrap_or(0)
        }
        (0..g.len()).map(|v| go(g, v, key)).max().unwrap_or(0)
    }

    #[test]
    fn simplex_has_full_chain() {
        let p = shapes::simplex(5);
        let c = vec![r(1), r(2), r(3), r(4), r(5)];
        assert_eq!(monotone_path_length(&p, &c, TieBreak::Error).unwrap(), 5);
    }

    #[test]
    fn cube_with_binary_weights() {
        let p = shapes::cube(3);
        assert_eq!(monotone_path_length(&p, &[r(1), r(2), r(4)], TieBreak::Error).unwrap(), 3);
    }

    #[test]
    fn hexagon_with_lexicographic_ties() {
        let h = "866/1000";
        let text = format!("6 2\n1 0\n1/2 {h}\n-1/2 {h}\n-1 0\n-1/2 -{h}\n1/2 -{h}\n");
        let p: Polytope = text.parse().unwrap();
        let c = [r(1), r(0)];
        assert!(matches!(monotone_path_length(&p, &c, TieBreak::Error), Err(Error::NonGenericFunctional(_, _))));
        let got = monotone_path_length(&p, &c, TieBreak::Lexicographic).unwrap();
        let g = vertex_edge_graph(&facets_exact(&p).unwrap().incidence);
        let key = |v: usize| -> Rational {
            // lexicographic perturbation realized with a tiny second weight
            p.row(v)[0].clone() + p.row(v)[1].clone() / Rational::from_integer(1_000_000.into())
        };
        assert_eq!(got, dfs_longest(&g, &key));
        assert_eq!(got, 3);
    }

    #[test]
    fn dual_of_generic_simplex() {
        let p = Polytope::from_i64_rows(&[
            vec![0, 0, 0, 0, 0],
            vec![7, 1, 0, 2, 0],
            vec![1, 5, 2, 0, 1],
            vec![-2, 3, 9, 1, 0],
            vec![4, -1, 2, 8, 3],
            vec![1, 2, -3, 1, 11],
        ])
        .unwrap();
        let hull = facets_exact(&p).unwrap();
        assert_eq!(dual_monotone_length_exact(&p, &hull).unwrap(), 5);
        let inc = crate::hull::facets_float(&p).unwrap();
        assert_eq!(dual_monotone_length_float(&p.to_f64_rows(), &inc).unwrap(), 5);
    }
}
