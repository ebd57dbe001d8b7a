//! Standard polytopes used as fixtures and reference objects.

use itertools::Itertools;

use crate::polytope::Polytope;
use crate::vset::VertexSet;

/// The cube `[-1, 1]^d`; vertex `m` has coordinate `j` equal to `+1` iff bit
/// `j` of `m` is set.
pub fn cube(d: usize) -> Polytope {
    let rows: Vec<Vec<i64>> = (0..1usize << d)
        .map(|m| (0..d).map(|j| if m >> j & 1 == 1 { 1 } else { -1 }).collect())
        .collect();
    Polytope::from_i64_rows(&rows).expect("cube rows are well formed")
}

/// The cross-polytope `conv(±e_i)`; rows `2j` and `2j+1` are `e_j`, `-e_j`.
pub fn cross_polytope(d: usize) -> Polytope {
    let mut rows = Vec::with_capacity(2 * d);
    for j in 0..d {
        for s in [1, -1] {
            let mut r = vec![0i64; d];
            r[j] = s;
            rows.push(r);
        }
    }
    Polytope::from_i64_rows(&rows).expect("cross-polytope rows are well formed")
}

/// The standard simplex `conv(0, e_1, ..., e_d)`.
pub fn simplex(d: usize) -> Polytope {
    let mut rows = vec![vec![0i64; d]];
    for j in 0..d {
        let mut r = vec![0; d];
        r[j] = 1;
        rows.push(r);
    }
    Polytope::from_i64_rows(&rows).expect("simplex rows are well formed")
}

/// The triangular prism with decks at `z = 0` (rows 0..3) and `z = 1`.
pub fn triangular_prism() -> Polytope {
    Polytope::from_i64_rows(&[
        vec![0, 0, 0],
        vec![1, 0, 0],
        vec![0, 1, 0],
        vec![0, 0, 1],
        vec![1, 0, 1],
        vec![0, 1, 1],
    ])
    .expect("prism rows are well formed")
}

/// The cyclic polytope `C(n, d)` on the moment curve at `t = 1..=n`.
pub fn cyclic(n: usize, d: usize) -> Polytope {
    let rows: Vec<Vec<i64>> =
        (1..=n as i64).map(|t| (1..=d as u32).map(|k| t.pow(k)).collect()).collect();
    Polytope::from_i64_rows(&rows).expect("moment curve rows are well formed")
}

/// Facets of `C(n, d)` by Gale's evenness condition, indexed along the
/// moment curve: a `d`-subset `S` is a facet iff every two elements outside
/// `S` are separated by an even number of elements of `S`.
pub fn cyclic_facets(n: usize, d: usize) -> Vec<VertexSet> {
    let mut out: Vec<VertexSet> = (0..n)
        .combinations(d)
        .map(VertexSet::from_indices)
        .filter(|s| {
            let outside: Vec<usize> = (0..n).filter(|&i| !s.contains(i)).collect();
            outside.windows(2).all(|w| (w[0] + 1..w[1]).filter(|&k| s.contains(k)).count() % 2 == 0)
        })
        .collect();
    out.sort();
    out
}
