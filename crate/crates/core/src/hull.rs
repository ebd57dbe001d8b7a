//! Vertex-to-facet conversion by the double description method.
//!
//! Points are homogenized to `p_i = (1, v_i)`; facets of `conv(V)` are the
//! extreme rays of the cone `{y : p_i · y >= 0}`. Rays are added constraint
//! by constraint with the combinatorial adjacency test, so degenerate input
//! (many vertices on one facet, as on prismatoid decks) needs no special
//! handling. The same driver runs over exact integers or over `f64` with a
//! tolerance; the float path is a pre-screen only.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::hyperplane::{Hyperplane, Sense, SignedConstraint};
use crate::linalg::{dual_basis, rank_int, solve_f64};
use crate::num::{dot_int, primitive, sign};
use crate::polytope::Polytope;
use crate::vset::VertexSet;

/// Sidedness tolerance for the float path.
pub const EPS_GEO: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Arithmetic {
    Exact,
    Float,
}

/// One facet with its exact supporting inequality; every vertex of the
/// polytope satisfies `inequality`, and exactly `vertices` attain equality.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub vertices: VertexSet,
    pub inequality: SignedConstraint,
}

/// Facet-vertex incidences plus outward unit normals (floats in both modes).
/// Facets are sorted by vertex set, which is the canonical facet order.
#[derive(Clone, Debug, PartialEq)]
pub struct Incidence {
    pub n: usize,
    pub d: usize,
    pub facets: Vec<VertexSet>,
    pub normals: Vec<Vec<f64>>,
    pub offsets: Vec<f64>,
}

impl Incidence {
    pub fn facet_count(&self) -> usize {
        self.facets.len()
    }

    pub fn all(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Intersection of all facets containing `s`; the smallest face (as a
    /// vertex set) containing `s`, or every vertex when no facet does.
    pub fn closure(&self, s: VertexSet) -> VertexSet {
        self.facets
            .iter()
            .filter(|f| s.is_subset(**f))
            .fold(self.all(), |acc, f| acc.intersect(*f))
    }

    /// Whether the points indexed by `s` are exactly the vertices of a proper
    /// face.
    pub fn is_face(&self, s: VertexSet) -> bool {
        !s.is_empty() && s != self.all() && self.closure(s) == s
    }

    /// Indices that are not vertices (interior, on a face's relative
    /// interior, or duplicated).
    pub fn non_vertices(&self) -> Vec<usize> {
        (0..self.n).filter(|&i| self.closure(VertexSet::singleton(i)).len() != 1).collect()
    }

    /// The labelled combinatorial type: sorted facet vertex sets.
    pub fn signature(&self) -> &[VertexSet] {
        &self.facets
    }

    pub fn position(&self, facet: VertexSet) -> Option<usize> {
        self.facets.binary_search(&facet).ok()
    }
}

/// Exact facets plus their incidence view.
#[derive(Clone, Debug)]
pub struct Hull {
    pub facets: Vec<Facet>,
    pub incidence: Incidence,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SpanReport {
    Ok,
    /// Rows that are not vertices of the hull.
    Redundant(Vec<usize>),
    /// The rows affinely span only `rank` dimensions.
    RankDeficient { rank: usize, dim: usize },
}

impl SpanReport {
    pub fn is_ok(&self) -> bool {
        matches!(self, SpanReport::Ok)
    }
}

trait Field {
    type E: Clone + std::fmt::Debug;
    fn dot(&self, a: &[Self::E], b: &[Self::E]) -> Self::E;
    fn sign(&self, x: &Self::E) -> i32;
    /// `sp * rn - sn * rp`, normalized. With `sp > 0 > sn` this is a positive
    /// combination lying on the hyperplane that separated `rp` and `rn`.
    fn combine(&self, rp: &[Self::E], sp: &Self::E, rn: &[Self::E], sn: &Self::E) -> Vec<Self::E>;
    fn initial_rays(&self, basis: &[Vec<Self::E>]) -> Option<Vec<Vec<Self::E>>>;
    fn independent(&self, chosen: &[Vec<Self::E>], candidate: &[Self::E]) -> bool;
}

struct ExactField;

impl Field for ExactField {
    type E = BigInt;

    fn dot(&self, a: &[BigInt], b: &[BigInt]) -> BigInt {
        dot_int(a, b)
    }

    fn sign(&self, x: &BigInt) -> i32 {
        sign(x)
    }

    fn combine(&self, rp: &[BigInt], sp: &BigInt, rn: &[BigInt], sn: &BigInt) -> Vec<BigInt> {
        primitive(rp.iter().zip(rn).map(|(p, n)| sp * n - sn * p).collect())
    }

    fn initial_rays(&self, basis: &[Vec<BigInt>]) -> Option<Vec<Vec<BigInt>>> {
        dual_basis(basis)
    }

    fn independent(&self, chosen: &[Vec<BigInt>], candidate: &[BigInt]) -> bool {
        let mut rows = chosen.to_vec();
        rows.push(candidate.to_vec());
        rank_int(&rows) == rows.len()
    }
}

struct FloatField {
    eps: f64,
}

fn normalize_max(mut v: Vec<f64>) -> Vec<f64> {
    let m = v.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    if m > 0.0 {
        v.iter_mut().for_each(|x| *x /= m);
    }
    v
}

impl Field for FloatField {
    type E = f64;

    fn dot(&self, a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    fn sign(&self, x: &f64) -> i32 {
        if *x > self.eps {
            1
        } else if *x < -self.eps {
            -1
        } else {
            0
        }
    }

    fn combine(&self, rp: &[f64], sp: &f64, rn: &[f64], sn: &f64) -> Vec<f64> {
        normalize_max(rp.iter().zip(rn).map(|(p, n)| sp * n - sn * p).collect())
    }

    fn initial_rays(&self, basis: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
        let n = basis.len();
        (0..n)
            .map(|j| {
                let e: Vec<f64> = (0..n).map(|i| if i == j { 1.0 } else { 0.0 }).collect();
                solve_f64(basis, &e, 1e-12).map(normalize_max)
            })
            .collect()
    }

    fn independent(&self, chosen: &[Vec<f64>], candidate: &[f64]) -> bool {
        // Gram-Schmidt residual relative to the candidate's norm.
        let mut ortho: Vec<Vec<f64>> = Vec::new();
        for r in chosen.iter().chain(std::iter::once(&candidate.to_vec())) {
            let mut v = r.clone();
            for q in &ortho {
                let c = self.dot(&v, q);
                v.iter_mut().zip(q).for_each(|(x, y)| *x -= c * y);
            }
            let norm = self.dot(&v, &v).sqrt();
            let base = self.dot(r, r).sqrt();
            if norm <= 1e-10 * base.max(1e-300) {
                return false;
            }
            ortho.push(v.iter().map(|x| x / norm).collect());
        }
        true
    }
}

struct Ray<E> {
    coords: Vec<E>,
    zeros: VertexSet,
}

/// Runs the double description method; returns rays with zero sets over all
/// rows, or the affine rank when the rows do not span.
fn double_description<F: Field>(field: &F, rows: &[Vec<F::E>]) -> Result<Vec<Ray<F::E>>, usize> {
    let dim = rows.first().map_or(0, Vec::len);
    let mut basis_idx = Vec::with_capacity(dim);
    let mut basis: Vec<Vec<F::E>> = Vec::with_capacity(dim);
    for (i, r) in rows.iter().enumerate() {
        if basis.len() == dim {
            break;
        }
        if field.independent(&basis, r) {
            basis.push(r.clone());
            basis_idx.push(i);
        }
    }
    if basis.len() < dim {
        return Err(basis.len());
    }
    let init = field.initial_rays(&basis).ok_or(basis.len() - 1)?;
    let basis_set = VertexSet::from_indices(basis_idx.iter().copied());
    let mut rays: Vec<Ray<F::E>> = init
        .into_iter()
        .zip(&basis_idx)
        .map(|(coords, &j)| Ray { coords, zeros: basis_set.without(j) })
        .collect();

    for (i, row) in rows.iter().enumerate() {
        if basis_set.contains(i) {
            continue;
        }
        let vals: Vec<F::E> = rays.iter().map(|r| field.dot(row, &r.coords)).collect();
        let signs: Vec<i32> = vals.iter().map(|v| field.sign(v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| signs[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| signs[k] < 0).collect();
        if neg.is_empty() {
            for (k, r) in rays.iter_mut().enumerate() {
                if signs[k] == 0 {
                    r.zeros = r.zeros.with(i);
                }
            }
            continue;
        }
        let mut created = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.intersect(rays[q].zeros);
                if common.len() + 2 < dim {
                    continue;
                }
                let blocked = rays.iter().enumerate().any(|(k, r)| {
                    k != p && k != q && common.is_subset(r.zeros)
                });
                if blocked {
                    continue;
                }
                let coords = field.combine(&rays[p].coords, &vals[p], &rays[q].coords, &vals[q]);
                created.push(Ray { coords, zeros: common.with(i) });
            }
        }
        let mut next: Vec<Ray<F::E>> = Vec::with_capacity(rays.len() + created.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            match signs[k] {
                1 => next.push(r),
                0 => {
                    r.zeros = r.zeros.with(i);
                    next.push(r);
                }
                _ => {}
            }
        }
        next.extend(created);
        rays = next;
    }
    Ok(rays)
}

fn check_facets<E>(rays: &[Ray<E>], d: usize) -> Result<()> {
    if let Some(r) = rays.iter().find(|r| r.zeros.len() < d) {
        return Err(Error::Degenerate(format!(
            "facet with only {} incident points in dimension {d}",
            r.zeros.len()
        )));
    }
    Ok(())
}

/// Exact facet enumeration.
pub fn facets_exact(p: &Polytope) -> Result<Hull> {
    let d = p.dim();
    let rows = p.homogeneous_integer_rows();
    let rays = double_description(&ExactField, &rows).map_err(|rank| {
        Error::Degenerate(format!("points affinely span dimension {} < {d}", rank.saturating_sub(1)))
    })?;
    check_facets(&rays, d)?;
    let mut facets: Vec<Facet> = rays
        .into_iter()
        .map(|r| {
            // y0 + y'·x >= 0  <=>  y'·x >= -y0
            let normal = r.coords[1..].to_vec();
            let flips = Hyperplane::canonical_flips(&normal);
            let plane = Hyperplane::new(normal, -r.coords[0].clone())?;
            let sense = if flips { Sense::Le } else { Sense::Ge };
            Ok(Facet { vertices: r.zeros, inequality: SignedConstraint::new(plane, sense) })
        })
        .collect::<Result<_>>()?;
    facets.sort_by_key(|f| f.vertices);
    facets.dedup_by_key(|f| f.vertices);
    let (normals, offsets) = facets
        .iter()
        .map(|f| {
            let fp = f.inequality.as_float_le();
            (fp.normal, fp.offset)
        })
        .unzip();
    let incidence = Incidence {
        n: p.len(),
        d,
        facets: facets.iter().map(|f| f.vertices).collect(),
        normals,
        offsets,
    };
    Ok(Hull { facets, incidence })
}

/// Float facet enumeration with sidedness tolerance [`EPS_GEO`].
pub fn facets_float(p: &Polytope) -> Result<Incidence> {
    facets_float_rows(&p.to_f64_rows())
}

pub fn facets_float_rows(points: &[Vec<f64>]) -> Result<Incidence> {
    let d = points.first().map_or(0, Vec::len);
    if points.len() > crate::MAX_VERTICES {
        return Err(Error::TooManyVertices(points.len()));
    }
    if points.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Degenerate("non-finite coordinate".into()));
    }
    let rows: Vec<Vec<f64>> = points
        .iter()
        .map(|v| normalize_max(std::iter::once(1.0).chain(v.iter().copied()).collect()))
        .collect();
    let field = FloatField { eps: EPS_GEO };
    let rays = double_description(&field, &rows).map_err(|rank| {
        Error::Degenerate(format!("points affinely span dimension {} < {d}", rank.saturating_sub(1)))
    })?;
    check_facets(&rays, d)?;
    let mut out: Vec<(VertexSet, Vec<f64>, f64)> = rays
        .into_iter()
        .map(|r| {
            // outward: -y'·x <= y0
            let a: Vec<f64> = r.coords[1..].iter().map(|x| -x).collect();
            let norm = a.iter().map(|x| x * x).sum::<f64>().sqrt().max(1e-300);
            (r.zeros, a.iter().map(|x| x / norm).collect(), r.coords[0] / norm)
        })
        .collect();
    out.sort_by_key(|f| f.0);
    out.dedup_by_key(|f| f.0);
    let mut facets = Vec::with_capacity(out.len());
    let mut normals = Vec::with_capacity(out.len());
    let mut offsets = Vec::with_capacity(out.len());
    for (s, a, b) in out {
        facets.push(s);
        normals.push(a);
        offsets.push(b);
    }
    Ok(Incidence { n: points.len(), d, facets, normals, offsets })
}

pub fn incidence(p: &Polytope, mode: Arithmetic) -> Result<Incidence> {
    match mode {
        Arithmetic::Exact => facets_exact(p).map(|h| h.incidence),
        Arithmetic::Float => facets_float(p),
    }
}

/// Whether the rows are the vertices of a full-dimensional polytope.
pub fn proper_spanning_check(p: &Polytope, mode: Arithmetic) -> SpanReport {
    let d = p.dim();
    let inc = match mode {
        Arithmetic::Exact => {
            let rows = p.homogeneous_integer_rows();
            let rank = rank_int(&rows);
            if rank < d + 1 {
                return SpanReport::RankDeficient { rank: rank.saturating_sub(1), dim: d };
            }
            facets_exact(p).map(|h| h.incidence)
        }
        Arithmetic::Float => facets_float(p),
    };
    match inc {
        Ok(inc) => {
            let bad = inc.non_vertices();
            if bad.is_empty() {
                SpanReport::Ok
            } else {
                SpanReport::Redundant(bad)
            }
        }
        Err(_) => SpanReport::RankDeficient { rank: d.saturating_sub(1), dim: d },
    }
}

/// Exact face test: `s` indexes the vertex set of a proper face.
pub fn face_test(p: &Polytope, s: VertexSet) -> Result<bool> {
    Ok(facets_exact(p)?.incidence.is_face(s))
}

/// Brute-force facet oracle: every `d`-subset spanning a supporting
/// hyperplane, tested directly. Exponential; for small test inputs.
pub fn facets_brute_force(p: &Polytope) -> Result<Vec<VertexSet>> {
    let d = p.dim();
    let n = p.len();
    let rows = p.homogeneous_integer_rows();
    let mut found = std::collections::BTreeSet::new();
    let mut idx: Vec<usize> = (0..d).collect();
    if n < d {
        return Ok(Vec::new());
    }
    loop {
        let sub: Vec<&[BigInt]> = idx.iter().map(|&i| rows[i].as_slice()).collect();
        if let Ok(h) = crate::hyperplane::hyperplane_through_homogeneous(&sub) {
            let vals: Vec<BigInt> = rows.iter().map(|r| h.eval_homogeneous(r)).collect();
            let any_pos = vals.iter().any(|v| v.is_positive());
            let any_neg = vals.iter().any(|v| v.is_negative());
            if !(any_pos && any_neg) {
                let on = VertexSet::from_indices((0..n).filter(|&i| vals[i].is_zero()));
                found.insert(on);
            }
        }
        // next combination
        let mut k = d;
        loop {
            if k == 0 {
                return Ok(found.into_iter().collect());
            }
            k -= 1;
            if idx[k] < n - d + k {
                idx[k] += 1;
                for j in k + 1..d {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(rows: &[Vec<i64>]) -> Polytope {
        Polytope::from_i64_rows(rows).unwrap()
    }

    fn cube(d: usize) -> Polytope {
        let rows: Vec<Vec<i64>> = (0..1usize << d)
            .map(|m| (0..d).map(|j| if m >> j & 1 == 1 { 1 } else { -1 }).collect())
            .collect();
        poly(&rows)
    }

    fn cross(d: usize) -> Polytope {
        let mut rows = Vec::new();
        for j in 0..d {
            for s in [1, -1] {
                let mut r = vec![0; d];
                r[j] = s;
                rows.push(r);
            }
        }
        poly(&rows)
    }

    #[test]
    fn octahedron_has_eight_triangles() {
        let h = facets_exact(&cross(3)).unwrap();
        assert_eq!(h.facets.len(), 8);
        assert!(h.facets.iter().all(|f| f.vertices.len() == 3));
    }

    #[test]
    fn cube_has_six_squares() {
        let h = facets_exact(&cube(3)).unwrap();
        assert_eq!(h.facets.len(), 6);
        assert!(h.facets.iter().all(|f| f.vertices.len() == 4));
        let f = facets_float(&cube(3)).unwrap();
        assert_eq!(f.facets, h.incidence.facets);
    }

    #[test]
    fn facet_inequalities_support_the_hull() {
        let p = cube(3);
        for f in facets_exact(&p).unwrap().facets {
            for (i, row) in p.rows().iter().enumerate() {
                let s = f.inequality.slack(row);
                assert!(!s.is_negative());
                assert_eq!(s.is_zero(), f.vertices.contains(i));
            }
        }
    }

    #[test]
    fn span_reports() {
        let square = poly(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1]]);
        assert_eq!(proper_spanning_check(&square, Arithmetic::Exact), SpanReport::Ok);
        let with_center = poly(&[vec![1, 1], vec![1, -1], vec![-1, 1], vec![-1, -1], vec![0, 0]]);
        assert_eq!(
            proper_spanning_check(&with_center, Arithmetic::Exact),
            SpanReport::Redundant(vec![4])
        );
        assert_eq!(
            proper_spanning_check(&with_center, Arithmetic::Float),
            SpanReport::Redundant(vec![4])
        );
        let collinear = poly(&[vec![0, 0], vec![1, 1], vec![2, 2]]);
        assert!(matches!(
            proper_spanning_check(&collinear, Arithmetic::Exact),
            SpanReport::RankDeficient { rank: 1, dim: 2 }
        ));
        let edge_midpoint = poly(&[vec![0, 0], vec![2, 0], vec![0, 2], vec![1, 0]]);
        assert_eq!(
            proper_spanning_check(&edge_midpoint, Arithmetic::Exact),
            SpanReport::Redundant(vec![3])
        );
    }

    #[test]
    fn faces_of_cross_polytope() {
        let p = cross(4);
        assert!(face_test(&p, VertexSet::singleton(0)).unwrap());
        // rows 0 and 1 are e1 and -e1
        assert!(!face_test(&p, VertexSet::from_indices([0, 1])).unwrap());
        assert!(face_test(&p, VertexSet::from_indices([0, 2])).unwrap());
    }

    #[test]
    fn rank_deficient_enumeration_errors() {
        let flat = poly(&[vec![0, 0, 0], vec![1, 0, 0], vec![0, 1, 0], vec![1, 1, 0]]);
        assert!(matches!(facets_exact(&flat), Err(Error::Degenerate(_))));
    }

    #[test]
    fn brute_force_agrees_on_cube() {
        let p = cube(3);
        assert_eq!(facets_brute_force(&p).unwrap(), facets_exact(&p).unwrap().incidence.facets);
    }
}
